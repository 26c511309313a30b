/*
 * Copyright 2026 The kernmpi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Header-only C++ helpers for building kmpi_array descriptors. Nothing here
// talks to MPI; it only fills in the C struct.
#ifndef KERNMPI_KERNMPI_HPP
#define KERNMPI_KERNMPI_HPP

#include <kernmpi/kernmpi.h>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <type_traits>

namespace kmpi {

template <class T>
struct kind_of;
template <>
struct kind_of<std::int32_t> : std::integral_constant<kmpi_kind, KMPI_INT32> {};
template <>
struct kind_of<std::int64_t> : std::integral_constant<kmpi_kind, KMPI_INT64> {};
template <>
struct kind_of<float> : std::integral_constant<kmpi_kind, KMPI_FLOAT32> {};
template <>
struct kind_of<double> : std::integral_constant<kmpi_kind, KMPI_FLOAT64> {};
template <>
struct kind_of<std::complex<float>> : std::integral_constant<kmpi_kind, KMPI_COMPLEX64> {};
template <>
struct kind_of<std::complex<double>> : std::integral_constant<kmpi_kind, KMPI_COMPLEX128> {};

template <class T>
inline constexpr kmpi_kind kind_of_v = kind_of<std::remove_cv_t<T>>::value;

enum class Order { RowMajor, ColMajor };

template <class T>
kmpi_array make_view(T* base, std::span<const std::int64_t> shape, std::span<const std::int64_t> byte_strides) {
  if (shape.size() != byte_strides.size() || shape.size() > KMPI_MAX_DIMS) {
    throw std::invalid_argument("kmpi::make_view: bad rank");
  }
  kmpi_array a{};
  a.base = const_cast<std::remove_cv_t<T>*>(base);
  a.kind = kind_of_v<T>;
  a.ndim = static_cast<std::int32_t>(shape.size());
  for (std::size_t d = 0; d < shape.size(); ++d) {
    a.shape[d] = shape[d];
    a.strides[d] = byte_strides[d];
  }
  return a;
}

// Dense view over `base` with the given logical shape and storage order.
template <class T>
kmpi_array dense(T* base, std::initializer_list<std::int64_t> shape, Order order = Order::RowMajor) {
  if (shape.size() > KMPI_MAX_DIMS) {
    throw std::invalid_argument("kmpi::dense: too many dimensions");
  }
  kmpi_array a{};
  a.base = const_cast<std::remove_cv_t<T>*>(base);
  a.kind = kind_of_v<T>;
  a.ndim = static_cast<std::int32_t>(shape.size());
  int d = 0;
  for (auto e : shape) a.shape[d++] = e;
  std::int64_t step = sizeof(T);
  if (order == Order::RowMajor) {
    for (int i = a.ndim - 1; i >= 0; --i) {
      a.strides[i] = step;
      step *= a.shape[i];
    }
  } else {
    for (int i = 0; i < a.ndim; ++i) {
      a.strides[i] = step;
      step *= a.shape[i];
    }
  }
  return a;
}

template <class T>
kmpi_array vector_view(std::span<T> data) {
  return dense(data.data(), {static_cast<std::int64_t>(data.size())});
}

template <class T>
kmpi_array scalar_view(T* value) {
  kmpi_array a{};
  a.base = const_cast<std::remove_cv_t<T>*>(value);
  a.kind = kind_of_v<T>;
  a.ndim = 0;
  return a;
}

// Sub-view selecting [start, stop) with `step` along dimension `dim`.
inline kmpi_array slice(const kmpi_array& v, int dim, std::int64_t start, std::int64_t stop, std::int64_t step = 1) {
  if (dim < 0 || dim >= v.ndim || step <= 0 || start < 0 || stop > v.shape[dim] || start > stop) {
    throw std::out_of_range("kmpi::slice: bad range");
  }
  kmpi_array a = v;
  a.base = static_cast<char*>(v.base) + start * v.strides[dim];
  a.shape[dim] = (stop - start + step - 1) / step;
  a.strides[dim] = v.strides[dim] * step;
  return a;
}

// Sub-view fixing dimension `dim` at `index`; the result has one dimension less.
inline kmpi_array take(const kmpi_array& v, int dim, std::int64_t index) {
  if (dim < 0 || dim >= v.ndim || index < 0 || index >= v.shape[dim]) {
    throw std::out_of_range("kmpi::take: bad index");
  }
  kmpi_array a{};
  a.base = static_cast<char*>(v.base) + index * v.strides[dim];
  a.kind = v.kind;
  a.ndim = v.ndim - 1;
  for (int s = 0, d = 0; s < v.ndim; ++s) {
    if (s == dim) continue;
    a.shape[d] = v.shape[s];
    a.strides[d] = v.strides[s];
    ++d;
  }
  return a;
}

}  // namespace kmpi

#endif  // KERNMPI_KERNMPI_HPP
