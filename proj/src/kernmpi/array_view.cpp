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

#include "array_view.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

namespace kmpi {
namespace {

bool dense_in_order(const ArrayView& v, bool row_major) {
  auto shape = v.shape();
  auto strides = v.strides();
  std::int64_t expected = static_cast<std::int64_t>(v.element_size());
  const int n = v.ndim();
  for (int k = 0; k < n; ++k) {
    const int d = row_major ? n - 1 - k : k;
    if (shape[d] == 1) continue;
    if (strides[d] != expected) return false;
    expected *= shape[d];
  }
  return true;
}

// Visits every element in row-major logical order, calling fn(element_ptr, linear_index).
template <class Fn>
void for_each_element(const ArrayView& v, Fn&& fn) {
  if (v.total_count() == 0) return;
  const int n = v.ndim();
  if (n == 0) {
    fn(v.base(), std::size_t{0});
    return;
  }
  auto shape = v.shape();
  auto strides = v.strides();
  const std::int64_t inner = shape[n - 1];
  const std::int64_t inner_stride = strides[n - 1];
  std::array<std::int64_t, KMPI_MAX_DIMS> index{};
  std::byte* row = v.base();
  std::size_t linear = 0;
  while (true) {
    std::byte* p = row;
    for (std::int64_t i = 0; i < inner; ++i, p += inner_stride) {
      fn(p, linear++);
    }
    int d = n - 2;
    for (; d >= 0; --d) {
      row += strides[d];
      if (++index[d] < shape[d]) break;
      row -= strides[d] * shape[d];
      index[d] = 0;
    }
    if (d < 0) return;
  }
}

template <std::size_t W>
void gather_elements(const ArrayView& v, std::byte* out) {
  for_each_element(v, [out](const std::byte* p, std::size_t i) { std::memcpy(out + i * W, p, W); });
}

template <std::size_t W>
void scatter_elements(const std::byte* in, const ArrayView& v) {
  for_each_element(v, [in](std::byte* p, std::size_t i) { std::memcpy(p, in + i * W, W); });
}

}  // namespace

int ArrayView::from(const kmpi_array* raw, ArrayView& out) {
  if (raw == nullptr) return KMPI_ERR_INVALID_ARG;
  auto kind = to_kind(raw->kind);
  if (!kind || raw->ndim < 0 || raw->ndim > KMPI_MAX_DIMS) return KMPI_ERR_INVALID_ARG;

  ArrayView v;
  v.base_ = static_cast<std::byte*>(raw->base);
  v.kind_ = *kind;
  v.ndim_ = raw->ndim;
  std::int64_t total = 1;
  for (int d = 0; d < v.ndim_; ++d) {
    if (raw->shape[d] < 0) return KMPI_ERR_INVALID_ARG;
    v.shape_[d] = raw->shape[d];
    v.strides_[d] = raw->strides[d];
    if (raw->shape[d] != 0 && total > std::numeric_limits<std::int64_t>::max() / raw->shape[d]) {
      return KMPI_ERR_INVALID_ARG;
    }
    total *= raw->shape[d];
  }
  v.total_ = total;
  if (total != 0 && v.base_ == nullptr) return KMPI_ERR_INVALID_ARG;
  if (total == 0) {
    v.row_major_ = v.col_major_ = true;
  } else {
    v.row_major_ = dense_in_order(v, true);
    v.col_major_ = dense_in_order(v, false);
  }
  out = v;
  return KMPI_SUCCESS;
}

std::pair<const std::byte*, const std::byte*> ArrayView::byte_range() const {
  if (total_ == 0) return {base_, base_};
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (int d = 0; d < ndim_; ++d) {
    const std::int64_t span = strides_[d] * (shape_[d] - 1);
    if (span < 0) {
      lo += span;
    } else {
      hi += span;
    }
  }
  return {base_ + lo, base_ + hi + static_cast<std::int64_t>(element_size())};
}

bool ArrayView::overlaps(const ArrayView& other) const {
  auto [a0, a1] = byte_range();
  auto [b0, b1] = other.byte_range();
  if (a0 == a1 || b0 == b1) return false;
  return a0 < b1 && b0 < a1;
}

PackedBuffer PackedBuffer::borrow(const std::byte* data, std::size_t bytes) {
  PackedBuffer b;
  b.borrowed_ = data;
  b.bytes_ = bytes;
  return b;
}

PackedBuffer PackedBuffer::own(std::vector<std::byte> storage) {
  PackedBuffer b;
  b.storage_ = std::move(storage);
  b.owned_ = true;
  return b;
}

void pack_into(const ArrayView& view, std::span<std::byte> out) {
  if (view.is_row_major_contiguous()) {
    if (view.total_bytes() != 0) std::memcpy(out.data(), view.base(), view.total_bytes());
    return;
  }
  switch (view.element_size()) {
    case 4:
      gather_elements<4>(view, out.data());
      break;
    case 8:
      gather_elements<8>(view, out.data());
      break;
    case 16:
      gather_elements<16>(view, out.data());
      break;
  }
}

std::vector<std::byte> pack_copy(const ArrayView& view) {
  std::vector<std::byte> out(view.total_bytes());
  pack_into(view, out);
  return out;
}

PackedBuffer pack(const ArrayView& view) {
  if (view.is_row_major_contiguous()) {
    return PackedBuffer::borrow(view.base(), view.total_bytes());
  }
  return PackedBuffer::own(pack_copy(view));
}

void unpack(std::span<const std::byte> buffer, const ArrayView& view) {
  if (view.is_row_major_contiguous()) {
    if (view.total_bytes() != 0) std::memcpy(view.base(), buffer.data(), view.total_bytes());
    return;
  }
  switch (view.element_size()) {
    case 4:
      scatter_elements<4>(buffer.data(), view);
      break;
    case 8:
      scatter_elements<8>(buffer.data(), view);
      break;
    case 16:
      scatter_elements<16>(buffer.data(), view);
      break;
  }
}

}  // namespace kmpi
