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

#pragma once

#include <kernmpi/kernmpi.h>
#include <kernmpi/kernmpi.hpp>

#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

namespace kmpi::test {

inline int rank() { return kmpi_rank(); }
inline int size() { return kmpi_size(); }

// True on every rank iff `ok` holds on every rank.
inline bool everywhere(bool ok) {
  int mine = ok ? 1 : 0;
  int all = 0;
  auto s = scalar_view(&mine);
  auto r = scalar_view(&all);
  if (kmpi_allreduce(&s, &r, KMPI_MIN) != 0) return false;
  return all == 1;
}

// Same seed on all ranks unless salted with the rank.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

template <class T>
std::vector<T> allgather_scalar(T value) {
  std::vector<T> out(static_cast<std::size_t>(size()));
  auto s = scalar_view(&value);
  auto r = vector_view(std::span<T>(out));
  kmpi_allgather(&s, &r);
  return out;
}

// Element pointer of a view at multi-index `idx` (no bounds check).
template <class T>
T* at(const kmpi_array& v, std::span<const std::int64_t> idx) {
  auto* p = static_cast<char*>(v.base);
  for (int d = 0; d < v.ndim; ++d) p += idx[d] * v.strides[d];
  return reinterpret_cast<T*>(p);
}

// Visits every multi-index of `v` in row-major logical order.
template <class F>
void for_each_index(const kmpi_array& v, F&& f) {
  std::int64_t total = 1;
  for (int d = 0; d < v.ndim; ++d) total *= v.shape[d];
  if (total == 0) return;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(v.ndim), 0);
  for (std::int64_t n = 0; n < total; ++n) {
    f(std::span<const std::int64_t>(idx));
    for (int d = v.ndim - 1; d >= 0; --d) {
      if (++idx[d] < v.shape[d]) break;
      idx[d] = 0;
    }
  }
}

template <class T>
bool same_bits(const T& a, const T& b) {
  return std::memcmp(&a, &b, sizeof(T)) == 0;
}

}  // namespace kmpi::test
