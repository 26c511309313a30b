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

#include "element_kind.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kmpi {

// Validated, non-owning view of a strided array region.
class ArrayView {
 public:
  // Returns KMPI_SUCCESS and fills `out`, or KMPI_ERR_INVALID_ARG.
  static int from(const kmpi_array* raw, ArrayView& out);

  std::byte* base() const { return base_; }
  ElementKind kind() const { return kind_; }
  std::size_t element_size() const { return byte_width(kind_); }
  int ndim() const { return ndim_; }
  std::span<const std::int64_t> shape() const { return {shape_.data(), static_cast<std::size_t>(ndim_)}; }
  std::span<const std::int64_t> strides() const { return {strides_.data(), static_cast<std::size_t>(ndim_)}; }

  std::int64_t total_count() const { return total_; }
  std::size_t total_bytes() const { return static_cast<std::size_t>(total_) * element_size(); }

  // Dense in row-major or column-major order (extent-1 dimensions ignored).
  bool is_contiguous() const { return row_major_ || col_major_; }
  // Memory order equals row-major logical order: usable as-is for a transfer.
  bool is_row_major_contiguous() const { return row_major_; }

  // Lowest and one-past-highest byte touched; equal when the view is empty.
  std::pair<const std::byte*, const std::byte*> byte_range() const;
  bool overlaps(const ArrayView& other) const;

 private:
  std::byte* base_ = nullptr;
  ElementKind kind_ = ElementKind::Float64;
  int ndim_ = 0;
  std::array<std::int64_t, KMPI_MAX_DIMS> shape_{};
  std::array<std::int64_t, KMPI_MAX_DIMS> strides_{};
  std::int64_t total_ = 1;
  bool row_major_ = true;
  bool col_major_ = true;
};

// Row-major logical-order copy of a view. Borrows the view's memory when it
// is already row-major contiguous.
class PackedBuffer {
 public:
  PackedBuffer() = default;
  static PackedBuffer borrow(const std::byte* data, std::size_t bytes);
  static PackedBuffer own(std::vector<std::byte> storage);

  const std::byte* data() const { return owned_ ? storage_.data() : borrowed_; }
  std::size_t size_bytes() const { return owned_ ? storage_.size() : bytes_; }
  bool owns() const { return owned_; }
  std::vector<std::byte> release() && { return std::move(storage_); }

 private:
  const std::byte* borrowed_ = nullptr;
  std::size_t bytes_ = 0;
  bool owned_ = false;
  std::vector<std::byte> storage_;
};

PackedBuffer pack(const ArrayView& view);
std::vector<std::byte> pack_copy(const ArrayView& view);
// `out` must hold exactly view.total_bytes().
void pack_into(const ArrayView& view, std::span<std::byte> out);
// `buffer` must hold exactly view.total_bytes().
void unpack(std::span<const std::byte> buffer, const ArrayView& view);

}  // namespace kmpi
