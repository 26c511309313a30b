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

#include <cstddef>
#include <cstdint>
#include <optional>

namespace kmpi {

enum class ElementKind : std::int32_t {
  Int32 = KMPI_INT32,
  Int64 = KMPI_INT64,
  Float32 = KMPI_FLOAT32,
  Float64 = KMPI_FLOAT64,
  Complex64 = KMPI_COMPLEX64,
  Complex128 = KMPI_COMPLEX128,
};

inline std::optional<ElementKind> to_kind(std::int32_t raw) {
  if (raw < 0 || raw >= KMPI_KIND_COUNT) return std::nullopt;
  return static_cast<ElementKind>(raw);
}

constexpr std::size_t byte_width(ElementKind kind) {
  switch (kind) {
    case ElementKind::Int32:
    case ElementKind::Float32:
      return 4;
    case ElementKind::Int64:
    case ElementKind::Float64:
    case ElementKind::Complex64:
      return 8;
    case ElementKind::Complex128:
      return 16;
  }
  return 0;
}

constexpr bool is_complex(ElementKind kind) {
  return kind == ElementKind::Complex64 || kind == ElementKind::Complex128;
}

// Real kind whose pairs make up a complex kind.
constexpr ElementKind component_kind(ElementKind kind) {
  switch (kind) {
    case ElementKind::Complex64:
      return ElementKind::Float32;
    case ElementKind::Complex128:
      return ElementKind::Float64;
    default:
      return kind;
  }
}

}  // namespace kmpi
