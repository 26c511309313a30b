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

// The only part of kernmpi compiled against mpi.h. It reports every
// implementation-specific constant as a machine-word integer so the rest of
// the library never depends on whether handles are integers or pointers.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace kmpi::abi {

using Handle = std::uintptr_t;

struct Constants {
  Handle comm_world = 0;
  Handle errors_return = 0;
  Handle request_null = 0;
  Handle datatype_null = 0;
  Handle status_ignore = 0;
  Handle statuses_ignore = 0;

  Handle int32 = 0;
  Handle int64 = 0;
  Handle float32 = 0;
  Handle float64 = 0;
  // Equal to datatype_null when the implementation has no C complex types.
  Handle complex64 = 0;
  Handle complex128 = 0;

  Handle op_sum = 0;
  Handle op_min = 0;
  Handle op_max = 0;
  Handle op_prod = 0;

  int success = 0;
  int undefined = 0;
  int thread_single = 0;
  int thread_funneled = 0;
  int thread_serialized = 0;
  int thread_multiple = 0;
  int max_error_string = 0;
  int max_library_version_string = 0;

  std::size_t comm_width = 0;
  std::size_t datatype_width = 0;
  std::size_t request_width = 0;
};

Constants query();

// Filesystem path of the MPI shared library this layer was linked against,
// empty if it cannot be determined.
std::string library_path();

// Name of a symbol every MPI library exports; used to locate the library.
inline constexpr const char* kProbeSymbol = "MPI_Init_thread";

}  // namespace kmpi::abi
