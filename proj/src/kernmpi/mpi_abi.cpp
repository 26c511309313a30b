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

#include "mpi_abi.hpp"

#include <mpi.h>

#include <dlfcn.h>

#include <type_traits>

namespace kmpi::abi {
namespace {

template <class T>
Handle to_word(T h) {
  if constexpr (std::is_pointer_v<T>) {
    return reinterpret_cast<Handle>(h);
  } else {
    // Integer handles are zero-extended so the round trip through a 32-bit
    // request slot is lossless.
    return static_cast<Handle>(static_cast<std::make_unsigned_t<T>>(h));
  }
}

}  // namespace

Constants query() {
  Constants c;
  c.comm_world = to_word(MPI_COMM_WORLD);
  c.errors_return = to_word(MPI_ERRORS_RETURN);
  c.request_null = to_word(MPI_REQUEST_NULL);
  c.datatype_null = to_word(MPI_DATATYPE_NULL);
  c.status_ignore = reinterpret_cast<Handle>(MPI_STATUS_IGNORE);
  c.statuses_ignore = reinterpret_cast<Handle>(MPI_STATUSES_IGNORE);

  c.int32 = to_word(MPI_INT32_T);
  c.int64 = to_word(MPI_INT64_T);
  c.float32 = to_word(MPI_FLOAT);
  c.float64 = to_word(MPI_DOUBLE);
#if defined(MPI_C_FLOAT_COMPLEX) || MPI_VERSION >= 3
  c.complex64 = to_word(MPI_C_FLOAT_COMPLEX);
  c.complex128 = to_word(MPI_C_DOUBLE_COMPLEX);
#else
  c.complex64 = c.datatype_null;
  c.complex128 = c.datatype_null;
#endif

  c.op_sum = to_word(MPI_SUM);
  c.op_min = to_word(MPI_MIN);
  c.op_max = to_word(MPI_MAX);
  c.op_prod = to_word(MPI_PROD);

  c.success = MPI_SUCCESS;
  c.undefined = MPI_UNDEFINED;
  c.thread_single = MPI_THREAD_SINGLE;
  c.thread_funneled = MPI_THREAD_FUNNELED;
  c.thread_serialized = MPI_THREAD_SERIALIZED;
  c.thread_multiple = MPI_THREAD_MULTIPLE;
  c.max_error_string = MPI_MAX_ERROR_STRING;
  c.max_library_version_string = MPI_MAX_LIBRARY_VERSION_STRING;

  c.comm_width = sizeof(MPI_Comm);
  c.datatype_width = sizeof(MPI_Datatype);
  c.request_width = sizeof(MPI_Request);
  return c;
}

std::string library_path() {
  Dl_info info{};
  if (dladdr(reinterpret_cast<void*>(&MPI_Init_thread), &info) != 0 && info.dli_fname != nullptr) {
    return info.dli_fname;
  }
  return {};
}

}  // namespace kmpi::abi
