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
#include "mpi_abi.hpp"

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>

namespace kmpi {

using abi::Handle;

// C entry points of the MPI library, resolved by name at load time. Handle
// arguments are passed as machine words; on the supported ABIs an integer
// handle travels in the same register as a pointer-sized one.
struct MpiFunctions {
  int (*init_thread)(int*, char***, int, int*) = nullptr;
  int (*initialized)(int*) = nullptr;
  int (*finalized)(int*) = nullptr;
  int (*finalize)() = nullptr;
  int (*query_thread)(int*) = nullptr;
  int (*comm_size)(Handle, int*) = nullptr;
  int (*comm_rank)(Handle, int*) = nullptr;
  int (*comm_set_errhandler)(Handle, Handle) = nullptr;
  int (*barrier)(Handle) = nullptr;
  double (*wtime)() = nullptr;
  int (*get_library_version)(char*, int*) = nullptr;
  int (*error_string)(int, char*, int*) = nullptr;

  int (*send)(const void*, int, Handle, int, int, Handle) = nullptr;
  int (*recv)(void*, int, Handle, int, int, Handle, Handle) = nullptr;
  int (*isend)(const void*, int, Handle, int, int, Handle, void*) = nullptr;
  int (*irecv)(void*, int, Handle, int, int, Handle, void*) = nullptr;
  int (*wait)(void*, Handle) = nullptr;
  int (*waitall)(int, void*, Handle) = nullptr;
  int (*waitany)(int, void*, int*, Handle) = nullptr;
  int (*test)(void*, int*, Handle) = nullptr;
  int (*testall)(int, void*, int*, Handle) = nullptr;
  int (*testany)(int, void*, int*, int*, Handle) = nullptr;

  int (*bcast)(void*, int, Handle, int, Handle) = nullptr;
  int (*scatter)(const void*, int, Handle, void*, int, Handle, int, Handle) = nullptr;
  int (*gather)(const void*, int, Handle, void*, int, Handle, int, Handle) = nullptr;
  int (*allgather)(const void*, int, Handle, void*, int, Handle, Handle) = nullptr;
  int (*allreduce)(const void*, void*, int, Handle, Handle, Handle) = nullptr;

  int (*type_get_extent)(Handle, std::intptr_t*, std::intptr_t*) = nullptr;
  int (*type_contiguous)(int, Handle, void*) = nullptr;
  int (*type_commit)(void*) = nullptr;
};

// Process-wide MPI runtime: symbol table, handle constants and lifecycle.
class Runtime {
 public:
  static Runtime& instance();

  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  bool loaded() const { return loaded_; }
  const std::string& diagnostic() const { return diagnostic_; }
  const std::string& library_path() const { return library_path_; }

  int initialize();
  int finalize();
  // MPI is initialized and not yet finalized.
  bool initialized() const;

  // KMPI_SUCCESS when communication calls may proceed.
  int ready() const;

  int size() const { return size_; }
  int rank() const { return rank_; }
  int barrier() const;
  double wtime() const;

  int thread_level() const { return thread_level_; }
  const char* thread_level_name() const;
  const std::string& library_version() const { return library_version_; }
  std::string error_string(int status) const;

  const abi::Constants& constants() const { return constants_; }
  const MpiFunctions& mpi() const { return mpi_; }
  Handle world() const { return constants_.comm_world; }

  Handle datatype(ElementKind kind) const { return datatypes_[static_cast<int>(kind)]; }
  Handle op_handle(kmpi_op op) const;

 private:
  Runtime();
  void load();
  void resolve_datatypes();

  abi::Constants constants_;
  MpiFunctions mpi_;
  bool loaded_ = false;
  std::string diagnostic_;
  std::string library_path_;
  std::string library_version_;

  mutable std::mutex lifecycle_mutex_;
  std::atomic<bool> active_{false};
  bool exit_hook_registered_ = false;
  int init_status_ = KMPI_ERR_NOT_INITIALIZED;
  int size_ = 0;
  int rank_ = -1;
  int thread_level_ = -1;
  Handle datatypes_[KMPI_KIND_COUNT] = {};
};

inline Runtime& runtime() { return Runtime::instance(); }

}  // namespace kmpi
