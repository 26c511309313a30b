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

#include "runtime.hpp"

#include <dlfcn.h>

#include <cstdio>
#include <cstdlib>
#include <vector>

namespace kmpi {
namespace {

void exit_hook() { Runtime::instance().finalize(); }

template <class Fn>
bool resolve(void* library, const char* name, Fn& slot, std::string& missing) {
  void* sym = dlsym(library, name);
  if (sym == nullptr) {
    if (!missing.empty()) missing += ", ";
    missing += name;
    return false;
  }
  slot = reinterpret_cast<Fn>(sym);
  return true;
}

}  // namespace

Runtime& Runtime::instance() {
  static Runtime rt;
  return rt;
}

Runtime::Runtime() { load(); }

void Runtime::load() {
  constants_ = abi::query();
  library_path_ = abi::library_path();

  void* library = nullptr;
  if (!library_path_.empty()) {
    // RTLD_GLOBAL: Open MPI components resolve libmpi symbols through the
    // global namespace.
    library = dlopen(library_path_.c_str(), RTLD_NOW | RTLD_GLOBAL);
  }
  if (library == nullptr) {
    library = dlopen(nullptr, RTLD_NOW | RTLD_GLOBAL);
  }
  if (library == nullptr) {
    diagnostic_ = "kernmpi: cannot open MPI library '" + library_path_ + "': " + dlerror();
    std::fprintf(stderr, "%s\n", diagnostic_.c_str());
    return;
  }

  std::string missing;
  auto& f = mpi_;
  resolve(library, "MPI_Init_thread", f.init_thread, missing);
  resolve(library, "MPI_Initialized", f.initialized, missing);
  resolve(library, "MPI_Finalized", f.finalized, missing);
  resolve(library, "MPI_Finalize", f.finalize, missing);
  resolve(library, "MPI_Query_thread", f.query_thread, missing);
  resolve(library, "MPI_Comm_size", f.comm_size, missing);
  resolve(library, "MPI_Comm_rank", f.comm_rank, missing);
  resolve(library, "MPI_Comm_set_errhandler", f.comm_set_errhandler, missing);
  resolve(library, "MPI_Barrier", f.barrier, missing);
  resolve(library, "MPI_Wtime", f.wtime, missing);
  resolve(library, "MPI_Get_library_version", f.get_library_version, missing);
  resolve(library, "MPI_Error_string", f.error_string, missing);
  resolve(library, "MPI_Send", f.send, missing);
  resolve(library, "MPI_Recv", f.recv, missing);
  resolve(library, "MPI_Isend", f.isend, missing);
  resolve(library, "MPI_Irecv", f.irecv, missing);
  resolve(library, "MPI_Wait", f.wait, missing);
  resolve(library, "MPI_Waitall", f.waitall, missing);
  resolve(library, "MPI_Waitany", f.waitany, missing);
  resolve(library, "MPI_Test", f.test, missing);
  resolve(library, "MPI_Testall", f.testall, missing);
  resolve(library, "MPI_Testany", f.testany, missing);
  resolve(library, "MPI_Bcast", f.bcast, missing);
  resolve(library, "MPI_Scatter", f.scatter, missing);
  resolve(library, "MPI_Gather", f.gather, missing);
  resolve(library, "MPI_Allgather", f.allgather, missing);
  resolve(library, "MPI_Allreduce", f.allreduce, missing);
  resolve(library, "MPI_Type_get_extent", f.type_get_extent, missing);
  resolve(library, "MPI_Type_contiguous", f.type_contiguous, missing);
  resolve(library, "MPI_Type_commit", f.type_commit, missing);

  if (!missing.empty()) {
    diagnostic_ = "kernmpi: unresolved MPI symbols in '" + library_path_ + "': " + missing;
    std::fprintf(stderr, "%s\n", diagnostic_.c_str());
    return;
  }
  if (constants_.request_width != 4 && constants_.request_width != 8) {
    diagnostic_ = "kernmpi: unsupported MPI_Request width " + std::to_string(constants_.request_width);
    std::fprintf(stderr, "%s\n", diagnostic_.c_str());
    return;
  }
  loaded_ = true;
}

int Runtime::initialize() {
  if (!loaded_) return KMPI_ERR_NOT_LOADED;
  std::lock_guard lock(lifecycle_mutex_);
  if (active_.load()) return KMPI_SUCCESS;

  int finalized = 0;
  mpi_.finalized(&finalized);
  if (finalized) return KMPI_ERR_FINALIZED;

  int already = 0;
  mpi_.initialized(&already);
  int status = constants_.success;
  if (!already) {
    int provided = -1;
    status = mpi_.init_thread(nullptr, nullptr, constants_.thread_multiple, &provided);
    if (status != constants_.success) {
      init_status_ = status;
      return status;
    }
    thread_level_ = provided;
  } else {
    mpi_.query_thread(&thread_level_);
  }

  status = mpi_.comm_set_errhandler(constants_.comm_world, constants_.errors_return);
  if (status != constants_.success) return status;
  mpi_.comm_size(constants_.comm_world, &size_);
  mpi_.comm_rank(constants_.comm_world, &rank_);

  std::vector<char> version(static_cast<std::size_t>(constants_.max_library_version_string) + 1, '\0');
  int len = 0;
  if (mpi_.get_library_version(version.data(), &len) == constants_.success) {
    library_version_.assign(version.data(), static_cast<std::size_t>(len));
    while (!library_version_.empty() &&
           (library_version_.back() == '\n' || library_version_.back() == '\0')) {
      library_version_.pop_back();
    }
  }

  resolve_datatypes();

  if (!exit_hook_registered_) {
    std::atexit(exit_hook);
    exit_hook_registered_ = true;
  }
  init_status_ = KMPI_SUCCESS;
  active_.store(true);
  return KMPI_SUCCESS;
}

void Runtime::resolve_datatypes() {
  const auto& c = constants_;
  datatypes_[KMPI_INT32] = c.int32;
  datatypes_[KMPI_INT64] = c.int64;
  datatypes_[KMPI_FLOAT32] = c.float32;
  datatypes_[KMPI_FLOAT64] = c.float64;
  datatypes_[KMPI_COMPLEX64] = c.complex64;
  datatypes_[KMPI_COMPLEX128] = c.complex128;

  // Without native complex types, a complex element is a committed pair of reals.
  for (int k : {KMPI_COMPLEX64, KMPI_COMPLEX128}) {
    if (datatypes_[k] != c.datatype_null) continue;
    Handle component = datatypes_[static_cast<int>(component_kind(static_cast<ElementKind>(k)))];
    std::uint64_t storage = 0;
    if (mpi_.type_contiguous(2, component, &storage) == c.success && mpi_.type_commit(&storage) == c.success) {
      datatypes_[k] = c.datatype_width == 4 ? static_cast<Handle>(static_cast<std::uint32_t>(storage))
                                            : static_cast<Handle>(storage);
    }
  }
}

int Runtime::finalize() {
  if (!loaded_) return KMPI_ERR_NOT_LOADED;
  std::lock_guard lock(lifecycle_mutex_);
  if (!active_.exchange(false)) return KMPI_SUCCESS;
  int finalized = 0;
  mpi_.finalized(&finalized);
  if (finalized) return KMPI_SUCCESS;
  return mpi_.finalize();
}

bool Runtime::initialized() const {
  if (!loaded_) return false;
  int init = 0;
  int fin = 0;
  mpi_.initialized(&init);
  mpi_.finalized(&fin);
  return init != 0 && fin == 0;
}

int Runtime::ready() const {
  if (!loaded_) return KMPI_ERR_NOT_LOADED;
  if (active_.load(std::memory_order_acquire)) return KMPI_SUCCESS;
  int fin = 0;
  mpi_.finalized(&fin);
  return fin ? KMPI_ERR_FINALIZED : KMPI_ERR_NOT_INITIALIZED;
}

int Runtime::barrier() const {
  if (int s = ready(); s != KMPI_SUCCESS) return s;
  return mpi_.barrier(constants_.comm_world);
}

double Runtime::wtime() const {
  if (!loaded_) return 0.0;
  return mpi_.wtime();
}

const char* Runtime::thread_level_name() const {
  const auto& c = constants_;
  if (thread_level_ < 0) return "unknown";
  if (thread_level_ == c.thread_multiple) return "multiple";
  if (thread_level_ == c.thread_serialized) return "serialized";
  if (thread_level_ == c.thread_funneled) return "funneled";
  if (thread_level_ == c.thread_single) return "single";
  return "unknown";
}

Handle Runtime::op_handle(kmpi_op op) const {
  switch (op) {
    case KMPI_SUM:
      return constants_.op_sum;
    case KMPI_MIN:
      return constants_.op_min;
    case KMPI_MAX:
      return constants_.op_max;
    case KMPI_PROD:
      return constants_.op_prod;
  }
  return 0;
}

std::string Runtime::error_string(int status) const {
  switch (status) {
    case KMPI_SUCCESS:
      return "success";
    case KMPI_ERR_INVALID_ARG:
      return "invalid argument";
    case KMPI_ERR_NOT_CONTIGUOUS:
      return "array must be row-major contiguous for this operation";
    case KMPI_ERR_COUNT_MISMATCH:
      return "element counts of the arrays are inconsistent";
    case KMPI_ERR_KIND_MISMATCH:
      return "element kinds of the arrays differ";
    case KMPI_ERR_UNSUPPORTED_OP:
      return "reduction operator not supported for this element kind";
    case KMPI_ERR_ALIASED:
      return "send and receive arrays overlap";
    case KMPI_ERR_NOT_INITIALIZED:
      return "MPI runtime is not initialized";
    case KMPI_ERR_FINALIZED:
      return "MPI runtime was already finalized";
    case KMPI_ERR_NOT_LOADED:
      return diagnostic_.empty() ? std::string("MPI library not loaded") : diagnostic_;
    case KMPI_ERR_TOO_LARGE:
      return "message exceeds the MPI count range";
    case KMPI_ERR_NO_MEMORY:
      return "staging buffer allocation failed";
    default:
      break;
  }
  if (status > 0 && loaded_) {
    std::vector<char> text(static_cast<std::size_t>(constants_.max_error_string) + 1, '\0');
    int len = 0;
    if (mpi_.error_string(status, text.data(), &len) == constants_.success) {
      return std::string(text.data(), static_cast<std::size_t>(len));
    }
  }
  return "unknown error " + std::to_string(status);
}

}  // namespace kmpi
