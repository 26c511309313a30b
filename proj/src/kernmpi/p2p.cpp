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

#include "p2p.hpp"

#include "runtime.hpp"

#include <climits>
#include <cstdint>
#include <new>

namespace kmpi {
namespace {

// Presents a span of machine-word requests to MPI in its native handle width.
class NativeRequests {
 public:
  explicit NativeRequests(std::span<kmpi_request> requests) : requests_(requests) {
    if (narrow()) {
      narrow_.resize(requests.size());
      for (std::size_t i = 0; i < requests.size(); ++i) {
        narrow_[i] = static_cast<std::uint32_t>(requests[i]);
      }
    }
  }
  NativeRequests(const NativeRequests&) = delete;
  NativeRequests& operator=(const NativeRequests&) = delete;
  ~NativeRequests() {
    if (narrow()) {
      for (std::size_t i = 0; i < requests_.size(); ++i) requests_[i] = narrow_[i];
    }
  }

  void* data() { return narrow() ? static_cast<void*>(narrow_.data()) : static_cast<void*>(requests_.data()); }

 private:
  static bool narrow() { return runtime().constants().request_width == 4; }

  std::span<kmpi_request> requests_;
  std::vector<std::uint32_t> narrow_;
};

// Releases staging for every request that went from pending to null.
class CompletionTracker {
 public:
  explicit CompletionTracker(std::span<const kmpi_request> requests) : requests_(requests) {
    if (StagingRegistry::instance().size() != 0) {
      before_.assign(requests.begin(), requests.end());
    }
  }
  void settle() {
    if (before_.empty()) return;
    const kmpi_request null = request_null();
    for (std::size_t i = 0; i < before_.size(); ++i) {
      if (before_[i] != null && requests_[i] == null) {
        StagingRegistry::instance().release(before_[i]);
      }
    }
  }

 private:
  std::span<const kmpi_request> requests_;
  std::vector<kmpi_request> before_;
};

int check_peer(int peer) {
  if (peer < 0 || peer >= runtime().size()) return KMPI_ERR_INVALID_ARG;
  return KMPI_SUCCESS;
}

int check_request_span(std::span<kmpi_request> requests) {
  if (requests.size() > static_cast<std::size_t>(INT_MAX)) return KMPI_ERR_TOO_LARGE;
  if (!requests.empty() && requests.data() == nullptr) return KMPI_ERR_INVALID_ARG;
  return KMPI_SUCCESS;
}

}  // namespace

StagingRegistry& StagingRegistry::instance() {
  static StagingRegistry registry;
  return registry;
}

void StagingRegistry::adopt(kmpi_request handle, std::vector<std::byte> buffer) {
  std::lock_guard lock(mutex_);
  buffers_[handle] = std::move(buffer);
  count_.store(buffers_.size(), std::memory_order_release);
}

void StagingRegistry::release(kmpi_request handle) {
  std::lock_guard lock(mutex_);
  buffers_.erase(handle);
  count_.store(buffers_.size(), std::memory_order_release);
}

kmpi_request request_null() { return runtime().constants().request_null; }

int message_count(const ArrayView& view, int& count) {
  if (view.total_count() > INT_MAX) return KMPI_ERR_TOO_LARGE;
  count = static_cast<int>(view.total_count());
  return KMPI_SUCCESS;
}

int send(const ArrayView& data, int dest, int tag) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_peer(dest); s != KMPI_SUCCESS) return s;
  int count = 0;
  if (int s = message_count(data, count); s != KMPI_SUCCESS) return s;
  try {
    PackedBuffer packed = pack(data);
    return rt.mpi().send(packed.data(), count, rt.datatype(data.kind()), dest, tag, rt.world());
  } catch (const std::bad_alloc&) {
    return KMPI_ERR_NO_MEMORY;
  }
}

int recv(const ArrayView& data, int source, int tag) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_peer(source); s != KMPI_SUCCESS) return s;
  int count = 0;
  if (int s = message_count(data, count); s != KMPI_SUCCESS) return s;
  const Handle type = rt.datatype(data.kind());
  const Handle ignore = rt.constants().status_ignore;
  if (data.is_row_major_contiguous()) {
    return rt.mpi().recv(data.base(), count, type, source, tag, rt.world(), ignore);
  }
  try {
    std::vector<std::byte> staging(data.total_bytes());
    int status = rt.mpi().recv(staging.data(), count, type, source, tag, rt.world(), ignore);
    if (status == rt.constants().success) unpack(staging, data);
    return status;
  } catch (const std::bad_alloc&) {
    return KMPI_ERR_NO_MEMORY;
  }
}

int isend(const ArrayView& data, int dest, int tag, kmpi_request& request) {
  const auto& rt = runtime();
  request = rt.constants().request_null;
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_peer(dest); s != KMPI_SUCCESS) return s;
  int count = 0;
  if (int s = message_count(data, count); s != KMPI_SUCCESS) return s;
  const Handle type = rt.datatype(data.kind());

  kmpi_request handle = request;
  int status = rt.constants().success;
  if (data.is_row_major_contiguous()) {
    NativeRequests slot({&handle, 1});
    status = rt.mpi().isend(data.base(), count, type, dest, tag, rt.world(), slot.data());
  } else {
    try {
      std::vector<std::byte> staging = pack_copy(data);
      {
        NativeRequests slot({&handle, 1});
        status = rt.mpi().isend(staging.data(), count, type, dest, tag, rt.world(), slot.data());
      }
      if (status == rt.constants().success && handle != rt.constants().request_null) {
        // Moving the vector keeps its heap block, so MPI's pointer stays valid.
        StagingRegistry::instance().adopt(handle, std::move(staging));
      }
    } catch (const std::bad_alloc&) {
      return KMPI_ERR_NO_MEMORY;
    }
  }
  if (status == rt.constants().success) request = handle;
  return status;
}

int irecv(const ArrayView& data, int source, int tag, kmpi_request& request) {
  const auto& rt = runtime();
  request = rt.constants().request_null;
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (!data.is_row_major_contiguous()) return KMPI_ERR_NOT_CONTIGUOUS;
  if (int s = check_peer(source); s != KMPI_SUCCESS) return s;
  int count = 0;
  if (int s = message_count(data, count); s != KMPI_SUCCESS) return s;
  kmpi_request handle = request;
  int status;
  {
    NativeRequests slot({&handle, 1});
    status = rt.mpi().irecv(data.base(), count, rt.datatype(data.kind()), source, tag, rt.world(), slot.data());
  }
  if (status == rt.constants().success) request = handle;
  return status;
}

int wait(kmpi_request& request) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  std::span<kmpi_request> one(&request, 1);
  CompletionTracker tracker(one);
  int status;
  {
    NativeRequests native(one);
    status = rt.mpi().wait(native.data(), rt.constants().status_ignore);
  }
  tracker.settle();
  return status;
}

int waitall(std::span<kmpi_request> requests) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_request_span(requests); s != KMPI_SUCCESS) return s;
  CompletionTracker tracker(requests);
  int status;
  {
    NativeRequests native(requests);
    status = rt.mpi().waitall(static_cast<int>(requests.size()), native.data(), rt.constants().statuses_ignore);
  }
  tracker.settle();
  return status;
}

int waitany(std::span<kmpi_request> requests, int& index) {
  const auto& rt = runtime();
  index = -1;
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_request_span(requests); s != KMPI_SUCCESS) return s;
  CompletionTracker tracker(requests);
  int raw_index = rt.constants().undefined;
  int status;
  {
    NativeRequests native(requests);
    status = rt.mpi().waitany(static_cast<int>(requests.size()), native.data(), &raw_index,
                              rt.constants().status_ignore);
  }
  tracker.settle();
  index = raw_index == rt.constants().undefined ? -1 : raw_index;
  return status;
}

int test(kmpi_request& request, bool& flag) {
  const auto& rt = runtime();
  flag = false;
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  std::span<kmpi_request> one(&request, 1);
  CompletionTracker tracker(one);
  int raw_flag = 0;
  int status;
  {
    NativeRequests native(one);
    status = rt.mpi().test(native.data(), &raw_flag, rt.constants().status_ignore);
  }
  tracker.settle();
  flag = raw_flag != 0;
  return status;
}

int testall(std::span<kmpi_request> requests, bool& flag) {
  const auto& rt = runtime();
  flag = false;
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_request_span(requests); s != KMPI_SUCCESS) return s;
  CompletionTracker tracker(requests);
  int raw_flag = 0;
  int status;
  {
    NativeRequests native(requests);
    status = rt.mpi().testall(static_cast<int>(requests.size()), native.data(), &raw_flag,
                              rt.constants().statuses_ignore);
  }
  tracker.settle();
  flag = raw_flag != 0;
  return status;
}

int testany(std::span<kmpi_request> requests, bool& flag, int& index) {
  const auto& rt = runtime();
  flag = false;
  index = -1;
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_request_span(requests); s != KMPI_SUCCESS) return s;
  CompletionTracker tracker(requests);
  int raw_flag = 0;
  int raw_index = rt.constants().undefined;
  int status;
  {
    NativeRequests native(requests);
    status = rt.mpi().testany(static_cast<int>(requests.size()), native.data(), &raw_index, &raw_flag,
                              rt.constants().status_ignore);
  }
  tracker.settle();
  flag = raw_flag != 0;
  index = raw_index == rt.constants().undefined ? -1 : raw_index;
  return status;
}

}  // namespace kmpi
