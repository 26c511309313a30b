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

#include "array_view.hpp"

#include <atomic>
#include <cstddef>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace kmpi {

// Packed copies owned by pending isend requests, keyed by request handle.
class StagingRegistry {
 public:
  static StagingRegistry& instance();

  void adopt(kmpi_request handle, std::vector<std::byte> buffer);
  void release(kmpi_request handle);
  std::size_t size() const { return count_.load(std::memory_order_acquire); }

 private:
  mutable std::mutex mutex_;
  std::unordered_map<kmpi_request, std::vector<std::byte>> buffers_;
  std::atomic<std::size_t> count_{0};
};

int send(const ArrayView& data, int dest, int tag);
int recv(const ArrayView& data, int source, int tag);
int isend(const ArrayView& data, int dest, int tag, kmpi_request& request);
int irecv(const ArrayView& data, int source, int tag, kmpi_request& request);

int wait(kmpi_request& request);
int waitall(std::span<kmpi_request> requests);
int waitany(std::span<kmpi_request> requests, int& index);
int test(kmpi_request& request, bool& flag);
int testall(std::span<kmpi_request> requests, bool& flag);
int testany(std::span<kmpi_request> requests, bool& flag, int& index);

kmpi_request request_null();

// Element count of `view` in units of its MPI datatype, or KMPI_ERR_TOO_LARGE.
int message_count(const ArrayView& view, int& count);

}  // namespace kmpi
