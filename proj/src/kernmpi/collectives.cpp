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

#include "collectives.hpp"

#include "p2p.hpp"
#include "runtime.hpp"

#include <climits>
#include <new>
#include <vector>

namespace kmpi {
namespace {

int check_root(int root) {
  if (root < 0 || root >= runtime().size()) return KMPI_ERR_INVALID_ARG;
  return KMPI_SUCCESS;
}

// Destination memory for a collective: the view itself when it is row-major
// contiguous, otherwise a staging block unpacked after the call.
class Landing {
 public:
  explicit Landing(const ArrayView& view) : view_(view) {
    if (!view.is_row_major_contiguous()) staging_.resize(view.total_bytes());
  }
  void* data() { return staging_.empty() ? static_cast<void*>(view_.base()) : staging_.data(); }
  void commit() {
    if (!staging_.empty()) unpack(staging_, view_);
  }

 private:
  const ArrayView& view_;
  std::vector<std::byte> staging_;
};

// Root decides whether the call may proceed and every rank learns the verdict,
// so a size mismatch seen only at the root never leaves other ranks blocked.
int agree_on_root_verdict(int verdict, int root) {
  const auto& rt = runtime();
  int shared = verdict;
  int status = rt.mpi().bcast(&shared, 1, rt.datatype(ElementKind::Int32), root, rt.world());
  if (status != rt.constants().success) return status;
  return shared;
}

}  // namespace

int bcast(const ArrayView& data, int root) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_root(root); s != KMPI_SUCCESS) return s;
  int count = 0;
  if (int s = message_count(data, count); s != KMPI_SUCCESS) return s;
  const Handle type = rt.datatype(data.kind());
  if (data.is_row_major_contiguous()) {
    return rt.mpi().bcast(data.base(), count, type, root, rt.world());
  }
  try {
    std::vector<std::byte> staging = rt.rank() == root ? pack_copy(data) : std::vector<std::byte>(data.total_bytes());
    int status = rt.mpi().bcast(staging.data(), count, type, root, rt.world());
    if (status == rt.constants().success && rt.rank() != root) unpack(staging, data);
    return status;
  } catch (const std::bad_alloc&) {
    return KMPI_ERR_NO_MEMORY;
  }
}

int scatter(const ArrayView& send, const ArrayView& recv, int root) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_root(root); s != KMPI_SUCCESS) return s;
  int count = 0;
  if (int s = message_count(recv, count); s != KMPI_SUCCESS) return s;

  const bool is_root = rt.rank() == root;
  int verdict = KMPI_SUCCESS;
  if (is_root) {
    if (send.kind() != recv.kind()) {
      verdict = KMPI_ERR_KIND_MISMATCH;
    } else if (send.total_count() != static_cast<std::int64_t>(rt.size()) * recv.total_count()) {
      verdict = KMPI_ERR_COUNT_MISMATCH;
    } else if (send.overlaps(recv)) {
      verdict = KMPI_ERR_ALIASED;
    }
  }
  if (int s = agree_on_root_verdict(verdict, root); s != KMPI_SUCCESS) return s;

  try {
    PackedBuffer packed = is_root ? pack(send) : PackedBuffer{};
    Landing landing(recv);
    const Handle type = rt.datatype(recv.kind());
    int status = rt.mpi().scatter(packed.data(), count, type, landing.data(), count, type, root, rt.world());
    if (status == rt.constants().success) landing.commit();
    return status;
  } catch (const std::bad_alloc&) {
    return KMPI_ERR_NO_MEMORY;
  }
}

int gather(const ArrayView& send, const ArrayView& recv, int root) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (int s = check_root(root); s != KMPI_SUCCESS) return s;
  int count = 0;
  if (int s = message_count(send, count); s != KMPI_SUCCESS) return s;

  const bool is_root = rt.rank() == root;
  int verdict = KMPI_SUCCESS;
  if (is_root) {
    if (send.kind() != recv.kind()) {
      verdict = KMPI_ERR_KIND_MISMATCH;
    } else if (recv.total_count() != static_cast<std::int64_t>(rt.size()) * send.total_count()) {
      verdict = KMPI_ERR_COUNT_MISMATCH;
    } else if (send.overlaps(recv)) {
      verdict = KMPI_ERR_ALIASED;
    }
  }
  if (int s = agree_on_root_verdict(verdict, root); s != KMPI_SUCCESS) return s;

  try {
    PackedBuffer packed = pack(send);
    const Handle type = rt.datatype(send.kind());
    if (!is_root) {
      return rt.mpi().gather(packed.data(), count, type, nullptr, count, type, root, rt.world());
    }
    Landing landing(recv);
    int status = rt.mpi().gather(packed.data(), count, type, landing.data(), count, type, root, rt.world());
    if (status == rt.constants().success) landing.commit();
    return status;
  } catch (const std::bad_alloc&) {
    return KMPI_ERR_NO_MEMORY;
  }
}

int allgather(const ArrayView& send, const ArrayView& recv) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (send.kind() != recv.kind()) return KMPI_ERR_KIND_MISMATCH;
  if (recv.total_count() != static_cast<std::int64_t>(rt.size()) * send.total_count()) {
    return KMPI_ERR_COUNT_MISMATCH;
  }
  if (send.overlaps(recv)) return KMPI_ERR_ALIASED;
  int count = 0;
  if (int s = message_count(send, count); s != KMPI_SUCCESS) return s;
  int total = 0;
  if (int s = message_count(recv, total); s != KMPI_SUCCESS) return s;

  try {
    PackedBuffer packed = pack(send);
    Landing landing(recv);
    const Handle type = rt.datatype(send.kind());
    int status = rt.mpi().allgather(packed.data(), count, type, landing.data(), count, type, rt.world());
    if (status == rt.constants().success) landing.commit();
    return status;
  } catch (const std::bad_alloc&) {
    return KMPI_ERR_NO_MEMORY;
  }
}

int allreduce(const ArrayView& send, const ArrayView& recv, kmpi_op op) {
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  if (op < KMPI_SUM || op > KMPI_PROD) return KMPI_ERR_INVALID_ARG;
  if (send.kind() != recv.kind()) return KMPI_ERR_KIND_MISMATCH;
  if (send.total_count() != recv.total_count()) return KMPI_ERR_COUNT_MISMATCH;
  if (send.overlaps(recv)) return KMPI_ERR_ALIASED;
  int count = 0;
  if (int s = message_count(send, count); s != KMPI_SUCCESS) return s;

  // Complex SUM is componentwise, so it runs as a SUM over twice as many reals.
  Handle type = rt.datatype(send.kind());
  if (is_complex(send.kind())) {
    if (op != KMPI_SUM) return KMPI_ERR_UNSUPPORTED_OP;
    if (count > INT_MAX / 2) return KMPI_ERR_TOO_LARGE;
    count *= 2;
    type = rt.datatype(component_kind(send.kind()));
  }

  if (send.is_row_major_contiguous() && recv.is_row_major_contiguous()) {
    return rt.mpi().allreduce(send.base(), recv.base(), count, type, rt.op_handle(op), rt.world());
  }
  try {
    PackedBuffer packed = pack(send);
    Landing landing(recv);
    int status = rt.mpi().allreduce(packed.data(), landing.data(), count, type, rt.op_handle(op), rt.world());
    if (status == rt.constants().success) landing.commit();
    return status;
  } catch (const std::bad_alloc&) {
    return KMPI_ERR_NO_MEMORY;
  }
}

}  // namespace kmpi
