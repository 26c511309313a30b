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

// extern "C" surface of libkernmpi. Each entry point validates descriptors
// and forwards to the C++ core.

#include <kernmpi/kernmpi.h>

#include "array_view.hpp"
#include "collectives.hpp"
#include "p2p.hpp"
#include "runtime.hpp"

#include <climits>
#include <cstring>
#include <span>
#include <string>

using kmpi::ArrayView;
using kmpi::runtime;

namespace {

// The MPI runtime comes up when the shared library is loaded.
__attribute__((constructor)) void kmpi_load_hook() { runtime().initialize(); }

template <class Fn>
int with_view(const kmpi_array* raw, Fn&& fn) {
  ArrayView v;
  if (int s = ArrayView::from(raw, v); s != KMPI_SUCCESS) return s;
  return fn(v);
}

template <class Fn>
int with_views(const kmpi_array* a, const kmpi_array* b, Fn&& fn) {
  ArrayView va;
  ArrayView vb;
  if (int s = ArrayView::from(a, va); s != KMPI_SUCCESS) return s;
  if (int s = ArrayView::from(b, vb); s != KMPI_SUCCESS) return s;
  return fn(va, vb);
}

// Stand-in for an argument that only matters on the root.
ArrayView empty_like(const kmpi_array* other) {
  kmpi_array raw{};
  raw.kind = other != nullptr ? other->kind : KMPI_FLOAT64;
  raw.ndim = 1;
  raw.shape[0] = 0;
  raw.strides[0] = static_cast<int64_t>(kmpi_kind_size(raw.kind));
  ArrayView v;
  ArrayView::from(&raw, v);
  return v;
}

int request_span(kmpi_request* requests, int count, std::span<kmpi_request>& out) {
  if (count < 0 || (count > 0 && requests == nullptr)) return KMPI_ERR_INVALID_ARG;
  out = std::span<kmpi_request>(requests, static_cast<std::size_t>(count));
  return KMPI_SUCCESS;
}

}  // namespace

extern "C" {

int kmpi_initialize(void) { return runtime().initialize(); }
int kmpi_initialized(void) { return runtime().initialized() ? 1 : 0; }
int kmpi_finalize(void) { return runtime().finalize(); }

int kmpi_size(void) { return runtime().size(); }
int kmpi_rank(void) { return runtime().rank(); }
int kmpi_barrier(void) { return runtime().barrier(); }
double kmpi_wtime(void) { return runtime().wtime(); }

int kmpi_thread_level(void) { return runtime().thread_level(); }
const char* kmpi_thread_level_name(void) { return runtime().thread_level_name(); }
const char* kmpi_library_version(void) { return runtime().library_version().c_str(); }
const char* kmpi_library_path(void) { return runtime().library_path().c_str(); }
const char* kmpi_load_diagnostic(void) { return runtime().diagnostic().c_str(); }

const char* kmpi_error_string(int status) {
  thread_local std::string text;
  text = runtime().error_string(status);
  return text.c_str();
}

size_t kmpi_kind_size(int32_t kind) {
  auto k = kmpi::to_kind(kind);
  return k ? kmpi::byte_width(*k) : 0;
}

int kmpi_validate(const kmpi_array* view) {
  return with_view(view, [](const ArrayView&) { return KMPI_SUCCESS; });
}

int kmpi_is_contiguous(const kmpi_array* view) {
  ArrayView v;
  if (ArrayView::from(view, v) != KMPI_SUCCESS) return 0;
  return v.is_contiguous() ? 1 : 0;
}

int64_t kmpi_total_count(const kmpi_array* view) {
  ArrayView v;
  if (ArrayView::from(view, v) != KMPI_SUCCESS) return -1;
  return v.total_count();
}

int kmpi_pack(const kmpi_array* view, void* out, size_t out_bytes) {
  return with_view(view, [&](const ArrayView& v) {
    if (out_bytes != v.total_bytes()) return KMPI_ERR_COUNT_MISMATCH;
    if (out_bytes != 0 && out == nullptr) return KMPI_ERR_INVALID_ARG;
    kmpi::pack_into(v, {static_cast<std::byte*>(out), out_bytes});
    return KMPI_SUCCESS;
  });
}

int kmpi_unpack(const void* buffer, size_t buffer_bytes, const kmpi_array* view) {
  return with_view(view, [&](const ArrayView& v) {
    if (buffer_bytes != v.total_bytes()) return KMPI_ERR_COUNT_MISMATCH;
    if (buffer_bytes != 0 && buffer == nullptr) return KMPI_ERR_INVALID_ARG;
    kmpi::unpack({static_cast<const std::byte*>(buffer), buffer_bytes}, v);
    return KMPI_SUCCESS;
  });
}

int kmpi_datatype_handle(int32_t kind, uint64_t* handle) {
  auto k = kmpi::to_kind(kind);
  if (!k || handle == nullptr) return KMPI_ERR_INVALID_ARG;
  if (int s = runtime().ready(); s != KMPI_SUCCESS) return s;
  *handle = runtime().datatype(*k);
  return KMPI_SUCCESS;
}

int kmpi_datatype_extent(int32_t kind, int64_t* extent) {
  auto k = kmpi::to_kind(kind);
  if (!k || extent == nullptr) return KMPI_ERR_INVALID_ARG;
  const auto& rt = runtime();
  if (int s = rt.ready(); s != KMPI_SUCCESS) return s;
  std::intptr_t lb = 0;
  std::intptr_t ext = 0;
  int status = rt.mpi().type_get_extent(rt.datatype(*k), &lb, &ext);
  if (status == rt.constants().success) *extent = ext;
  return status;
}

int kmpi_send(const kmpi_array* data, int dest, int tag) {
  return with_view(data, [&](const ArrayView& v) { return kmpi::send(v, dest, tag); });
}

int kmpi_recv(const kmpi_array* data, int source, int tag) {
  return with_view(data, [&](const ArrayView& v) { return kmpi::recv(v, source, tag); });
}

int kmpi_isend(const kmpi_array* data, int dest, int tag, kmpi_request* request) {
  if (request == nullptr) return KMPI_ERR_INVALID_ARG;
  return with_view(data, [&](const ArrayView& v) { return kmpi::isend(v, dest, tag, *request); });
}

int kmpi_irecv(const kmpi_array* data, int source, int tag, kmpi_request* request) {
  if (request == nullptr) return KMPI_ERR_INVALID_ARG;
  return with_view(data, [&](const ArrayView& v) { return kmpi::irecv(v, source, tag, *request); });
}

int kmpi_wait(kmpi_request* request) {
  if (request == nullptr) return KMPI_ERR_INVALID_ARG;
  return kmpi::wait(*request);
}

int kmpi_waitall(kmpi_request* requests, int count) {
  std::span<kmpi_request> reqs;
  if (int s = request_span(requests, count, reqs); s != KMPI_SUCCESS) return s;
  return kmpi::waitall(reqs);
}

int kmpi_waitany(kmpi_request* requests, int count, int* index) {
  std::span<kmpi_request> reqs;
  if (index == nullptr) return KMPI_ERR_INVALID_ARG;
  if (int s = request_span(requests, count, reqs); s != KMPI_SUCCESS) return s;
  return kmpi::waitany(reqs, *index);
}

int kmpi_test(kmpi_request* request, int* flag) {
  if (request == nullptr || flag == nullptr) return KMPI_ERR_INVALID_ARG;
  bool done = false;
  int status = kmpi::test(*request, done);
  *flag = done ? 1 : 0;
  return status;
}

int kmpi_testall(kmpi_request* requests, int count, int* flag) {
  std::span<kmpi_request> reqs;
  if (flag == nullptr) return KMPI_ERR_INVALID_ARG;
  if (int s = request_span(requests, count, reqs); s != KMPI_SUCCESS) return s;
  bool done = false;
  int status = kmpi::testall(reqs, done);
  *flag = done ? 1 : 0;
  return status;
}

int kmpi_testany(kmpi_request* requests, int count, int* flag, int* index) {
  std::span<kmpi_request> reqs;
  if (flag == nullptr || index == nullptr) return KMPI_ERR_INVALID_ARG;
  if (int s = request_span(requests, count, reqs); s != KMPI_SUCCESS) return s;
  bool done = false;
  int status = kmpi::testany(reqs, done, *index);
  *flag = done ? 1 : 0;
  return status;
}

kmpi_request kmpi_request_null(void) { return kmpi::request_null(); }
size_t kmpi_staging_count(void) { return kmpi::StagingRegistry::instance().size(); }

int kmpi_bcast(const kmpi_array* data, int root) {
  return with_view(data, [&](const ArrayView& v) { return kmpi::bcast(v, root); });
}

int kmpi_scatter(const kmpi_array* send, const kmpi_array* recv, int root) {
  if (send == nullptr) {
    return with_view(recv, [&](const ArrayView& r) { return kmpi::scatter(empty_like(recv), r, root); });
  }
  return with_views(send, recv, [&](const ArrayView& s, const ArrayView& r) { return kmpi::scatter(s, r, root); });
}

int kmpi_gather(const kmpi_array* send, const kmpi_array* recv, int root) {
  if (recv == nullptr) {
    return with_view(send, [&](const ArrayView& s) { return kmpi::gather(s, empty_like(send), root); });
  }
  return with_views(send, recv, [&](const ArrayView& s, const ArrayView& r) { return kmpi::gather(s, r, root); });
}

int kmpi_allgather(const kmpi_array* send, const kmpi_array* recv) {
  return with_views(send, recv, [](const ArrayView& s, const ArrayView& r) { return kmpi::allgather(s, r); });
}

int kmpi_allreduce(const kmpi_array* send, const kmpi_array* recv, int32_t op) {
  if (op < KMPI_SUM || op > KMPI_PROD) return KMPI_ERR_INVALID_ARG;
  return with_views(send, recv, [&](const ArrayView& s, const ArrayView& r) {
    return kmpi::allreduce(s, r, static_cast<kmpi_op>(op));
  });
}

}  // extern "C"
