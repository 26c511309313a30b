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

/*
 * kernmpi: procedural MPI bindings for dense strided arrays.
 *
 * Every communication routine works on the world communicator and deduces the
 * element type and count from the array descriptor, so callers never pass an
 * MPI datatype or a count. All routines are plain C functions with no hidden
 * allocation on the contiguous fast path, which makes them callable from
 * inside compiled numerical kernels.
 *
 * Every communication call returns a status code. Zero is success, positive
 * values are error codes reported by the underlying MPI library, negative
 * values are errors detected by kernmpi itself (KMPI_ERR_*).
 *
 * The MPI runtime is initialized when the shared library is loaded and
 * finalized by a process-exit hook. Outstanding requests must be completed by
 * the caller before the process exits.
 */
#ifndef KERNMPI_KERNMPI_H
#define KERNMPI_KERNMPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define KMPI_API __declspec(dllexport)
#else
#  define KMPI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define KMPI_MAX_DIMS 8

/* Status codes produced by kernmpi itself. MPI error codes are positive. */
#define KMPI_SUCCESS 0
#define KMPI_ERR_INVALID_ARG (-1)
#define KMPI_ERR_NOT_CONTIGUOUS (-2)
#define KMPI_ERR_COUNT_MISMATCH (-3)
#define KMPI_ERR_KIND_MISMATCH (-4)
#define KMPI_ERR_UNSUPPORTED_OP (-5)
#define KMPI_ERR_ALIASED (-6)
#define KMPI_ERR_NOT_INITIALIZED (-7)
#define KMPI_ERR_FINALIZED (-8)
#define KMPI_ERR_NOT_LOADED (-9)
#define KMPI_ERR_TOO_LARGE (-10)
#define KMPI_ERR_NO_MEMORY (-11)

typedef enum kmpi_kind {
  KMPI_INT32 = 0,
  KMPI_INT64 = 1,
  KMPI_FLOAT32 = 2,
  KMPI_FLOAT64 = 3,
  KMPI_COMPLEX64 = 4,
  KMPI_COMPLEX128 = 5
} kmpi_kind;

#define KMPI_KIND_COUNT 6

typedef enum kmpi_op {
  KMPI_SUM = 0,
  KMPI_MIN = 1,
  KMPI_MAX = 2,
  KMPI_PROD = 3
} kmpi_op;

/*
 * Descriptor of a dense, possibly non-contiguous array region. Extents are in
 * elements, strides in bytes (negative strides are allowed). A descriptor with
 * ndim == 0 addresses a single scalar at `base`. The caller guarantees that
 * every addressed element lies inside one live allocation.
 */
typedef struct kmpi_array {
  void* base;
  int32_t kind;
  int32_t ndim;
  int64_t shape[KMPI_MAX_DIMS];
  int64_t strides[KMPI_MAX_DIMS];
} kmpi_array;

/* Opaque request handle, a machine word so arrays of them fit numeric arrays. */
typedef uint64_t kmpi_request;

/* ---- runtime ---------------------------------------------------------- */

KMPI_API int kmpi_initialize(void);
KMPI_API int kmpi_initialized(void);
/* The exit hook. Safe to call more than once; later calls are no-ops. */
KMPI_API int kmpi_finalize(void);

KMPI_API int kmpi_size(void);
KMPI_API int kmpi_rank(void);
KMPI_API int kmpi_barrier(void);
KMPI_API double kmpi_wtime(void);

/* Thread support level granted at init (MPI_THREAD_* value), -1 if unknown. */
KMPI_API int kmpi_thread_level(void);
/* "single", "funneled", "serialized", "multiple" or "unknown". */
KMPI_API const char* kmpi_thread_level_name(void);
KMPI_API const char* kmpi_library_version(void);
/* Path of the MPI shared library the bridge resolved its symbols from. */
KMPI_API const char* kmpi_library_path(void);
/* Empty when the bridge loaded cleanly. */
KMPI_API const char* kmpi_load_diagnostic(void);
KMPI_API const char* kmpi_error_string(int status);

/* ---- array model ------------------------------------------------------ */

KMPI_API size_t kmpi_kind_size(int32_t kind);
KMPI_API int kmpi_validate(const kmpi_array* view);
KMPI_API int kmpi_is_contiguous(const kmpi_array* view);
KMPI_API int64_t kmpi_total_count(const kmpi_array* view);
/* Copies the view in row-major logical order into `out` (exactly the packed size). */
KMPI_API int kmpi_pack(const kmpi_array* view, void* out, size_t out_bytes);
KMPI_API int kmpi_unpack(const void* buffer, size_t buffer_bytes, const kmpi_array* view);
KMPI_API int kmpi_datatype_handle(int32_t kind, uint64_t* handle);
/* Extent in bytes of the MPI datatype mapped to `kind`, as reported by MPI. */
KMPI_API int kmpi_datatype_extent(int32_t kind, int64_t* extent);

/* ---- point-to-point ---------------------------------------------------- */

KMPI_API int kmpi_send(const kmpi_array* data, int dest, int tag);
KMPI_API int kmpi_recv(const kmpi_array* data, int source, int tag);
KMPI_API int kmpi_isend(const kmpi_array* data, int dest, int tag, kmpi_request* request);
KMPI_API int kmpi_irecv(const kmpi_array* data, int source, int tag, kmpi_request* request);

KMPI_API int kmpi_wait(kmpi_request* request);
KMPI_API int kmpi_waitall(kmpi_request* requests, int count);
/* `index` is -1 when every request was already null. */
KMPI_API int kmpi_waitany(kmpi_request* requests, int count, int* index);
KMPI_API int kmpi_test(kmpi_request* request, int* flag);
KMPI_API int kmpi_testall(kmpi_request* requests, int count, int* flag);
KMPI_API int kmpi_testany(kmpi_request* requests, int count, int* flag, int* index);

KMPI_API kmpi_request kmpi_request_null(void);
/* Number of staging buffers currently owned by pending requests. */
KMPI_API size_t kmpi_staging_count(void);

/* ---- collectives ------------------------------------------------------ */

KMPI_API int kmpi_bcast(const kmpi_array* data, int root);
/* `send` may be NULL on non-root ranks. */
KMPI_API int kmpi_scatter(const kmpi_array* send, const kmpi_array* recv, int root);
/* `recv` may be NULL on non-root ranks. */
KMPI_API int kmpi_gather(const kmpi_array* send, const kmpi_array* recv, int root);
KMPI_API int kmpi_allgather(const kmpi_array* send, const kmpi_array* recv);
KMPI_API int kmpi_allreduce(const kmpi_array* send, const kmpi_array* recv, int32_t op);

#ifdef __cplusplus
}
#endif

#endif /* KERNMPI_KERNMPI_H */
