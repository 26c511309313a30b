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

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numeric>

using kmpi::Order;
using kmpi::test::at;

namespace {

// Brute force: enumerate the byte offset of every element and compare against
// a dense run walked in row-major or column-major logical order.
bool contiguous_oracle(const kmpi_array& v) {
  const std::int64_t item = static_cast<std::int64_t>(kmpi_kind_size(v.kind));
  std::int64_t total = 1;
  for (int d = 0; d < v.ndim; ++d) total *= v.shape[d];
  if (total <= 1) return true;
  std::vector<std::int64_t> row;
  kmpi::test::for_each_index(v, [&](std::span<const std::int64_t> idx) {
    std::int64_t off = 0;
    for (int d = 0; d < v.ndim; ++d) off += idx[d] * v.strides[d];
    row.push_back(off);
  });
  bool row_ok = true;
  for (std::int64_t n = 0; n < total; ++n) row_ok = row_ok && row[n] == row[0] + n * item;
  // column-major walk: first index varies fastest
  std::vector<std::int64_t> idx(v.ndim, 0);
  std::vector<std::int64_t> col;
  for (std::int64_t n = 0; n < total; ++n) {
    std::int64_t off = 0;
    for (int d = 0; d < v.ndim; ++d) off += idx[d] * v.strides[d];
    col.push_back(off);
    for (int d = 0; d < v.ndim; ++d) {
      if (++idx[d] < v.shape[d]) break;
      idx[d] = 0;
    }
  }
  bool col_ok = true;
  for (std::int64_t n = 0; n < total; ++n) col_ok = col_ok && col[n] == col[0] + n * item;
  return row_ok || col_ok;
}

kmpi_array view3(double* base, std::array<std::int64_t, 3> shape, std::array<std::int64_t, 3> strides) {
  return kmpi::make_view(base, std::span<const std::int64_t>(shape), std::span<const std::int64_t>(strides));
}

// Random strided 3-D window (positive or negative steps, optional transpose)
// into a 6x7x5 backing array.
kmpi_array random_window(std::vector<double>& backing, std::mt19937_64& g) {
  const std::array<std::int64_t, 3> full{6, 7, 5};
  auto base = kmpi::dense(backing.data(), {6, 7, 5});
  kmpi_array v = base;
  for (int d = 0; d < 3; ++d) {
    std::int64_t step = 1 + static_cast<std::int64_t>(g() % 3);
    std::int64_t start = static_cast<std::int64_t>(g() % full[d]);
    std::int64_t stop = start + 1 + static_cast<std::int64_t>(g() % (full[d] - start));
    v = kmpi::slice(v, d, start, stop, step);
    if (g() % 2) {
      // reverse this axis
      v.base = static_cast<char*>(v.base) + (v.shape[d] - 1) * v.strides[d];
      v.strides[d] = -v.strides[d];
    }
  }
  if (g() % 2) {
    std::swap(v.shape[0], v.shape[2]);
    std::swap(v.strides[0], v.strides[2]);
  }
  return v;
}

}  // namespace

TEST_CASE("is_contiguous examples") {
  double a[6] = {};
  auto rm = view3(a, {2, 3, 1}, {24, 8, 8});
  rm.ndim = 2;
  CHECK(kmpi_is_contiguous(&rm) == 1);
  auto cm = rm;
  cm.strides[0] = 8;
  cm.strides[1] = 16;
  CHECK(kmpi_is_contiguous(&cm) == 1);
  kmpi_array colslice{};
  colslice.base = a + 1;
  colslice.kind = KMPI_FLOAT64;
  colslice.ndim = 1;
  colslice.shape[0] = 2;
  colslice.strides[0] = 24;
  CHECK(kmpi_is_contiguous(&colslice) == 0);
}

TEST_CASE("is_contiguous matches brute-force offset oracle") {
  auto g = kmpi::test::rng(7);
  std::vector<double> backing(6 * 7 * 5);
  int contiguous_seen = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    auto v = random_window(backing, g);
    bool expect = contiguous_oracle(v);
    contiguous_seen += expect ? 1 : 0;
    CHECK(kmpi_is_contiguous(&v) == (expect ? 1 : 0));
  }
  // also the dense permutations
  for (auto order : {Order::RowMajor, Order::ColMajor}) {
    auto v = kmpi::dense(backing.data(), {6, 7, 5}, order);
    CHECK(contiguous_oracle(v));
    CHECK(kmpi_is_contiguous(&v) == 1);
    std::swap(v.shape[1], v.shape[2]);
    std::swap(v.strides[1], v.strides[2]);
    CHECK_FALSE(contiguous_oracle(v));
    CHECK(kmpi_is_contiguous(&v) == 0);
  }
  CHECK(contiguous_seen > 0);
}

TEST_CASE("is_contiguous agrees with the oracle on every small layout") {
  // ndim <= 3, extents <= 4, strides from a fixed set of element multiples
  const std::int64_t mults[] = {-4, -1, 1, 2, 3, 4, 6, 12, 16};
  std::vector<float> backing(4096);
  kmpi_array v{};
  v.base = backing.data() + 2048;
  v.kind = KMPI_FLOAT32;
  int checked = 0;
  for (int ndim = 1; ndim <= 3; ++ndim) {
    v.ndim = ndim;
    const int shapes = ndim == 1 ? 4 : ndim == 2 ? 16 : 64;
    const int stride_sets = ndim == 1 ? 9 : ndim == 2 ? 81 : 729;
    for (int s = 0; s < shapes; ++s)
      for (int t = 0; t < stride_sets; ++t) {
        int sc = s, tc = t;
        for (int d = 0; d < ndim; ++d) {
          v.shape[d] = 1 + sc % 4;
          sc /= 4;
          v.strides[d] = 4 * mults[tc % 9];
          tc /= 9;
        }
        const bool expect = contiguous_oracle(v);
        if (kmpi_is_contiguous(&v) != (expect ? 1 : 0)) {
          FAIL_CHECK("mismatch at ndim " << ndim << " shape " << v.shape[0] << "," << v.shape[1] << ","
                                         << v.shape[2] << " strides " << v.strides[0] << "," << v.strides[1] << ","
                                         << v.strides[2]);
        }
        ++checked;
      }
  }
  CHECK(checked == 4 * 9 + 16 * 81 + 64 * 729);
}

TEST_CASE("pack depends only on logical content") {
  std::vector<std::int64_t> row(24), col(24);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 4; ++k) {
        const std::int64_t value = i * 100 + j * 10 + k;
        row[(i * 3 + j) * 4 + k] = value;
        col[i + 2 * (j + 3 * k)] = value;
      }
  auto rv = kmpi::dense(row.data(), {2, 3, 4});
  auto cv = kmpi::dense(col.data(), {2, 3, 4}, Order::ColMajor);
  std::vector<std::int64_t> a(24), b(24);
  REQUIRE(kmpi_pack(&rv, a.data(), 24 * 8) == 0);
  REQUIRE(kmpi_pack(&cv, b.data(), 24 * 8) == 0);
  CHECK(a == b);
  CHECK(a == row);
}

TEST_CASE("total_count") {
  double a[6] = {};
  auto v = kmpi::dense(a, {2, 3});
  CHECK(kmpi_total_count(&v) == 6);
  auto s = kmpi::scalar_view(a);
  CHECK(kmpi_total_count(&s) == 1);
  auto e = kmpi::dense(a, {0, 5});
  CHECK(kmpi_total_count(&e) == 0);
  CHECK(kmpi_is_contiguous(&e) == 1);
}

TEST_CASE("validate rejects malformed descriptors") {
  double a[2] = {};
  auto v = kmpi::dense(a, {2});
  CHECK(kmpi_validate(&v) == 0);
  CHECK(kmpi_validate(nullptr) == KMPI_ERR_INVALID_ARG);
  auto bad = v;
  bad.kind = 42;
  CHECK(kmpi_validate(&bad) == KMPI_ERR_INVALID_ARG);
  bad = v;
  bad.ndim = KMPI_MAX_DIMS + 1;
  CHECK(kmpi_validate(&bad) == KMPI_ERR_INVALID_ARG);
  bad = v;
  bad.shape[0] = -1;
  CHECK(kmpi_validate(&bad) == KMPI_ERR_INVALID_ARG);
  bad = v;
  bad.base = nullptr;
  CHECK(kmpi_validate(&bad) == KMPI_ERR_INVALID_ARG);
  CHECK(kmpi_kind_size(KMPI_COMPLEX64) == 8);
  CHECK(kmpi_kind_size(99) == 0);
}

TEST_CASE("pack column slice") {
  std::int32_t a[2][3] = {{0, 1, 2}, {10, 11, 12}};
  auto v = kmpi::take(kmpi::dense(&a[0][0], {2, 3}), 1, 1);
  std::int32_t buf[2] = {-1, -1};
  REQUIRE(kmpi_pack(&v, buf, sizeof buf) == 0);
  CHECK(buf[0] == 1);
  CHECK(buf[1] == 11);
  CHECK(kmpi_pack(&v, buf, sizeof buf - 1) == KMPI_ERR_COUNT_MISMATCH);

  buf[0] = 1;
  buf[1] = 11;
  a[0][1] = 99;
  a[1][1] = 98;
  REQUIRE(kmpi_unpack(buf, sizeof buf, &v) == 0);
  std::int32_t expect[2][3] = {{0, 1, 2}, {10, 11, 12}};
  CHECK(std::equal(&a[0][0], &a[0][0] + 6, &expect[0][0]));
}

TEST_CASE("pack of contiguous view is bit-identical") {
  std::vector<std::complex<double>> src(24);
  for (std::size_t i = 0; i < src.size(); ++i) src[i] = {1.0 / (i + 1), -static_cast<double>(i)};
  auto v = kmpi::dense(src.data(), {2, 3, 4});
  std::vector<std::complex<double>> out(24);
  REQUIRE(kmpi_pack(&v, out.data(), out.size() * sizeof(out[0])) == 0);
  CHECK(std::memcmp(out.data(), src.data(), out.size() * sizeof(out[0])) == 0);
}

TEST_CASE("empty view pack and unpack are no-ops") {
  double a = 3.0;
  auto e = kmpi::dense(&a, {0, 4});
  CHECK(kmpi_pack(&e, nullptr, 0) == 0);
  CHECK(kmpi_unpack(nullptr, 0, &e) == 0);
  CHECK(a == 3.0);
}

TEST_CASE("pack and unpack match nested-loop oracle on random strided views") {
  auto g = kmpi::test::rng(11);
  std::vector<double> backing(6 * 7 * 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::iota(backing.begin(), backing.end(), 0.0);
    auto v = random_window(backing, g);
    std::vector<double> oracle;
    for (std::int64_t i = 0; i < v.shape[0]; ++i)
      for (std::int64_t j = 0; j < v.shape[1]; ++j)
        for (std::int64_t k = 0; k < v.shape[2]; ++k) {
          const std::int64_t idx[3] = {i, j, k};
          oracle.push_back(*at<double>(v, idx));
        }
    std::vector<double> packed(oracle.size());
    REQUIRE(kmpi_pack(&v, packed.data(), packed.size() * sizeof(double)) == 0);
    CHECK(packed == oracle);

    // mutate, unpack, compare with loop assignment on a copy of the backing
    for (auto& x : packed) x = -x - 0.5;
    std::vector<double> expect = backing;
    const std::ptrdiff_t shift = expect.data() - backing.data();
    kmpi_array ev = v;
    ev.base = static_cast<double*>(v.base) + shift;
    std::size_t n = 0;
    for (std::int64_t i = 0; i < v.shape[0]; ++i)
      for (std::int64_t j = 0; j < v.shape[1]; ++j)
        for (std::int64_t k = 0; k < v.shape[2]; ++k) {
          const std::int64_t idx[3] = {i, j, k};
          *at<double>(ev, idx) = packed[n++];
        }
    REQUIRE(kmpi_unpack(packed.data(), packed.size() * sizeof(double), &v) == 0);
    CHECK(backing == expect);
  }
}

TEST_CASE("pack handles every element width") {
  auto check_kind = [](auto tag) {
    using T = decltype(tag);
    std::vector<T> a(12);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<T>(static_cast<int>(i) * 3 + 1);
    auto v = kmpi::dense(a.data(), {3, 4}, Order::ColMajor);
    std::vector<T> out(12);
    REQUIRE(kmpi_pack(&v, out.data(), out.size() * sizeof(T)) == 0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) CHECK(out[i * 4 + j] == a[j * 3 + i]);
  };
  check_kind(std::int32_t{});
  check_kind(std::int64_t{});
  check_kind(float{});
  check_kind(double{});
  check_kind(std::complex<float>{});
  check_kind(std::complex<double>{});
}

TEST_CASE("datatype extents reported by MPI") {
  const std::pair<kmpi_kind, std::int64_t> expected[] = {
      {KMPI_INT32, 4}, {KMPI_INT64, 8}, {KMPI_FLOAT32, 4}, {KMPI_FLOAT64, 8}, {KMPI_COMPLEX64, 8}, {KMPI_COMPLEX128, 16}};
  for (auto [kind, bytes] : expected) {
    std::int64_t ext = 0;
    CHECK(kmpi_datatype_extent(kind, &ext) == 0);
    CHECK(ext == bytes);
    std::uint64_t h = 0;
    CHECK(kmpi_datatype_handle(kind, &h) == 0);
    CHECK(h != 0);
  }
  std::int64_t ext = 0;
  CHECK(kmpi_datatype_extent(17, &ext) == KMPI_ERR_INVALID_ARG);
}
