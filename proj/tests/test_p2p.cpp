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

#include <chrono>
#include <complex>
#include <string>
#include <thread>
#include <tuple>

using kmpi::Order;
using kmpi::test::rank;
using kmpi::test::size;

namespace {

constexpr std::int64_t kRows = 3;
constexpr std::int64_t kCols = 4;

template <class T>
T value_at(std::int64_t i, std::int64_t j) {
  if constexpr (std::is_integral_v<T>) {
    return static_cast<T>(i * 100 + j + 1);
  } else if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(i * 100 + j) + static_cast<T>(0.25);
  } else {
    using R = typename T::value_type;
    return T(static_cast<R>(i * 100 + j) + R(0.5), -static_cast<R>(j + 1));
  }
}

// A kRows x kCols logical array living in `storage`, either dense or as every
// other row and column of a 2x larger array, stored row- or column-major.
template <class T>
kmpi_array make_layout(std::vector<T>& storage, bool strided, Order order) {
  const std::int64_t f = strided ? 2 : 1;
  storage.assign(static_cast<std::size_t>(kRows * kCols * f * f), T{});
  auto full = kmpi::dense(storage.data(), {kRows * f, kCols * f}, order);
  if (!strided) return full;
  return kmpi::slice(kmpi::slice(full, 0, 1, kRows * f, 2), 1, 0, kCols * f, 2);
}

template <class T>
void fill(const kmpi_array& v) {
  for (std::int64_t i = 0; i < kRows; ++i)
    for (std::int64_t j = 0; j < kCols; ++j) {
      const std::int64_t idx[2] = {i, j};
      *kmpi::test::at<T>(v, idx) = value_at<T>(i, j);
    }
}

template <class T>
bool holds_expected(const kmpi_array& v) {
  bool ok = true;
  for (std::int64_t i = 0; i < kRows; ++i)
    for (std::int64_t j = 0; j < kCols; ++j) {
      const std::int64_t idx[2] = {i, j};
      ok = ok && kmpi::test::same_bits(*kmpi::test::at<T>(v, idx), value_at<T>(i, j));
    }
  return ok;
}

const char* kind_name(kmpi_kind k) {
  static const char* names[] = {"int32", "int64", "float32", "float64", "complex64", "complex128"};
  return names[k];
}

// One matrix case: rank 0 -> rank 1. Returns true on the receiver when the
// logical content arrived intact; true on other ranks.
template <class T>
bool run_case(bool strided, Order order, bool nonblocking_send, bool nonblocking_recv, int tag) {
  std::vector<T> storage;
  if (rank() == 0) {
    auto v = make_layout(storage, strided, order);
    fill<T>(v);
    if (nonblocking_send) {
      kmpi_request req = kmpi_request_null();
      if (kmpi_isend(&v, 1, tag, &req) != 0) return false;
      // sender reuses its buffer right after completion
      if (kmpi_wait(&req) != 0) return false;
      return req == kmpi_request_null();
    }
    return kmpi_send(&v, 1, tag) == 0;
  }
  if (rank() == 1) {
    if (nonblocking_recv) {
      std::vector<T> dst(static_cast<std::size_t>(kRows * kCols));
      auto v = kmpi::dense(dst.data(), {kRows, kCols});
      kmpi_request req = kmpi_request_null();
      if (kmpi_irecv(&v, 0, tag, &req) != 0) return false;
      if (kmpi_wait(&req) != 0) return false;
      return holds_expected<T>(v);
    }
    auto v = make_layout(storage, strided, order);
    if (kmpi_recv(&v, 0, tag) != 0) return false;
    return holds_expected<T>(v);
  }
  return true;
}

}  // namespace

TEST_CASE("p2p conformance matrix") {
  if (size() < 2) {
    MESSAGE("needs 2 ranks");
    return;
  }
  int tag = 1000;
  int cases = 0;
  int passed = 0;
  auto for_kind = [&](auto tag_value) {
    using T = decltype(tag_value);
    for (bool strided : {false, true})
      for (Order order : {Order::RowMajor, Order::ColMajor})
        for (bool nb_send : {false, true})
          for (bool nb_recv : {false, true}) {
            bool ok = run_case<T>(strided, order, nb_send, nb_recv, tag++);
            ++cases;
            passed += ok ? 1 : 0;
            INFO(kind_name(kmpi::kind_of_v<T>) << (strided ? " strided" : " contiguous")
                                               << (order == Order::RowMajor ? " row-major" : " column-major")
                                               << (nb_send ? " isend" : " send") << (nb_recv ? " irecv" : " recv"));
            CHECK(ok);
          }
  };
  for_kind(std::int32_t{});
  for_kind(std::int64_t{});
  for_kind(float{});
  for_kind(double{});
  for_kind(std::complex<float>{});
  for_kind(std::complex<double>{});
  CHECK(cases == 96);
  if (rank() == 1) MESSAGE("p2p matrix: " << passed << "/" << cases << " cases delivered");
  CHECK(kmpi_staging_count() == 0);
}

TEST_CASE("column-major send into row-major receive") {
  if (size() < 2) return;
  if (rank() == 0) {
    std::int64_t a[6] = {0, 10, 1, 11, 2, 12};  // [[0,1,2],[10,11,12]] stored column-major
    auto v = kmpi::dense(a, {2, 3}, Order::ColMajor);
    CHECK(kmpi_send(&v, 1, 3) == 0);
  } else if (rank() == 1) {
    std::int64_t b[6] = {};
    auto v = kmpi::dense(b, {2, 3});
    CHECK(kmpi_recv(&v, 0, 3) == 0);
    const std::int64_t expect[6] = {0, 1, 2, 10, 11, 12};
    CHECK(std::equal(b, b + 6, expect));
  }
}

TEST_CASE("strided column slice is packed on send") {
  if (size() < 2) return;
  if (rank() == 0) {
    std::int32_t a[2][3] = {{0, 1, 2}, {10, 11, 12}};
    auto v = kmpi::take(kmpi::dense(&a[0][0], {2, 3}), 1, 1);
    CHECK(kmpi_send(&v, 1, 4) == 0);
  } else if (rank() == 1) {
    std::int32_t b[2] = {};
    auto v = kmpi::dense(b, {2});
    CHECK(kmpi_recv(&v, 0, 4) == 0);
    CHECK(b[0] == 1);
    CHECK(b[1] == 11);
  }
}

TEST_CASE("blocking send/recv of five doubles") {
  if (size() < 2) return;
  double data[5] = {1.5, -2.0, 3.25, 1e300, -0.0};
  if (rank() == 0) {
    auto v = kmpi::dense(data, {5});
    CHECK(kmpi_send(&v, 1, 5) == 0);
  } else if (rank() == 1) {
    double got[5] = {};
    auto v = kmpi::dense(got, {5});
    CHECK(kmpi_recv(&v, 0, 5) == 0);
    CHECK(std::memcmp(got, data, sizeof data) == 0);
  }
}

TEST_CASE("recv into a non-contiguous view") {
  if (size() < 2) return;
  std::vector<double> payload(12);
  for (int i = 0; i < 12; ++i) payload[i] = i * 1.5;
  if (rank() == 0) {
    auto v = kmpi::dense(payload.data(), {12});
    CHECK(kmpi_send(&v, 1, 6) == 0);
    CHECK(kmpi_send(&v, 1, 7) == 0);
  } else if (rank() == 1) {
    std::vector<double> contiguous(12);
    auto cv = kmpi::dense(contiguous.data(), {12});
    CHECK(kmpi_recv(&cv, 0, 6) == 0);
    std::vector<double> backing(3 * 4 * 3, -1.0);
    kmpi_array two_d = kmpi::slice(kmpi::dense(backing.data(), {6, 6}), 1, 0, 6, 3);  // 6x2, stride 3
    CHECK(kmpi_is_contiguous(&two_d) == 0);
    CHECK(kmpi_recv(&two_d, 0, 7) == 0);
    std::vector<double> packed(12);
    REQUIRE(kmpi_pack(&two_d, packed.data(), packed.size() * sizeof(double)) == 0);
    CHECK(packed == contiguous);
    CHECK(backing[1] == -1.0);
  }
  CHECK(kmpi_staging_count() == 0);
}

TEST_CASE("oversized message into smaller buffer is an error") {
  if (size() < 2) return;
  if (rank() == 0) {
    double big[10] = {};
    auto v = kmpi::dense(big, {10});
    CHECK(kmpi_send(&v, 1, 8) == 0);
  } else if (rank() == 1) {
    double small[5] = {};
    auto v = kmpi::dense(small, {5});
    int status = kmpi_recv(&v, 0, 8);
    CHECK(status != 0);
    MESSAGE("truncation status: " << std::string(kmpi_error_string(status)));
  }
  kmpi_barrier();
}

TEST_CASE("tags select messages") {
  if (size() < 2) return;
  if (rank() == 0) {
    std::int32_t a = 7;
    std::int32_t b = 8;
    auto va = kmpi::scalar_view(&a);
    auto vb = kmpi::scalar_view(&b);
    kmpi_request reqs[2];
    CHECK(kmpi_isend(&va, 1, 70, &reqs[0]) == 0);
    CHECK(kmpi_isend(&vb, 1, 80, &reqs[1]) == 0);
    CHECK(kmpi_waitall(reqs, 2) == 0);
  } else if (rank() == 1) {
    std::int32_t x = 0;
    auto v = kmpi::scalar_view(&x);
    CHECK(kmpi_recv(&v, 0, 80) == 0);
    CHECK(x == 8);
    CHECK(kmpi_recv(&v, 0, 70) == 0);
    CHECK(x == 7);
  }
}

TEST_CASE("non-blocking exchange swaps payloads") {
  if (size() < 2) return;
  if (rank() > 1) return;
  const int other = 1 - rank();
  std::vector<double> src(6), dst(6, 0.0);
  for (int i = 0; i < 6; ++i) src[i] = rank() * 10.0 + i;
  auto sv = kmpi::dense(src.data(), {2, 3});
  auto dv = kmpi::dense(dst.data(), {2, 3});
  kmpi_request reqs[2];
  CHECK(kmpi_isend(&sv, other, 11, &reqs[0]) == 0);
  CHECK(kmpi_irecv(&dv, other, 11, &reqs[1]) == 0);
  CHECK(kmpi_waitall(reqs, 2) == 0);
  CHECK(reqs[0] == kmpi_request_null());
  CHECK(reqs[1] == kmpi_request_null());
  for (int i = 0; i < 6; ++i) CHECK(dst[i] == other * 10.0 + i);
}

TEST_CASE("isend of a strided slice is unaffected by later mutation") {
  if (size() < 2) return;
  if (rank() == 0) {
    std::vector<double> a(20);
    for (int i = 0; i < 20; ++i) a[i] = i;
    auto v = kmpi::slice(kmpi::dense(a.data(), {20}), 0, 0, 20, 4);  // 0,4,8,12,16
    kmpi_request req;
    CHECK(kmpi_isend(&v, 1, 12, &req) == 0);
    CHECK(kmpi_staging_count() == 1);
    for (auto& x : a) x = -1.0;
    kmpi_barrier();  // receiver posts only after the mutation
    CHECK(kmpi_wait(&req) == 0);
    CHECK(kmpi_staging_count() == 0);
  } else {
    kmpi_barrier();
    if (rank() == 1) {
      double got[5] = {};
      auto v = kmpi::dense(got, {5});
      CHECK(kmpi_recv(&v, 0, 12) == 0);
      const double expect[5] = {0, 4, 8, 12, 16};
      CHECK(std::equal(got, got + 5, expect));
    }
  }
}

TEST_CASE("column-major isend is staged too") {
  double a[6] = {0, 10, 1, 11, 2, 12};
  auto v = kmpi::dense(a, {2, 3}, Order::ColMajor);
  double b[6] = {};
  auto w = kmpi::dense(b, {2, 3});
  kmpi_request reqs[2];
  CHECK(kmpi_irecv(&w, rank(), 13, &reqs[1]) == 0);
  CHECK(kmpi_isend(&v, rank(), 13, &reqs[0]) == 0);
  CHECK(kmpi_staging_count() == 1);
  a[0] = 99;
  CHECK(kmpi_waitall(reqs, 2) == 0);
  CHECK(kmpi_staging_count() == 0);
  const double expect[6] = {0, 1, 2, 10, 11, 12};
  CHECK(std::equal(b, b + 6, expect));
}

TEST_CASE("irecv rejects destinations that are not row-major contiguous") {
  double backing[12] = {};
  auto strided = kmpi::slice(kmpi::dense(backing, {12}), 0, 0, 12, 2);
  auto colmajor = kmpi::dense(backing, {3, 4}, Order::ColMajor);
  kmpi_request req = 12345;
  CHECK(kmpi_irecv(&strided, 0, 1, &req) == KMPI_ERR_NOT_CONTIGUOUS);
  CHECK(req == kmpi_request_null());
  CHECK(kmpi_irecv(&colmajor, 0, 1, &req) == KMPI_ERR_NOT_CONTIGUOUS);
  CHECK(kmpi_irecv(nullptr, 0, 1, &req) == KMPI_ERR_INVALID_ARG);
}

TEST_CASE("wait on a null request returns at once") {
  kmpi_request req = kmpi_request_null();
  CHECK(kmpi_wait(&req) == 0);
  int flag = 0;
  CHECK(kmpi_test(&req, &flag) == 0);
  CHECK(flag == 1);
  kmpi_request reqs[2] = {kmpi_request_null(), kmpi_request_null()};
  int index = 7;
  CHECK(kmpi_waitany(reqs, 2, &index) == 0);
  CHECK(index == -1);
  CHECK(kmpi_testany(reqs, 2, &flag, &index) == 0);
  CHECK(flag == 1);
  CHECK(index == -1);
  CHECK(kmpi_testall(reqs, 2, &flag) == 0);
  CHECK(flag == 1);
}

TEST_CASE("waitany returns the request whose sender exists") {
  if (size() < 2) return;
  if (rank() == 0) {
    std::int64_t a = 0, b = 0;
    auto va = kmpi::scalar_view(&a);
    auto vb = kmpi::scalar_view(&b);
    kmpi_request reqs[2];
    CHECK(kmpi_irecv(&va, 1, 20, &reqs[0]) == 0);
    CHECK(kmpi_irecv(&vb, 1, 21, &reqs[1]) == 0);
    int index = -5;
    CHECK(kmpi_waitany(reqs, 2, &index) == 0);
    CHECK(index == 1);
    CHECK(b == 21);
    CHECK(reqs[1] == kmpi_request_null());
    CHECK(reqs[0] != kmpi_request_null());
    kmpi_barrier();
    CHECK(kmpi_waitany(reqs, 2, &index) == 0);
    CHECK(index == 0);
    CHECK(a == 20);
  } else {
    if (rank() == 1) {
      std::int64_t b = 21;
      auto vb = kmpi::scalar_view(&b);
      CHECK(kmpi_send(&vb, 0, 21) == 0);
    }
    kmpi_barrier();
    if (rank() == 1) {
      std::int64_t a = 20;
      auto va = kmpi::scalar_view(&a);
      CHECK(kmpi_send(&va, 0, 20) == 0);
    }
  }
}

TEST_CASE("test polling completes once the sender fires") {
  if (size() < 2) return;
  using clock = std::chrono::steady_clock;
  if (rank() == 0) {
    float x = 0;
    auto v = kmpi::scalar_view(&x);
    kmpi_request req;
    CHECK(kmpi_irecv(&v, 1, 30, &req) == 0);
    int flag = 1;
    CHECK(kmpi_test(&req, &flag) == 0);
    CHECK(flag == 0);
    kmpi_barrier();
    const auto deadline = clock::now() + std::chrono::seconds(10);
    while (!flag && clock::now() < deadline) CHECK(kmpi_test(&req, &flag) == 0);
    CHECK(flag == 1);
    CHECK(x == 3.5f);
    CHECK(req == kmpi_request_null());
  } else {
    kmpi_barrier();
    if (rank() == 1) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
      float x = 3.5f;
      auto v = kmpi::scalar_view(&x);
      CHECK(kmpi_send(&v, 0, 30) == 0);
    }
  }
}

TEST_CASE("testall is false on partial completion, testany polls") {
  if (size() < 2) return;
  using clock = std::chrono::steady_clock;
  if (rank() == 0) {
    std::int32_t a = 0, b = 0;
    auto va = kmpi::scalar_view(&a);
    auto vb = kmpi::scalar_view(&b);
    kmpi_request reqs[2];
    CHECK(kmpi_irecv(&va, 1, 40, &reqs[0]) == 0);
    CHECK(kmpi_irecv(&vb, 1, 41, &reqs[1]) == 0);
    // first message is sent before the barrier
    kmpi_barrier();
    int flag = 0, index = -1;
    const auto deadline = clock::now() + std::chrono::seconds(10);
    while (!flag && clock::now() < deadline) CHECK(kmpi_testany(reqs, 2, &flag, &index) == 0);
    CHECK(flag == 1);
    CHECK(index == 0);
    CHECK(a == 40);
    CHECK(kmpi_testall(reqs, 2, &flag) == 0);
    CHECK(flag == 0);
    kmpi_barrier();
    flag = 0;
    const auto deadline2 = clock::now() + std::chrono::seconds(10);
    while (!flag && clock::now() < deadline2) CHECK(kmpi_testall(reqs, 2, &flag) == 0);
    CHECK(flag == 1);
    CHECK(b == 41);
  } else {
    std::int32_t a = 40, b = 41;
    auto va = kmpi::scalar_view(&a);
    auto vb = kmpi::scalar_view(&b);
    if (rank() == 1) CHECK(kmpi_send(&va, 0, 40) == 0);
    kmpi_barrier();
    kmpi_barrier();
    if (rank() == 1) CHECK(kmpi_send(&vb, 0, 41) == 0);
  }
}

TEST_CASE("staging is released by every completion path") {
  std::vector<double> a(8, 1.0);
  auto v = kmpi::slice(kmpi::dense(a.data(), {8}), 0, 0, 8, 2);
  double sink[4];
  auto s = kmpi::dense(sink, {4});
  const int me = rank();

  kmpi_request r[2];
  CHECK(kmpi_isend(&v, me, 50, &r[0]) == 0);
  CHECK(kmpi_staging_count() == 1);
  CHECK(kmpi_recv(&s, me, 50) == 0);
  int flag = 0;
  while (!flag) CHECK(kmpi_test(&r[0], &flag) == 0);
  CHECK(kmpi_staging_count() == 0);

  CHECK(kmpi_isend(&v, me, 51, &r[0]) == 0);
  CHECK(kmpi_irecv(&s, me, 51, &r[1]) == 0);
  int index = -1;
  int done = 0;
  while (done < 2) {
    CHECK(kmpi_waitany(r, 2, &index) == 0);
    ++done;
  }
  CHECK(kmpi_staging_count() == 0);

  CHECK(kmpi_isend(&v, me, 52, &r[0]) == 0);
  CHECK(kmpi_irecv(&s, me, 52, &r[1]) == 0);
  flag = 0;
  while (!flag) CHECK(kmpi_testall(r, 2, &flag) == 0);
  CHECK(kmpi_staging_count() == 0);
}
