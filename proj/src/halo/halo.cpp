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

#include "halo.hpp"

#include <kernmpi/kernmpi.h>
#include <kernmpi/kernmpi.hpp>

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace kmpi::halo {
namespace {

constexpr std::uint32_t kLcgMul = 1664525u;
constexpr std::uint32_t kLcgInc = 1013904223u;
constexpr double kTwoPow32 = 4294967296.0;

constexpr int kTagDownward = 11;
constexpr int kTagUpward = 12;
constexpr int kTagGather = 21;

void require(int status, const char* what) {
  if (status != KMPI_SUCCESS) {
    throw std::runtime_error(std::string(what) + ": " + kmpi_error_string(status));
  }
}

inline double laplacian(const double* up, const double* mid, const double* down, std::int64_t j, std::int64_t jl,
                        std::int64_t jr, double dx2) {
  return (down[j] + up[j] + mid[jr] + mid[jl] - 4.0 * mid[j]) / dx2;
}

double row_sum(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace

RowBlock owned_rows(std::int64_t global_rows, int rank, int size) {
  return {rank * global_rows / size, (rank + 1) * global_rows / size};
}

std::uint32_t lcg_advance(std::uint32_t x, std::uint64_t steps) {
  // Compose the affine map with itself by repeated squaring.
  std::uint32_t mul = 1;
  std::uint32_t inc = 0;
  std::uint32_t step_mul = kLcgMul;
  std::uint32_t step_inc = kLcgInc;
  while (steps != 0) {
    if (steps & 1u) {
      mul = step_mul * mul;
      inc = step_mul * inc + step_inc;
    }
    step_inc = step_mul * step_inc + step_inc;
    step_mul = step_mul * step_mul;
    steps >>= 1;
  }
  return mul * x + inc;
}

double initial_value(std::uint64_t seed, std::int64_t n, double c0) {
  const std::uint32_t state = lcg_advance(static_cast<std::uint32_t>(seed), static_cast<std::uint64_t>(n) + 1);
  return c0 + 0.2 * (static_cast<double>(state) / kTwoPow32 - 0.5);
}

std::vector<double> init_field(std::int64_t rows, std::int64_t cols, double c0, std::uint64_t seed) {
  std::vector<double> field(static_cast<std::size_t>(rows * cols));
  std::uint32_t x = static_cast<std::uint32_t>(seed);
  for (auto& v : field) {
    x = kLcgMul * x + kLcgInc;
    v = c0 + 0.2 * (static_cast<double>(x) / kTwoPow32 - 0.5);
  }
  return field;
}

std::uint64_t checksum(std::span<const double> field) {
  std::uint64_t sum = 0;
  for (double v : field) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    sum += bits;
  }
  return sum;
}

Subdomain::Subdomain(std::int64_t global_rows, std::int64_t global_cols, const Params& params, std::uint64_t seed)
    : global_rows_(global_rows), cols_(global_cols), params_(params), rank_(kmpi_rank()), size_(kmpi_size()) {
  if (global_rows < 4 || global_cols < 4) throw std::invalid_argument("grid must be at least 4x4");
  if (global_rows < size_) throw std::invalid_argument("grid needs at least one row per rank");
  block_ = owned_rows(global_rows, rank_, size_);
  upper_ = (rank_ + size_ - 1) % size_;
  lower_ = (rank_ + 1) % size_;
  c_.assign(static_cast<std::size_t>((block_.size() + 2) * cols_), 0.0);
  mu_.assign(c_.size(), 0.0);

  std::uint32_t x = lcg_advance(static_cast<std::uint32_t>(seed), static_cast<std::uint64_t>(block_.begin * cols_));
  for (std::int64_t i = 0; i < block_.size(); ++i) {
    auto r = row(i + 1);
    for (auto& v : r) {
      x = kLcgMul * x + kLcgInc;
      v = params_.c0 + 0.2 * (static_cast<double>(x) / kTwoPow32 - 0.5);
    }
  }
}

std::span<double> Subdomain::row(std::int64_t local_row) {
  return std::span<double>(c_).subspan(static_cast<std::size_t>(local_row * cols_), static_cast<std::size_t>(cols_));
}

std::span<const double> Subdomain::owned() const {
  return std::span<const double>(c_).subspan(static_cast<std::size_t>(cols_),
                                             static_cast<std::size_t>(block_.size() * cols_));
}

int Subdomain::exchange_ghosts(std::span<double> buffer) {
  const std::int64_t m = block_.size();
  auto at = [&](std::int64_t local_row) {
    return buffer.subspan(static_cast<std::size_t>(local_row * cols_), static_cast<std::size_t>(cols_));
  };
  if (size_ == 1) {
    std::copy_n(at(m).begin(), cols_, at(0).begin());
    std::copy_n(at(1).begin(), cols_, at(m + 1).begin());
    return KMPI_SUCCESS;
  }

  const kmpi_array first_owned = kmpi::vector_view(at(1));
  const kmpi_array last_owned = kmpi::vector_view(at(m));
  const kmpi_array ghost_above = kmpi::vector_view(at(0));
  const kmpi_array ghost_below = kmpi::vector_view(at(m + 1));
  const bool even = rank_ % 2 == 0;

  // Downward pass: last owned row goes to the lower neighbor's ghost above.
  if (even) {
    if (int s = kmpi_send(&last_owned, lower_, kTagDownward); s != KMPI_SUCCESS) return s;
    if (int s = kmpi_recv(&ghost_above, upper_, kTagDownward); s != KMPI_SUCCESS) return s;
  } else {
    if (int s = kmpi_recv(&ghost_above, upper_, kTagDownward); s != KMPI_SUCCESS) return s;
    if (int s = kmpi_send(&last_owned, lower_, kTagDownward); s != KMPI_SUCCESS) return s;
  }
  // Upward pass: first owned row goes to the upper neighbor's ghost below.
  if (even) {
    if (int s = kmpi_send(&first_owned, upper_, kTagUpward); s != KMPI_SUCCESS) return s;
    if (int s = kmpi_recv(&ghost_below, lower_, kTagUpward); s != KMPI_SUCCESS) return s;
  } else {
    if (int s = kmpi_recv(&ghost_below, lower_, kTagUpward); s != KMPI_SUCCESS) return s;
    if (int s = kmpi_send(&first_owned, upper_, kTagUpward); s != KMPI_SUCCESS) return s;
  }
  return KMPI_SUCCESS;
}

int Subdomain::step() {
  const std::int64_t m = block_.size();
  const std::int64_t n = cols_;
  const double dx2 = params_.dx * params_.dx;

  if (int s = exchange_ghosts(c_); s != KMPI_SUCCESS) return s;
  for (std::int64_t i = 1; i <= m; ++i) {
    const double* up = &c_[static_cast<std::size_t>((i - 1) * n)];
    const double* mid = &c_[static_cast<std::size_t>(i * n)];
    const double* down = &c_[static_cast<std::size_t>((i + 1) * n)];
    double* out = &mu_[static_cast<std::size_t>(i * n)];
    for (std::int64_t j = 0; j < n; ++j) {
      const std::int64_t jl = j == 0 ? n - 1 : j - 1;
      const std::int64_t jr = j == n - 1 ? 0 : j + 1;
      const double c = mid[j];
      out[j] = c * c * c - c - laplacian(up, mid, down, j, jl, jr, dx2);
    }
  }

  if (int s = exchange_ghosts(mu_); s != KMPI_SUCCESS) return s;
  for (std::int64_t i = 1; i <= m; ++i) {
    const double* up = &mu_[static_cast<std::size_t>((i - 1) * n)];
    const double* mid = &mu_[static_cast<std::size_t>(i * n)];
    const double* down = &mu_[static_cast<std::size_t>((i + 1) * n)];
    double* c = &c_[static_cast<std::size_t>(i * n)];
    for (std::int64_t j = 0; j < n; ++j) {
      const std::int64_t jl = j == 0 ? n - 1 : j - 1;
      const std::int64_t jr = j == n - 1 ? 0 : j + 1;
      c[j] = c[j] + params_.dt * (laplacian(up, mid, down, j, jl, jr, dx2) - params_.k * (c[j] - params_.c0));
    }
  }
  return KMPI_SUCCESS;
}

bool Subdomain::all_finite() const {
  for (double v : owned()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

namespace {

void check_finite(const Subdomain& sub, int step) {
  std::int32_t local_bad = sub.all_finite() ? 0 : 1;
  std::int32_t any_bad = 0;
  const kmpi_array send = kmpi::scalar_view(&local_bad);
  const kmpi_array recv = kmpi::scalar_view(&any_bad);
  require(kmpi_allreduce(&send, &recv, KMPI_MAX), "allreduce");
  if (any_bad != 0) {
    throw std::runtime_error("non-finite field value detected after step " + std::to_string(step) +
                             "; reduce dt (explicit scheme unstable)");
  }
}

double global_mean(const Subdomain& sub) {
  double local = row_sum(sub.owned());
  double total = 0.0;
  const kmpi_array send = kmpi::scalar_view(&local);
  const kmpi_array recv = kmpi::scalar_view(&total);
  require(kmpi_allreduce(&send, &recv, KMPI_SUM), "allreduce");
  return total / static_cast<double>(sub.global_rows() * sub.cols());
}

std::vector<double> gather_to_root(Subdomain& sub) {
  const int rank = kmpi_rank();
  const int size = kmpi_size();
  const std::int64_t cols = sub.cols();
  if (rank != 0) {
    auto owned = sub.owned();
    const kmpi_array block = kmpi::dense(owned.data(), {sub.owned_row_count(), cols});
    require(kmpi_send(&block, 0, kTagGather), "send");
    return {};
  }
  std::vector<double> field(static_cast<std::size_t>(sub.global_rows() * cols));
  auto own = sub.owned();
  std::copy(own.begin(), own.end(), field.begin());
  for (int r = 1; r < size; ++r) {
    const RowBlock b = owned_rows(sub.global_rows(), r, size);
    const kmpi_array block = kmpi::dense(field.data() + b.begin * cols, {b.size(), cols});
    require(kmpi_recv(&block, r, kTagGather), "recv");
  }
  return field;
}

}  // namespace

RunReport run(const RunConfig& cfg) {
  if (cfg.steps < 0) throw std::invalid_argument("steps must be non-negative");
  Subdomain sub(cfg.rows, cfg.cols, cfg.params, cfg.seed);
  RunReport report;
  report.ranks = kmpi_size();
  report.rows = cfg.rows;
  report.cols = cfg.cols;
  report.steps = cfg.steps;
  if (cfg.track_mean) report.mean_history.push_back(global_mean(sub));

  const int interval = cfg.check_interval > 0 ? cfg.check_interval : 50;
  require(kmpi_barrier(), "barrier");
  const double t0 = kmpi_wtime();
  for (int s = 1; s <= cfg.steps; ++s) {
    require(sub.step(), "ghost exchange");
    if (cfg.track_mean) report.mean_history.push_back(global_mean(sub));
    if (s % interval == 0) check_finite(sub, s);
  }
  require(kmpi_barrier(), "barrier");
  report.wall_time = kmpi_wtime() - t0;
  check_finite(sub, cfg.steps);

  report.field = gather_to_root(sub);
  double summary[2] = {0.0, 0.0};
  if (kmpi_rank() == 0) {
    report.checksum = checksum(report.field);
    summary[0] = row_sum(report.field) / static_cast<double>(report.field.size());
    std::memcpy(&summary[1], &report.checksum, sizeof report.checksum);
  }
  const kmpi_array shared = kmpi::dense(summary, {2});
  require(kmpi_bcast(&shared, 0), "bcast");
  report.global_mean = summary[0];
  std::memcpy(&report.checksum, &summary[1], sizeof report.checksum);
  return report;
}

void evolve_serial(std::vector<double>& field, std::int64_t rows, std::int64_t cols, int steps, const Params& p) {
  const double dx2 = p.dx * p.dx;
  std::vector<double> mu(field.size());
  auto at = [cols](std::vector<double>& f, std::int64_t i, std::int64_t j) -> double& {
    return f[static_cast<std::size_t>(i * cols + j)];
  };
  auto lap = [&](std::vector<double>& f, std::int64_t i, std::int64_t j) {
    const std::int64_t down = (i + 1) % rows;
    const std::int64_t up = (i + rows - 1) % rows;
    const std::int64_t right = (j + 1) % cols;
    const std::int64_t left = (j + cols - 1) % cols;
    return (at(f, down, j) + at(f, up, j) + at(f, i, right) + at(f, i, left) - 4.0 * at(f, i, j)) / dx2;
  };
  for (int s = 0; s < steps; ++s) {
    for (std::int64_t i = 0; i < rows; ++i) {
      for (std::int64_t j = 0; j < cols; ++j) {
        const double c = at(field, i, j);
        at(mu, i, j) = c * c * c - c - lap(field, i, j);
      }
    }
    for (std::int64_t i = 0; i < rows; ++i) {
      for (std::int64_t j = 0; j < cols; ++j) {
        double& c = at(field, i, j);
        c = c + p.dt * (lap(mu, i, j) - p.k * (c - p.c0));
      }
    }
  }
}

std::vector<double> run_serial_oracle(const RunConfig& cfg) {
  std::vector<double> field = init_field(cfg.rows, cfg.cols, cfg.params.c0, cfg.seed);
  evolve_serial(field, cfg.rows, cfg.cols, cfg.steps, cfg.params);
  return field;
}

std::string report_line(const RunReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << r.ranks << ',' << r.rows << ',' << r.cols << ',' << r.steps << ',' << r.wall_time << ','
      << r.global_mean << ',' << r.checksum;
  return out.str();
}

}  // namespace kmpi::halo
