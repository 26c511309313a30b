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

// Row-block domain decomposition of an explicit finite-difference solver for
// the Cahn-Hilliard equation with a linear reaction term,
//
//   dc/dt = lap(c^3 - c - lap c) - k (c - c0),
//
// on a doubly periodic 2-D grid, with ghost rows refreshed over kernmpi
// point-to-point calls.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kmpi::halo {

struct Params {
  double k = 1e-2;
  double c0 = 0.5;
  double dt = 0.005;
  double dx = 1.0;
};

struct RowBlock {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  std::int64_t size() const { return end - begin; }
};

// Contiguous row block owned by `rank`; block sizes differ by at most one.
RowBlock owned_rows(std::int64_t global_rows, int rank, int size);

// x <- (1664525 x + 1013904223) mod 2^32, applied `steps` times.
std::uint32_t lcg_advance(std::uint32_t x, std::uint64_t steps);

// Value of global cell n (row-major): c0 + 0.2 (L(n)/2^32 - 0.5), where L(n)
// is the LCG state after n + 1 steps from the seed.
double initial_value(std::uint64_t seed, std::int64_t n, double c0);

std::vector<double> init_field(std::int64_t rows, std::int64_t cols, double c0, std::uint64_t seed);

// Order-independent digest: sum of IEEE-754 bit patterns modulo 2^64.
std::uint64_t checksum(std::span<const double> field);

// Local block with one ghost row above and one below (local rows 0 and owned+1).
class Subdomain {
 public:
  // Collective-free; fills owned rows from the global LCG sequence.
  Subdomain(std::int64_t global_rows, std::int64_t global_cols, const Params& params, std::uint64_t seed);

  std::int64_t global_rows() const { return global_rows_; }
  std::int64_t cols() const { return cols_; }
  std::int64_t row_offset() const { return block_.begin; }
  std::int64_t owned_row_count() const { return block_.size(); }
  int upper_neighbor() const { return upper_; }
  int lower_neighbor() const { return lower_; }
  const Params& params() const { return params_; }

  // Field with ghost rows, (owned + 2) x cols, row-major.
  std::span<double> field() { return c_; }
  std::span<const double> field() const { return c_; }
  std::span<double> row(std::int64_t local_row);
  std::span<const double> owned() const;

  // Collective: ghost rows of `buffer` (same layout as field()) take the
  // adjacent ranks' boundary rows, periodically wrapped.
  int exchange_ghosts(std::span<double> buffer);
  int exchange_ghosts() { return exchange_ghosts(c_); }

  // Collective: one explicit Euler step (two ghost exchanges).
  int step();

  bool all_finite() const;

 private:
  std::int64_t global_rows_;
  std::int64_t cols_;
  Params params_;
  RowBlock block_;
  int rank_;
  int size_;
  int upper_;
  int lower_;
  std::vector<double> c_;
  std::vector<double> mu_;
};

struct RunConfig {
  std::int64_t rows = 64;
  std::int64_t cols = 64;
  int steps = 100;
  Params params;
  std::uint64_t seed = 1;
  // Record the global mean after every step (one extra allreduce per step).
  bool track_mean = false;
  // Steps between collective non-finite checks.
  int check_interval = 50;
};

struct RunReport {
  int ranks = 0;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  int steps = 0;
  double wall_time = 0.0;
  double global_mean = 0.0;
  std::uint64_t checksum = 0;
  // Gathered global field; populated on rank 0 only.
  std::vector<double> field;
  // Means before the first step and after each step, when tracked.
  std::vector<double> mean_history;
};

// Collective. Throws std::runtime_error on communication failure or when the
// field stops being finite.
RunReport run(const RunConfig& cfg);

// Single-process reference with plain periodic indexing and no ghost rows.
void evolve_serial(std::vector<double>& field, std::int64_t rows, std::int64_t cols, int steps, const Params& p);
std::vector<double> run_serial_oracle(const RunConfig& cfg);

// "ranks,rows,cols,steps,wall_time_s,global_mean,checksum" values, one line.
std::string report_line(const RunReport& report);

}  // namespace kmpi::halo
