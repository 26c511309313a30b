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

// Reduction-heavy pi benchmark: the same midpoint-rule estimate computed with
// the reductions issued from compiled code and from the interpreted host.
#pragma once

#include "interpreter.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace kmpi::bench {

inline constexpr const char* kCsvHeader =
    "n_intervals,n_times,time_in_kernel_s,time_roundtrip_s,speedup,pi_estimate";

// Midpoint-rule partial sum of 4/(1+x^2) over the sub-intervals
// [floor(rank*n/size), floor((rank+1)*n/size)), already scaled by 1/n.
// Requires 0 <= rank < size <= n_intervals.
double get_pi_part(std::int64_t n_intervals, std::int64_t rank, std::int64_t size);

// The same routine as interpreter bytecode, arithmetic in the same order.
std::shared_ptr<const host::Function> get_pi_part_program();
double get_pi_part_interpreted(host::Interpreter& interp, std::int64_t n_intervals, std::int64_t rank,
                               std::int64_t size);

// n_times x {partial sum; allreduce SUM}, all inside compiled code.
int pi_in_kernel(int n_times, std::int64_t n_intervals, double& estimate);

// Same numerics, but the loop and the reduction run in the host interpreter,
// which calls back into compiled code for each partial sum.
class RoundtripPi {
 public:
  RoundtripPi();
  int run(int n_times, std::int64_t n_intervals, double& estimate);
  const std::string& last_error() const { return last_error_; }

 private:
  host::Interpreter interp_;
  std::shared_ptr<const host::Function> loop_;
  std::string last_error_;
};

enum class OutputFormat { Csv, Svg };

struct BenchConfig {
  std::vector<std::int64_t> n_intervals_list{1'000, 10'000, 100'000};
  int n_times = 10'000;
  // Minimum over repeats; at least 3 so warm-up never sets the minimum.
  int n_repeat = 10;
  std::string output_path = "bench_pi.csv";
  OutputFormat output_format = OutputFormat::Csv;
};

void validate(const BenchConfig& cfg);

struct BenchRecord {
  std::int64_t n_intervals = 0;
  int n_times = 0;
  double time_in_kernel = 0.0;
  double time_roundtrip = 0.0;
  double speedup = 0.0;
  double pi_estimate = 0.0;
  double pi_estimate_roundtrip = 0.0;
};

// Collective. Throws std::runtime_error on communication failure. Timings are
// the per-rank minima, maximized over ranks, so every rank returns the same records.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);

// Rank 0 writes `cfg.output_path`; other ranks return immediately.
void emit(const BenchConfig& cfg, const std::vector<BenchRecord>& records);

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_svg(std::ostream& out, const std::vector<BenchRecord>& records);

struct InterpretedComparison {
  double compiled_seconds = 0.0;
  double interpreted_seconds = 0.0;
  double speedup = 0.0;
  double compiled_value = 0.0;
  double interpreted_value = 0.0;
};

// Single-process comparison of get_pi_part compiled vs interpreted.
InterpretedComparison compare_interpreted(std::int64_t n_intervals, int compiled_repeats);

}  // namespace kmpi::bench
