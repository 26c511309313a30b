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

// Pi reduction benchmark: reductions issued from compiled code vs. from the
// interpreted host. Run under mpiexec, e.g.
//
//   mpiexec -n 4 kmpi_bench_pi --n-intervals 1000,10000,100000 --n-times 10000

#include "pi.hpp"

#include <kernmpi/kernmpi.h>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Compare in-kernel and host-roundtrip MPI reductions on a pi estimate"};
  kmpi::bench::BenchConfig cfg;
  std::string n_intervals = "1000,10000,100000";
  std::string format = "csv";
  std::int64_t compare_n = 0;
  app.add_option("--n-intervals", n_intervals, "Comma-separated interval counts")->capture_default_str();
  app.add_option("--n-times", cfg.n_times, "Reductions per measurement")->capture_default_str();
  app.add_option("--n-repeat", cfg.n_repeat, "Measurement repetitions (minimum is reported)")->capture_default_str();
  app.add_option("--output", cfg.output_path, "Output file written by rank 0")->capture_default_str();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  app.add_option("--compare-interpreted", compare_n,
                 "Instead of the benchmark, time get_pi_part compiled vs. interpreted for this many intervals");
  CLI11_PARSE(app, argc, argv);

  if (!kmpi_initialized()) {
    std::fprintf(stderr, "MPI runtime unavailable: %s\n", kmpi_load_diagnostic());
    return 1;
  }

  try {
    if (compare_n > 0) {
      if (kmpi_rank() == 0) {
        auto c = kmpi::bench::compare_interpreted(compare_n, 3);
        std::printf("compiled: %.6f s\ninterpreted: %.6f s\nspeedup: %.1f\nidentical: %s\n", c.compiled_seconds,
                    c.interpreted_seconds, c.speedup, c.compiled_value == c.interpreted_value ? "yes" : "no");
      }
      return 0;
    }

    cfg.n_intervals_list.clear();
    std::stringstream ss(n_intervals);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) cfg.n_intervals_list.push_back(std::stoll(item));
    }
    cfg.output_format = format == "svg" ? kmpi::bench::OutputFormat::Svg : kmpi::bench::OutputFormat::Csv;
    kmpi::bench::validate(cfg);

    auto records = kmpi::bench::run_benchmark(cfg);
    kmpi::bench::emit(cfg, records);
    if (kmpi_rank() == 0) {
      kmpi::bench::write_csv(std::cout, records);
      for (const auto& r : records) {
        if (r.pi_estimate != r.pi_estimate_roundtrip) {
          std::fprintf(stderr, "warning: estimates differ at n_intervals=%lld\n", static_cast<long long>(r.n_intervals));
        }
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kmpi_bench_pi: %s\n", e.what());
    return 1;
  }
  return 0;
}
