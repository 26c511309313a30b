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

#include "pi.hpp"

#include <kernmpi/kernmpi.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace kmpi::bench {

using host::FunctionBuilder;
using host::Value;

double get_pi_part(std::int64_t n_intervals, std::int64_t rank, std::int64_t size) {
  const double h = 1.0 / static_cast<double>(n_intervals);
  const std::int64_t begin = rank * n_intervals / size;
  const std::int64_t end = (rank + 1) * n_intervals / size;
  double partial = 0.0;
  for (std::int64_t i = begin; i < end; ++i) {
    const double x = h * (static_cast<double>(i) + 0.5);
    partial = partial + 4.0 / (1.0 + x * x);
  }
  return h * partial;
}

std::shared_ptr<const host::Function> get_pi_part_program() {
  FunctionBuilder b("get_pi_part", {"n_intervals", "rank", "size"});
  auto loop = b.new_label();
  auto done = b.new_label();
  // h = 1.0 / n_intervals
  b.constant(1.0).load("n_intervals").div().store("h");
  // begin = rank * n_intervals // size ; end = (rank + 1) * n_intervals // size
  b.load("rank").load("n_intervals").mul().load("size").floordiv().store("begin");
  b.load("rank").constant(std::int64_t{1}).add().load("n_intervals").mul().load("size").floordiv().store("end");
  b.constant(0.0).store("partial");
  b.load("begin").store("i");
  b.bind(loop);
  b.load("i").load("end").less().jump_if_false(done);
  // x = h * (i + 0.5)
  b.load("h").load("i").constant(0.5).add().mul().store("x");
  // partial = partial + 4.0 / (1.0 + x * x)
  b.load("partial").constant(4.0).constant(1.0).load("x").load("x").mul().add().div().add().store("partial");
  b.load("i").constant(std::int64_t{1}).add().store("i");
  b.jump(loop);
  b.bind(done);
  b.load("h").load("partial").mul().ret();
  return b.build();
}

double get_pi_part_interpreted(host::Interpreter& interp, std::int64_t n_intervals, std::int64_t rank,
                               std::int64_t size) {
  static const auto program = get_pi_part_program();
  const Value args[] = {n_intervals, rank, size};
  return host::as_double(interp.run(*program, args));
}

int pi_in_kernel(int n_times, std::int64_t n_intervals, double& estimate) {
  double pi = 0.0;
  double part = 0.0;
  const kmpi_array send = kmpi::scalar_view(&part);
  const kmpi_array recv = kmpi::scalar_view(&pi);
  for (int t = 0; t < n_times; ++t) {
    part = get_pi_part(n_intervals, kmpi_rank(), kmpi_size());
    if (int status = kmpi_allreduce(&send, &recv, KMPI_SUM); status != KMPI_SUCCESS) return status;
  }
  estimate = pi;
  return KMPI_SUCCESS;
}

RoundtripPi::RoundtripPi() {
  host::install_mpi_bindings(interp_);
  interp_.define_builtin("get_pi_part", [](host::Interpreter&, std::span<const Value> args) -> Value {
    if (args.size() != 3) throw host::Error("TypeError: get_pi_part() takes 3 arguments");
    return get_pi_part(host::as_int(args[0]), host::as_int(args[1]), host::as_int(args[2]));
  });

  FunctionBuilder b("pi_roundtrip", {"n_times", "n_intervals"});
  auto loop = b.new_label();
  auto done = b.new_label();
  b.global("array").constant(std::int64_t{1}).call(1).store("pi");
  b.global("array").constant(std::int64_t{1}).call(1).store("part");
  b.constant(std::int64_t{0}).store("t");
  b.bind(loop);
  b.load("t").load("n_times").less().jump_if_false(done);
  // part[0] = get_pi_part(n_intervals, rank(), size())
  b.load("part").constant(std::int64_t{0});
  b.global("get_pi_part").load("n_intervals").global("rank").call(0).global("size").call(0).call(3);
  b.set_item();
  // allreduce(part, pi)
  b.global("allreduce").load("part").load("pi").call(2).pop();
  b.load("t").constant(std::int64_t{1}).add().store("t");
  b.jump(loop);
  b.bind(done);
  b.load("pi").constant(std::int64_t{0}).get_item().ret();
  loop_ = b.build();
}

int RoundtripPi::run(int n_times, std::int64_t n_intervals, double& estimate) {
  const Value args[] = {std::int64_t{n_times}, n_intervals};
  try {
    estimate = host::as_double(interp_.run(*loop_, args));
    last_error_.clear();
    return KMPI_SUCCESS;
  } catch (const host::Error& e) {
    last_error_ = e.what();
    return KMPI_ERR_INVALID_ARG;
  }
}

void validate(const BenchConfig& cfg) {
  if (cfg.n_intervals_list.empty()) throw std::invalid_argument("at least one n_intervals value is required");
  for (auto n : cfg.n_intervals_list) {
    if (n <= 0) throw std::invalid_argument("n_intervals values must be positive");
  }
  if (cfg.n_times <= 0) throw std::invalid_argument("n_times must be positive");
  if (cfg.n_repeat < 3) throw std::invalid_argument("n_repeat must be at least 3");
}

namespace {

void require(int status, const char* what) {
  if (status != KMPI_SUCCESS) {
    throw std::runtime_error(std::string(what) + ": " + kmpi_error_string(status));
  }
}

double slowest_rank(double seconds) {
  double out = 0.0;
  const kmpi_array send = kmpi::scalar_view(&seconds);
  const kmpi_array recv = kmpi::scalar_view(&out);
  require(kmpi_allreduce(&send, &recv, KMPI_MAX), "allreduce");
  return out;
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
  validate(cfg);
  RoundtripPi roundtrip;
  std::vector<BenchRecord> records;
  for (const std::int64_t n : cfg.n_intervals_list) {
    if (n < kmpi_size()) throw std::invalid_argument("n_intervals must be at least the number of ranks");
    BenchRecord rec;
    rec.n_intervals = n;
    rec.n_times = cfg.n_times;
    double best_kernel = std::numeric_limits<double>::infinity();
    double best_roundtrip = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.n_repeat; ++r) {
      require(kmpi_barrier(), "barrier");
      double t0 = kmpi_wtime();
      require(pi_in_kernel(cfg.n_times, n, rec.pi_estimate), "pi_in_kernel");
      best_kernel = std::min(best_kernel, kmpi_wtime() - t0);

      require(kmpi_barrier(), "barrier");
      t0 = kmpi_wtime();
      if (roundtrip.run(cfg.n_times, n, rec.pi_estimate_roundtrip) != KMPI_SUCCESS) {
        throw std::runtime_error("pi_roundtrip: " + roundtrip.last_error());
      }
      best_roundtrip = std::min(best_roundtrip, kmpi_wtime() - t0);
    }
    rec.time_in_kernel = slowest_rank(best_kernel);
    rec.time_roundtrip = slowest_rank(best_roundtrip);
    rec.speedup = rec.time_roundtrip / rec.time_in_kernel;
    records.push_back(rec);
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << '\n';
  char line[256];
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%lld,%d,%.9g,%.9g,%.6g,%.17g\n", static_cast<long long>(r.n_intervals),
                  r.n_times, r.time_in_kernel, r.time_roundtrip, r.speedup, r.pi_estimate);
    out << line;
  }
}

void write_svg(std::ostream& out, const std::vector<BenchRecord>& records) {
  constexpr double width = 640;
  constexpr double height = 400;
  constexpr double margin = 60;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymax = 1.0;
  for (const auto& r : records) {
    const double x = std::log10(static_cast<double>(r.n_times) / static_cast<double>(r.n_intervals));
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymax = std::max(ymax, r.speedup);
  }
  if (records.empty()) xmin = xmax = 0.0;
  if (xmax - xmin < 1e-9) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  ymax = std::ceil(ymax * 1.1 * 2.0) / 2.0;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - y / ymax * (height - 2 * margin); };

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                margin, height - margin, width - margin, height - margin, margin, height - margin, margin, margin);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n", margin,
                py(1.0), width - margin, py(1.0));
  out << buf;
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">log10(n_times / n_intervals)</text>\n";
  out << "<text x=\"18\" y=\"" << height / 2 << "\" transform=\"rotate(-90 18 " << height / 2
      << ")\" text-anchor=\"middle\">speedup (roundtrip / in-kernel)</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double y = ymax * k / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"end\" font-size=\"11\">%.2f</text>\n",
                  margin - 6, py(y) + 4, y);
    out << buf;
  }
  for (int k = 0; k <= 4; ++k) {
    const double x = xmin + (xmax - xmin) * k / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-size=\"11\">%.2f</text>\n",
                  px(x), height - margin + 16, x);
    out << buf;
  }
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const auto& r : records) {
    const double x = std::log10(static_cast<double>(r.n_times) / static_cast<double>(r.n_intervals));
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(r.speedup));
    out << buf;
  }
  out << "\"/>\n";
  for (const auto& r : records) {
    const double x = std::log10(static_cast<double>(r.n_times) / static_cast<double>(r.n_intervals));
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"steelblue\"/>\n", px(x),
                  py(r.speedup));
    out << buf;
  }
  out << "</svg>\n";
}

void emit(const BenchConfig& cfg, const std::vector<BenchRecord>& records) {
  if (kmpi_rank() != 0) return;
  std::ofstream out(cfg.output_path);
  if (!out) throw std::runtime_error("cannot open " + cfg.output_path + " for writing");
  if (cfg.output_format == OutputFormat::Svg) {
    write_svg(out, records);
  } else {
    write_csv(out, records);
  }
  if (!out) throw std::runtime_error("failed writing " + cfg.output_path);
}

InterpretedComparison compare_interpreted(std::int64_t n_intervals, int compiled_repeats) {
  using clock = std::chrono::steady_clock;
  InterpretedComparison c;
  c.compiled_seconds = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, compiled_repeats); ++r) {
    // Barriers keep the optimizer from folding repeats or moving the call
    // out of the timed region.
    std::int64_t n = n_intervals;
    const auto t0 = clock::now();
    asm volatile("" : "+r"(n)::"memory");
    double value = get_pi_part(n, 0, 1);
    asm volatile("" : "+x"(value)::"memory");
    c.compiled_value = value;
    c.compiled_seconds = std::min(c.compiled_seconds, std::chrono::duration<double>(clock::now() - t0).count());
  }
  host::Interpreter interp;
  const auto t0 = clock::now();
  c.interpreted_value = get_pi_part_interpreted(interp, n_intervals, 0, 1);
  c.interpreted_seconds = std::chrono::duration<double>(clock::now() - t0).count();
  c.speedup = c.interpreted_seconds / c.compiled_seconds;
  return c;
}

}  // namespace kmpi::bench
