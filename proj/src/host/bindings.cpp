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

// Host-level MPI bindings. Arguments arrive boxed; the binding inspects them,
// builds a descriptor and forwards to the C API, raising on failure.

#include "interpreter.hpp"

namespace kmpi::host {
namespace {

std::shared_ptr<HostArray> expect_array(std::span<const Value> args, std::size_t i, const char* fn) {
  if (i >= args.size()) throw Error(std::string("TypeError: ") + fn + "() missing array argument");
  const auto* a = std::get_if<std::shared_ptr<HostArray>>(&args[i]);
  if (a == nullptr) {
    throw Error(std::string("TypeError: ") + fn + "() expects an array, got " + type_name(args[i]));
  }
  return *a;
}

std::int64_t int_arg(std::span<const Value> args, std::size_t i, std::int64_t fallback) {
  return i < args.size() ? as_int(args[i]) : fallback;
}

void check(int status, const char* fn) {
  if (status != KMPI_SUCCESS) {
    throw Error(std::string("MPIError: ") + fn + "() failed: " + kmpi_error_string(status));
  }
}

}  // namespace

void install_mpi_bindings(Interpreter& interp) {
  interp.define_builtin("size", [](Interpreter&, std::span<const Value>) -> Value {
    return std::int64_t{kmpi_size()};
  });
  interp.define_builtin("rank", [](Interpreter&, std::span<const Value>) -> Value {
    return std::int64_t{kmpi_rank()};
  });
  interp.define_builtin("wtime", [](Interpreter&, std::span<const Value>) -> Value { return kmpi_wtime(); });
  interp.define_builtin("barrier", [](Interpreter&, std::span<const Value>) -> Value {
    check(kmpi_barrier(), "barrier");
    return {};
  });
  interp.define_builtin("array", [](Interpreter&, std::span<const Value> args) -> Value {
    const std::int64_t n = int_arg(args, 0, 1);
    const auto kind = static_cast<kmpi_kind>(int_arg(args, 1, KMPI_FLOAT64));
    if (n < 0 || kmpi_kind_size(kind) == 0) throw Error("ValueError: bad array() arguments");
    return HostArray::zeros(kind, {n});
  });
  interp.define_builtin("allreduce", [](Interpreter&, std::span<const Value> args) -> Value {
    auto send = expect_array(args, 0, "allreduce");
    auto recv = expect_array(args, 1, "allreduce");
    const auto op = static_cast<std::int32_t>(int_arg(args, 2, KMPI_SUM));
    kmpi_array s = send->descriptor();
    kmpi_array r = recv->descriptor();
    check(kmpi_allreduce(&s, &r, op), "allreduce");
    return {};
  });
  interp.define_builtin("bcast", [](Interpreter&, std::span<const Value> args) -> Value {
    auto data = expect_array(args, 0, "bcast");
    kmpi_array d = data->descriptor();
    check(kmpi_bcast(&d, static_cast<int>(int_arg(args, 1, 0))), "bcast");
    return {};
  });
  interp.define_builtin("send", [](Interpreter&, std::span<const Value> args) -> Value {
    auto data = expect_array(args, 0, "send");
    kmpi_array d = data->descriptor();
    check(kmpi_send(&d, static_cast<int>(int_arg(args, 1, 0)), static_cast<int>(int_arg(args, 2, 0))), "send");
    return {};
  });
  interp.define_builtin("recv", [](Interpreter&, std::span<const Value> args) -> Value {
    auto data = expect_array(args, 0, "recv");
    kmpi_array d = data->descriptor();
    check(kmpi_recv(&d, static_cast<int>(int_arg(args, 1, 0)), static_cast<int>(int_arg(args, 2, 0))), "recv");
    return {};
  });
}

}  // namespace kmpi::host
