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

// A small dynamically typed bytecode interpreter. It plays the role of an
// interpreted host language: every value is boxed, every global is looked up
// by name at run time, and native functions are reached through a generic
// call protocol. The benchmarks use it to measure what it costs to leave
// compiled code and come back.
#pragma once

#include <kernmpi/kernmpi.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace kmpi::host {

struct HostArray;
struct Builtin;
struct Function;

using Value = std::variant<std::monostate, std::int64_t, double, std::shared_ptr<HostArray>,
                           std::shared_ptr<const Builtin>, std::shared_ptr<const Function>>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string type_name(const Value& v);
double as_double(const Value& v);
std::int64_t as_int(const Value& v);

// Dense row-major numeric array owned by the host.
struct HostArray {
  kmpi_kind kind = KMPI_FLOAT64;
  std::vector<std::int64_t> shape;
  std::vector<std::byte> storage;

  static std::shared_ptr<HostArray> zeros(kmpi_kind kind, std::vector<std::int64_t> shape);

  std::int64_t size() const;
  Value get(std::int64_t flat) const;
  void set(std::int64_t flat, const Value& v);
  kmpi_array descriptor();
};

class Interpreter;
using NativeFn = std::function<Value(Interpreter&, std::span<const Value>)>;

struct Builtin {
  std::string name;
  NativeFn fn;
};

enum class OpCode : std::uint8_t {
  Const,
  Load,
  Store,
  LoadGlobal,
  Add,
  Sub,
  Mul,
  Div,
  FloorDiv,
  Less,
  Jump,
  JumpIfFalse,
  Call,
  GetItem,
  SetItem,
  Pop,
  Return,
};

struct Instruction {
  OpCode op;
  std::int32_t arg = 0;
};

struct Function {
  std::string name;
  int arity = 0;
  int n_locals = 0;
  std::vector<Value> constants;
  std::vector<std::string> globals;
  std::vector<Instruction> code;
};

// Assembles a Function. Locals are declared implicitly on first use.
class FunctionBuilder {
 public:
  using Label = std::size_t;

  FunctionBuilder(std::string name, std::vector<std::string> params);

  FunctionBuilder& constant(Value v);
  FunctionBuilder& load(std::string_view local);
  FunctionBuilder& store(std::string_view local);
  FunctionBuilder& global(std::string_view name);
  FunctionBuilder& add() { return emit(OpCode::Add); }
  FunctionBuilder& sub() { return emit(OpCode::Sub); }
  FunctionBuilder& mul() { return emit(OpCode::Mul); }
  FunctionBuilder& div() { return emit(OpCode::Div); }
  FunctionBuilder& floordiv() { return emit(OpCode::FloorDiv); }
  FunctionBuilder& less() { return emit(OpCode::Less); }
  FunctionBuilder& call(int nargs) { return emit(OpCode::Call, nargs); }
  FunctionBuilder& get_item() { return emit(OpCode::GetItem); }
  FunctionBuilder& set_item() { return emit(OpCode::SetItem); }
  FunctionBuilder& pop() { return emit(OpCode::Pop); }
  FunctionBuilder& ret() { return emit(OpCode::Return); }

  Label new_label();
  FunctionBuilder& bind(Label label);
  FunctionBuilder& jump(Label label);
  FunctionBuilder& jump_if_false(Label label);

  std::shared_ptr<const Function> build();

 private:
  FunctionBuilder& emit(OpCode op, std::int32_t arg = 0);
  std::int32_t local_slot(std::string_view name);

  Function fn_;
  std::vector<std::string> locals_;
  std::vector<std::int64_t> label_targets_;
  std::vector<std::pair<std::size_t, Label>> fixups_;
};

class Interpreter {
 public:
  void define(std::string name, Value v);
  void define_builtin(std::string name, NativeFn fn);
  const Value& lookup(const std::string& name) const;

  Value call(const Value& callee, std::span<const Value> args);
  Value run(const Function& fn, std::span<const Value> args);

 private:
  std::unordered_map<std::string, Value> globals_;
};

// Registers size, rank, wtime, barrier, array, allreduce, bcast, send and recv
// as host builtins backed by the kernmpi C API.
void install_mpi_bindings(Interpreter& interp);

}  // namespace kmpi::host
