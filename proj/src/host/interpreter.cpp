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

#include "interpreter.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <utility>

namespace kmpi::host {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool truthy(const Value& v) {
  return std::visit(overloaded{
                        [](std::monostate) { return false; },
                        [](std::int64_t i) { return i != 0; },
                        [](double d) { return d != 0.0; },
                        [](const auto&) { return true; },
                    },
                    v);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Value arithmetic(OpCode op, const Value& a, const Value& b) {
  const auto* ia = std::get_if<std::int64_t>(&a);
  const auto* ib = std::get_if<std::int64_t>(&b);
  if (ia != nullptr && ib != nullptr) {
    switch (op) {
      case OpCode::Add:
        return *ia + *ib;
      case OpCode::Sub:
        return *ia - *ib;
      case OpCode::Mul:
        return *ia * *ib;
      case OpCode::Div:
        if (*ib == 0) throw Error("ZeroDivisionError: division by zero");
        return static_cast<double>(*ia) / static_cast<double>(*ib);
      case OpCode::FloorDiv:
        if (*ib == 0) throw Error("ZeroDivisionError: integer division by zero");
        return floor_div(*ia, *ib);
      case OpCode::Less:
        return std::int64_t{*ia < *ib};
      default:
        break;
    }
  }
  const double x = as_double(a);
  const double y = as_double(b);
  switch (op) {
    case OpCode::Add:
      return x + y;
    case OpCode::Sub:
      return x - y;
    case OpCode::Mul:
      return x * y;
    case OpCode::Div:
      if (y == 0.0) throw Error("ZeroDivisionError: float division by zero");
      return x / y;
    case OpCode::FloorDiv:
      if (y == 0.0) throw Error("ZeroDivisionError: float floor division by zero");
      return std::floor(x / y);
    case OpCode::Less:
      return std::int64_t{x < y};
    default:
      break;
  }
  throw Error("internal error: bad arithmetic opcode");
}

std::int64_t flat_index(const HostArray& a, const Value& index) {
  std::int64_t i = as_int(index);
  const std::int64_t n = a.size();
  if (i < 0) i += n;
  if (i < 0 || i >= n) throw Error("IndexError: index out of range");
  return i;
}

}  // namespace

std::string type_name(const Value& v) {
  return std::visit(overloaded{
                        [](std::monostate) { return std::string("None"); },
                        [](std::int64_t) { return std::string("int"); },
                        [](double) { return std::string("float"); },
                        [](const std::shared_ptr<HostArray>&) { return std::string("array"); },
                        [](const std::shared_ptr<const Builtin>&) { return std::string("builtin"); },
                        [](const std::shared_ptr<const Function>&) { return std::string("function"); },
                    },
                    v);
}

double as_double(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw Error("TypeError: expected a number, got " + type_name(v));
}

std::int64_t as_int(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw Error("TypeError: expected an int, got " + type_name(v));
}

std::shared_ptr<HostArray> HostArray::zeros(kmpi_kind kind, std::vector<std::int64_t> shape) {
  auto a = std::make_shared<HostArray>();
  a->kind = kind;
  a->shape = std::move(shape);
  a->storage.assign(static_cast<std::size_t>(a->size()) * kmpi_kind_size(kind), std::byte{0});
  return a;
}

std::int64_t HostArray::size() const {
  std::int64_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

Value HostArray::get(std::int64_t flat) const {
  const std::byte* p = storage.data() + flat * static_cast<std::int64_t>(kmpi_kind_size(kind));
  switch (kind) {
    case KMPI_INT32: {
      std::int32_t x;
      std::memcpy(&x, p, sizeof x);
      return std::int64_t{x};
    }
    case KMPI_INT64: {
      std::int64_t x;
      std::memcpy(&x, p, sizeof x);
      return x;
    }
    case KMPI_FLOAT32: {
      float x;
      std::memcpy(&x, p, sizeof x);
      return double{x};
    }
    case KMPI_FLOAT64: {
      double x;
      std::memcpy(&x, p, sizeof x);
      return x;
    }
    default:
      throw Error("TypeError: complex elements are not representable as host scalars");
  }
}

void HostArray::set(std::int64_t flat, const Value& v) {
  std::byte* p = storage.data() + flat * static_cast<std::int64_t>(kmpi_kind_size(kind));
  switch (kind) {
    case KMPI_INT32: {
      auto x = static_cast<std::int32_t>(as_int(v));
      std::memcpy(p, &x, sizeof x);
      return;
    }
    case KMPI_INT64: {
      std::int64_t x = as_int(v);
      std::memcpy(p, &x, sizeof x);
      return;
    }
    case KMPI_FLOAT32: {
      auto x = static_cast<float>(as_double(v));
      std::memcpy(p, &x, sizeof x);
      return;
    }
    case KMPI_FLOAT64: {
      double x = as_double(v);
      std::memcpy(p, &x, sizeof x);
      return;
    }
    default:
      throw Error("TypeError: cannot store a host scalar into a complex array");
  }
}

kmpi_array HostArray::descriptor() {
  kmpi_array a{};
  a.base = storage.data();
  a.kind = kind;
  a.ndim = static_cast<std::int32_t>(shape.size());
  std::int64_t step = static_cast<std::int64_t>(kmpi_kind_size(kind));
  for (int d = a.ndim - 1; d >= 0; --d) {
    a.shape[d] = shape[static_cast<std::size_t>(d)];
    a.strides[d] = step;
    step *= a.shape[d];
  }
  return a;
}

FunctionBuilder::FunctionBuilder(std::string name, std::vector<std::string> params) {
  fn_.name = std::move(name);
  fn_.arity = static_cast<int>(params.size());
  locals_ = std::move(params);
}

FunctionBuilder& FunctionBuilder::emit(OpCode op, std::int32_t arg) {
  fn_.code.push_back({op, arg});
  return *this;
}

std::int32_t FunctionBuilder::local_slot(std::string_view name) {
  for (std::size_t i = 0; i < locals_.size(); ++i) {
    if (locals_[i] == name) return static_cast<std::int32_t>(i);
  }
  locals_.emplace_back(name);
  return static_cast<std::int32_t>(locals_.size() - 1);
}

FunctionBuilder& FunctionBuilder::constant(Value v) {
  fn_.constants.push_back(std::move(v));
  return emit(OpCode::Const, static_cast<std::int32_t>(fn_.constants.size() - 1));
}

FunctionBuilder& FunctionBuilder::load(std::string_view local) { return emit(OpCode::Load, local_slot(local)); }
FunctionBuilder& FunctionBuilder::store(std::string_view local) { return emit(OpCode::Store, local_slot(local)); }

FunctionBuilder& FunctionBuilder::global(std::string_view name) {
  for (std::size_t i = 0; i < fn_.globals.size(); ++i) {
    if (fn_.globals[i] == name) return emit(OpCode::LoadGlobal, static_cast<std::int32_t>(i));
  }
  fn_.globals.emplace_back(name);
  return emit(OpCode::LoadGlobal, static_cast<std::int32_t>(fn_.globals.size() - 1));
}

FunctionBuilder::Label FunctionBuilder::new_label() {
  label_targets_.push_back(-1);
  return label_targets_.size() - 1;
}

FunctionBuilder& FunctionBuilder::bind(Label label) {
  label_targets_.at(label) = static_cast<std::int64_t>(fn_.code.size());
  return *this;
}

FunctionBuilder& FunctionBuilder::jump(Label label) {
  fixups_.emplace_back(fn_.code.size(), label);
  return emit(OpCode::Jump);
}

FunctionBuilder& FunctionBuilder::jump_if_false(Label label) {
  fixups_.emplace_back(fn_.code.size(), label);
  return emit(OpCode::JumpIfFalse);
}

std::shared_ptr<const Function> FunctionBuilder::build() {
  for (auto [at, label] : fixups_) {
    const std::int64_t target = label_targets_.at(label);
    if (target < 0) throw Error("internal error: unbound label in " + fn_.name);
    fn_.code[at].arg = static_cast<std::int32_t>(target);
  }
  fn_.n_locals = static_cast<int>(locals_.size());
  return std::make_shared<const Function>(fn_);
}

void Interpreter::define(std::string name, Value v) { globals_[std::move(name)] = std::move(v); }

void Interpreter::define_builtin(std::string name, NativeFn fn) {
  auto b = std::make_shared<const Builtin>(Builtin{name, std::move(fn)});
  globals_[std::move(name)] = std::move(b);
}

const Value& Interpreter::lookup(const std::string& name) const {
  auto it = globals_.find(name);
  if (it == globals_.end()) throw Error("NameError: name '" + name + "' is not defined");
  return it->second;
}

Value Interpreter::call(const Value& callee, std::span<const Value> args) {
  if (const auto* b = std::get_if<std::shared_ptr<const Builtin>>(&callee)) {
    return (*b)->fn(*this, args);
  }
  if (const auto* f = std::get_if<std::shared_ptr<const Function>>(&callee)) {
    return run(**f, args);
  }
  throw Error("TypeError: '" + type_name(callee) + "' object is not callable");
}

Value Interpreter::run(const Function& fn, std::span<const Value> args) {
  if (static_cast<int>(args.size()) != fn.arity) {
    throw Error("TypeError: " + fn.name + "() takes " + std::to_string(fn.arity) + " arguments");
  }
  std::vector<Value> locals(static_cast<std::size_t>(fn.n_locals));
  std::copy(args.begin(), args.end(), locals.begin());
  std::vector<Value> stack;
  stack.reserve(16);

  auto pop = [&stack] {
    Value v = std::move(stack.back());
    stack.pop_back();
    return v;
  };

  std::size_t pc = 0;
  while (pc < fn.code.size()) {
    const Instruction ins = fn.code[pc++];
    switch (ins.op) {
      case OpCode::Const:
        stack.push_back(fn.constants[static_cast<std::size_t>(ins.arg)]);
        break;
      case OpCode::Load: {
        const Value& v = locals[static_cast<std::size_t>(ins.arg)];
        if (std::holds_alternative<std::monostate>(v)) {
          throw Error("UnboundLocalError: local variable referenced before assignment in " + fn.name);
        }
        stack.push_back(v);
        break;
      }
      case OpCode::Store:
        locals[static_cast<std::size_t>(ins.arg)] = pop();
        break;
      case OpCode::LoadGlobal:
        stack.push_back(lookup(fn.globals[static_cast<std::size_t>(ins.arg)]));
        break;
      case OpCode::Add:
      case OpCode::Sub:
      case OpCode::Mul:
      case OpCode::Div:
      case OpCode::FloorDiv:
      case OpCode::Less: {
        Value rhs = pop();
        Value lhs = pop();
        stack.push_back(arithmetic(ins.op, lhs, rhs));
        break;
      }
      case OpCode::Jump:
        pc = static_cast<std::size_t>(ins.arg);
        break;
      case OpCode::JumpIfFalse:
        if (!truthy(pop())) pc = static_cast<std::size_t>(ins.arg);
        break;
      case OpCode::Call: {
        const auto nargs = static_cast<std::size_t>(ins.arg);
        std::vector<Value> call_args(std::make_move_iterator(stack.end() - static_cast<std::ptrdiff_t>(nargs)),
                                     std::make_move_iterator(stack.end()));
        stack.resize(stack.size() - nargs);
        Value callee = pop();
        stack.push_back(call(callee, call_args));
        break;
      }
      case OpCode::GetItem: {
        Value index = pop();
        Value target = pop();
        auto* arr = std::get_if<std::shared_ptr<HostArray>>(&target);
        if (arr == nullptr) throw Error("TypeError: '" + type_name(target) + "' object is not subscriptable");
        stack.push_back((*arr)->get(flat_index(**arr, index)));
        break;
      }
      case OpCode::SetItem: {
        Value value = pop();
        Value index = pop();
        Value target = pop();
        auto* arr = std::get_if<std::shared_ptr<HostArray>>(&target);
        if (arr == nullptr) throw Error("TypeError: '" + type_name(target) + "' object does not support item assignment");
        (*arr)->set(flat_index(**arr, index), value);
        break;
      }
      case OpCode::Pop:
        stack.pop_back();
        break;
      case OpCode::Return:
        return stack.empty() ? Value{} : pop();
    }
  }
  return Value{};
}

}  // namespace kmpi::host
