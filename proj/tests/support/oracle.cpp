// Copyright 2026 The fhec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/oracle.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace fhec::testing {
namespace {

// Local bit helpers so the oracle shares no arithmetic code with the
// pipeline it is checking.
uint64_t Mask(uint32_t w) {
  return w >= 64 ? ~uint64_t{0} : (uint64_t{1} << w) - 1;
}

uint64_t Wrap(uint64_t v, uint32_t w) { return v & Mask(w); }

bool TopBit(uint64_t v, uint32_t w) { return (v >> (w - 1)) & 1; }

// Raw w-bit pattern -> mathematically signed value, as int64.
int64_t AsSigned(uint64_t v, uint32_t w) {
  if (TopBit(v, w)) v |= ~Mask(w);
  return static_cast<int64_t>(v);
}

uint64_t Magnitude(uint64_t v, uint32_t w) {
  return TopBit(v, w) ? Wrap(0 - v, w) : v;
}

struct Interp {
  const Program& program;
  int call_depth = 0;

  using Env = std::map<std::string, Value>;

  Value Zero(const Type& type) {
    if (type.is_scalar()) return Value::Scalar(0);
    std::vector<Value> elems;
    if (type.kind == Type::Kind::kArray) {
      elems.assign(type.length, Zero(*type.elem));
    } else {
      const StructDecl* decl = program.FindStruct(type.struct_name);
      if (decl == nullptr) throw std::logic_error("oracle: unknown struct");
      for (const auto& [name, ftype] : decl->fields) {
        elems.push_back(Zero(ftype));
      }
    }
    return Value::List(std::move(elems));
  }

  size_t FieldPos(const Type& struct_type, const std::string& field) {
    const StructDecl* decl = program.FindStruct(struct_type.struct_name);
    if (decl == nullptr) throw std::logic_error("oracle: unknown struct");
    for (size_t i = 0; i < decl->fields.size(); ++i) {
      if (decl->fields[i].first == field) return i;
    }
    throw std::logic_error("oracle: unknown field " + field);
  }

  // --- Scalar operators -------------------------------------------------

  uint64_t EvalBin(BinOp op, uint64_t a, uint64_t b, uint32_t w,
                   bool is_signed) {
    switch (op) {
      case BinOp::kAdd: return Wrap(a + b, w);
      case BinOp::kSub: return Wrap(a - b, w);
      case BinOp::kMul: return Wrap(a * b, w);
      case BinOp::kDiv: {
        if (b == 0) return Mask(w);  // total division: x / 0 == all ones
        if (!is_signed) return a / b;
        uint64_t q = Magnitude(a, w) / Magnitude(b, w);
        if (TopBit(a, w) != TopBit(b, w)) q = 0 - q;
        return Wrap(q, w);
      }
      case BinOp::kMod: {
        if (b == 0) return a;  // total division: x % 0 == x
        if (!is_signed) return a % b;
        uint64_t r = Magnitude(a, w) % Magnitude(b, w);
        if (TopBit(a, w)) r = 0 - r;  // remainder takes the dividend sign
        return Wrap(r, w);
      }
      case BinOp::kBitAnd:
      case BinOp::kLogAnd: return a & b;
      case BinOp::kBitOr:
      case BinOp::kLogOr: return a | b;
      case BinOp::kBitXor: return a ^ b;
      case BinOp::kEq: return a == b ? 1 : 0;
      case BinOp::kNe: return a != b ? 1 : 0;
      case BinOp::kLt:
        if (is_signed) return AsSigned(a, w) < AsSigned(b, w) ? 1 : 0;
        return a < b ? 1 : 0;
      case BinOp::kLe:
        if (is_signed) return AsSigned(a, w) <= AsSigned(b, w) ? 1 : 0;
        return a <= b ? 1 : 0;
      case BinOp::kGt:
        if (is_signed) return AsSigned(a, w) > AsSigned(b, w) ? 1 : 0;
        return a > b ? 1 : 0;
      case BinOp::kGe:
        if (is_signed) return AsSigned(a, w) >= AsSigned(b, w) ? 1 : 0;
        return a >= b ? 1 : 0;
      case BinOp::kShl:
      case BinOp::kShr: break;  // handled by EvalShift
    }
    throw std::logic_error("oracle: unhandled binary operator");
  }

  uint64_t EvalShift(BinOp op, uint64_t a, uint64_t amount, uint32_t w,
                     bool is_signed) {
    if (op == BinOp::kShl) {
      return amount >= w ? 0 : Wrap(a << amount, w);
    }
    if (!is_signed) return amount >= w ? 0 : a >> amount;
    // Arithmetic right shift: the sign bit back-fills; once the amount
    // covers the width only the sign remains.
    if (amount >= w) return TopBit(a, w) ? Mask(w) : 0;
    return Wrap(static_cast<uint64_t>(AsSigned(a, w) >> amount), w);
  }

  uint64_t EvalCast(uint64_t v, const Type& from, const Type& to) {
    uint32_t fw = from.scalar_width();
    uint32_t tw = to.scalar_width();
    if (to.kind == Type::Kind::kBool && from.kind != Type::Kind::kBool) {
      return v != 0 ? 1 : 0;
    }
    if (tw <= fw) return Wrap(v, tw);
    if (from.is_signed() && TopBit(v, fw)) return Wrap(v | ~Mask(fw), tw);
    return v;
  }

  // --- Expressions ------------------------------------------------------

  Value Eval(const Expr& e, Env& env) {
    if (const auto* lit = std::get_if<IntLit>(&e.node)) {
      return Value::Scalar(Wrap(lit->value, e.type.scalar_width()));
    }
    if (const auto* lit = std::get_if<BoolLit>(&e.node)) {
      return Value::Scalar(lit->value ? 1 : 0);
    }
    if (const auto* var = std::get_if<VarRef>(&e.node)) {
      auto it = env.find(var->name);
      if (it == env.end()) throw std::logic_error("oracle: unbound variable");
      return it->second;
    }
    if (const auto* un = std::get_if<UnaryExpr>(&e.node)) {
      uint64_t v = Eval(*un->operand, env).scalar();
      uint32_t w = un->operand->type.scalar_width();
      switch (un->op) {
        case UnOp::kNeg: return Value::Scalar(Wrap(0 - v, w));
        case UnOp::kBitNot:
        case UnOp::kLogNot: return Value::Scalar(Wrap(~v, w));
      }
      throw std::logic_error("oracle: unhandled unary operator");
    }
    if (const auto* bin = std::get_if<BinaryExpr>(&e.node)) {
      uint64_t a = Eval(*bin->lhs, env).scalar();
      uint32_t w = bin->lhs->type.scalar_width();
      bool is_signed = bin->lhs->type.is_signed();
      if (bin->op == BinOp::kShl || bin->op == BinOp::kShr) {
        auto amount = ConstEval(*bin->rhs);
        if (!amount.has_value()) {
          throw std::logic_error("oracle: non-constant shift amount");
        }
        return Value::Scalar(EvalShift(bin->op, a, *amount, w, is_signed));
      }
      uint64_t b = Eval(*bin->rhs, env).scalar();
      return Value::Scalar(EvalBin(bin->op, a, b, w, is_signed));
    }
    if (const auto* tern = std::get_if<TernaryExpr>(&e.node)) {
      uint64_t c = Eval(*tern->cond, env).scalar();
      Value tv = Eval(*tern->then_expr, env);
      Value ev = Eval(*tern->else_expr, env);
      return c != 0 ? tv : ev;
    }
    if (const auto* cast = std::get_if<CastExpr>(&e.node)) {
      uint64_t v = Eval(*cast->operand, env).scalar();
      return Value::Scalar(EvalCast(v, cast->operand->type, cast->target));
    }
    if (const auto* idx = std::get_if<IndexExpr>(&e.node)) {
      Value base = Eval(*idx->base, env);
      uint64_t k = Eval(*idx->index, env).scalar();
      if (k < idx->base->type.length) return base.elems()[k];
      return Zero(*idx->base->type.elem);  // out of range reads zero
    }
    if (const auto* fld = std::get_if<FieldExpr>(&e.node)) {
      Value base = Eval(*fld->base, env);
      return base.elems()[FieldPos(fld->base->type, fld->field)];
    }
    if (const auto* call = std::get_if<CallExpr>(&e.node)) {
      const FuncDecl* callee = program.FindFunction(call->callee);
      if (callee == nullptr) throw std::logic_error("oracle: unknown callee");
      std::vector<Value> args;
      for (const auto& arg : call->args) args.push_back(Eval(*arg, env));
      return Run(*callee, args);
    }
    throw std::logic_error("oracle: unhandled expression");
  }

  // --- Lvalues ----------------------------------------------------------

  void Write(const Expr& lvalue, Value value, Env& env) {
    if (const auto* var = std::get_if<VarRef>(&lvalue.node)) {
      env[var->name] = std::move(value);
      return;
    }
    if (const auto* fld = std::get_if<FieldExpr>(&lvalue.node)) {
      Value base = Eval(*fld->base, env);
      size_t pos = FieldPos(fld->base->type, fld->field);
      std::get<std::vector<Value>>(base.v)[pos] = std::move(value);
      Write(*fld->base, std::move(base), env);
      return;
    }
    if (const auto* idx = std::get_if<IndexExpr>(&lvalue.node)) {
      Value base = Eval(*idx->base, env);
      uint64_t k = Eval(*idx->index, env).scalar();
      if (k < idx->base->type.length) {  // out of range writes nothing
        std::get<std::vector<Value>>(base.v)[k] = std::move(value);
      }
      Write(*idx->base, std::move(base), env);
      return;
    }
    throw std::logic_error("oracle: assignment to non-lvalue");
  }

  // --- Statements ---------------------------------------------------------

  // Returns the function result once a `return` executes, nullopt otherwise.
  std::optional<Value> Exec(const Stmt& stmt, Env& env) {
    if (const auto* block = std::get_if<BlockStmt>(&stmt.node)) {
      for (const auto& s : block->stmts) {
        if (auto r = Exec(*s, env)) return r;
      }
      return std::nullopt;
    }
    if (const auto* decl = std::get_if<DeclStmt>(&stmt.node)) {
      env[decl->name] = decl->init ? Eval(*decl->init, env) : Zero(decl->type);
      return std::nullopt;
    }
    if (const auto* assign = std::get_if<AssignStmt>(&stmt.node)) {
      Value value = Eval(*assign->value, env);
      if (assign->op.has_value()) {
        uint64_t cur = Eval(*assign->target, env).scalar();
        uint32_t w = assign->target->type.scalar_width();
        bool is_signed = assign->target->type.is_signed();
        if (*assign->op == BinOp::kShl || *assign->op == BinOp::kShr) {
          auto amount = ConstEval(*assign->value);
          if (!amount.has_value()) {
            throw std::logic_error("oracle: non-constant shift amount");
          }
          value = Value::Scalar(EvalShift(*assign->op, cur, *amount, w,
                                          is_signed));
        } else {
          value = Value::Scalar(
              EvalBin(*assign->op, cur, value.scalar(), w, is_signed));
        }
      }
      Write(*assign->target, std::move(value), env);
      return std::nullopt;
    }
    if (const auto* ifs = std::get_if<IfStmt>(&stmt.node)) {
      if (Eval(*ifs->cond, env).scalar() != 0) return Exec(*ifs->then_stmt, env);
      if (ifs->else_stmt) return Exec(*ifs->else_stmt, env);
      return std::nullopt;
    }
    if (const auto* loop = std::get_if<ForStmt>(&stmt.node)) {
      if (auto r = Exec(*loop->init, env)) return r;
      uint64_t guard = 0;
      while (Eval(*loop->cond, env).scalar() != 0) {
        if (++guard > (uint64_t{1} << 24)) {
          throw std::logic_error("oracle: loop iteration cap exceeded");
        }
        if (auto r = Exec(*loop->body, env)) return r;
        if (auto r = Exec(*loop->step, env)) return r;
      }
      return std::nullopt;
    }
    const auto& ret = std::get<ReturnStmt>(stmt.node);
    return Eval(*ret.value, env);
  }

  Value Run(const FuncDecl& fn, const std::vector<Value>& args) {
    if (args.size() != fn.params.size()) {
      throw std::logic_error("oracle: argument count mismatch");
    }
    if (++call_depth > 512) throw std::logic_error("oracle: call too deep");
    Env env;
    for (size_t i = 0; i < args.size(); ++i) env[fn.params[i].name] = args[i];
    std::optional<Value> result = Exec(*fn.body, env);
    --call_depth;
    if (!result.has_value()) {
      throw std::logic_error("oracle: function fell off the end");
    }
    return *result;
  }
};

}  // namespace

Value OracleRun(const Program& program, std::string_view entry,
                const std::vector<Value>& args) {
  const FuncDecl* fn = program.FindFunction(entry);
  if (fn == nullptr) throw std::logic_error("oracle: entry not found");
  Interp interp{program};
  return interp.Run(*fn, args);
}

Value OracleZero(const Program& program, const Type& type) {
  Interp interp{program};
  return interp.Zero(type);
}

}  // namespace fhec::testing
