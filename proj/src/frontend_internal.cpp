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

#include "frontend_internal.hpp"

#include <algorithm>

#include "fhec/ir.hpp"

namespace fhec {
namespace {

Diagnostic LoopError(const SourceSpan& span, std::string message) {
  return Diagnostic{Severity::kError, span, std::string(diag::kVariableLoopBound),
                    std::move(message)};
}

int64_t SignExtend(uint64_t v, uint32_t width) {
  if (width < 64 && ((v >> (width - 1)) & 1)) v |= ~WidthMask(width);
  return static_cast<int64_t>(v);
}

// The variable at the root of an lvalue chain (a, a[i], a.x, a[i].y ...).
const std::string* RootVar(const Expr& lvalue) {
  if (const auto* v = std::get_if<VarRef>(&lvalue.node)) return &v->name;
  if (const auto* idx = std::get_if<IndexExpr>(&lvalue.node)) {
    return RootVar(*idx->base);
  }
  if (const auto* fld = std::get_if<FieldExpr>(&lvalue.node)) {
    return RootVar(*fld->base);
  }
  return nullptr;
}

bool StmtAssignsVar(const Stmt& stmt, const std::string& var) {
  struct Visitor {
    const std::string& var;
    bool operator()(const BlockStmt& s) const {
      return std::any_of(s.stmts.begin(), s.stmts.end(), [&](const StmtPtr& p) {
        return StmtAssignsVar(*p, var);
      });
    }
    bool operator()(const DeclStmt&) const { return false; }
    bool operator()(const AssignStmt& s) const {
      const std::string* root = RootVar(*s.target);
      return root != nullptr && *root == var;
    }
    bool operator()(const IfStmt& s) const {
      return StmtAssignsVar(*s.then_stmt, var) ||
             (s.else_stmt && StmtAssignsVar(*s.else_stmt, var));
    }
    bool operator()(const ForStmt& s) const {
      return (s.init && StmtAssignsVar(*s.init, var)) ||
             (s.step && StmtAssignsVar(*s.step, var)) ||
             StmtAssignsVar(*s.body, var);
    }
    bool operator()(const ReturnStmt&) const { return false; }
  };
  return std::visit(Visitor{var}, stmt.node);
}

// Matches `v = v + c`, `v = c + v`, `v = v - c`, `v += c`, `v -= c` and
// returns the signed direction and magnitude, or nullopt.
struct StepPattern {
  bool subtract = false;
  uint64_t delta = 0;
};

std::optional<StepPattern> MatchStep(const AssignStmt& step,
                                     const std::string& var) {
  const auto* target = std::get_if<VarRef>(&step.target->node);
  if (target == nullptr || target->name != var) return std::nullopt;
  if (step.op.has_value()) {
    if (*step.op != BinOp::kAdd && *step.op != BinOp::kSub) return std::nullopt;
    auto delta = ConstEval(*step.value);
    if (!delta) return std::nullopt;
    return StepPattern{*step.op == BinOp::kSub, *delta};
  }
  const auto* bin = std::get_if<BinaryExpr>(&step.value->node);
  if (bin == nullptr) return std::nullopt;
  if (bin->op != BinOp::kAdd && bin->op != BinOp::kSub) return std::nullopt;
  const auto* lhs_var = std::get_if<VarRef>(&bin->lhs->node);
  const auto* rhs_var = std::get_if<VarRef>(&bin->rhs->node);
  if (lhs_var != nullptr && lhs_var->name == var) {
    auto delta = ConstEval(*bin->rhs);
    if (!delta) return std::nullopt;
    return StepPattern{bin->op == BinOp::kSub, *delta};
  }
  // c + v (addition only; c - v is not an induction step).
  if (rhs_var != nullptr && rhs_var->name == var && bin->op == BinOp::kAdd) {
    auto delta = ConstEval(*bin->lhs);
    if (!delta) return std::nullopt;
    return StepPattern{false, *delta};
  }
  return std::nullopt;
}

}  // namespace

std::variant<LoopPlan, Diagnostic> AnalyzeLoop(const ForStmt& loop,
                                               const SourceSpan& span,
                                               uint64_t max_trip_count) {
  LoopPlan plan;

  // Induction variable and its initial value.
  uint64_t init_value = 0;
  if (loop.init == nullptr) {
    return LoopError(span, "for loop must initialize its loop variable");
  }
  if (const auto* decl = std::get_if<DeclStmt>(&loop.init->node)) {
    if (decl->type.kind != Type::Kind::kUInt &&
        decl->type.kind != Type::Kind::kInt) {
      return LoopError(loop.init->span,
                       "loop variable must have an integer type");
    }
    plan.var = decl->name;
    plan.var_type = decl->type;
    plan.declares_var = true;
    if (decl->init != nullptr) {
      auto v = ConstEval(*decl->init);
      if (!v) {
        return LoopError(decl->init->span,
                         "loop variable initializer must be a compile-time "
                         "constant");
      }
      init_value = *v;
    }
  } else if (const auto* assign = std::get_if<AssignStmt>(&loop.init->node)) {
    const auto* target = std::get_if<VarRef>(&assign->target->node);
    if (target == nullptr || assign->op.has_value()) {
      return LoopError(loop.init->span,
                       "for loop initializer must assign the loop variable");
    }
    if (assign->target->type.kind != Type::Kind::kUInt &&
        assign->target->type.kind != Type::Kind::kInt) {
      return LoopError(loop.init->span,
                       "loop variable must have an integer type");
    }
    plan.var = target->name;
    plan.var_type = assign->target->type;
    auto v = ConstEval(*assign->value);
    if (!v) {
      return LoopError(assign->value->span,
                       "loop variable initializer must be a compile-time "
                       "constant");
    }
    init_value = *v;
  } else {
    return LoopError(loop.init->span,
                     "for loop initializer must declare or assign the loop "
                     "variable");
  }

  // Condition: `var <op> constant`.
  const auto* cond = std::get_if<BinaryExpr>(&loop.cond->node);
  if (cond == nullptr ||
      (cond->op != BinOp::kLt && cond->op != BinOp::kLe &&
       cond->op != BinOp::kGt && cond->op != BinOp::kGe &&
       cond->op != BinOp::kNe)) {
    return LoopError(loop.cond->span,
                     "loop condition must compare the loop variable against "
                     "a bound (<, <=, >, >=, !=)");
  }
  const auto* cond_var = std::get_if<VarRef>(&cond->lhs->node);
  if (cond_var == nullptr || cond_var->name != plan.var) {
    return LoopError(loop.cond->span,
                     "loop condition must have the loop variable on the left");
  }
  auto bound = ConstEval(*cond->rhs);
  if (!bound) {
    return LoopError(cond->rhs->span,
                     "loop bound must be a compile-time constant");
  }

  // Step: `var += c` (or equivalent spellings).
  const auto* step_assign =
      loop.step != nullptr ? std::get_if<AssignStmt>(&loop.step->node) : nullptr;
  std::optional<StepPattern> step =
      step_assign != nullptr ? MatchStep(*step_assign, plan.var) : std::nullopt;
  if (!step) {
    return LoopError(loop.step != nullptr ? loop.step->span : span,
                     "loop step must add or subtract a compile-time constant "
                     "from the loop variable");
  }

  if (StmtAssignsVar(*loop.body, plan.var)) {
    return LoopError(span, "loop variable must not be modified in the loop "
                           "body");
  }

  // Simulate. The variable lives in w-bit arithmetic; the bound is a raw
  // 64-bit constant, so e.g. `u8 i; i < 300` correctly never fails.
  const uint32_t w = plan.var_type.width;
  const uint64_t mask = WidthMask(w);
  const bool is_signed = plan.var_type.kind == Type::Kind::kInt;
  uint64_t v = init_value & mask;

  auto holds = [&](uint64_t value) {
    if (is_signed) {
      int64_t a = SignExtend(value, w);
      int64_t b = static_cast<int64_t>(*bound);
      switch (cond->op) {
        case BinOp::kLt: return a < b;
        case BinOp::kLe: return a <= b;
        case BinOp::kGt: return a > b;
        case BinOp::kGe: return a >= b;
        default: return a != b;
      }
    }
    uint64_t a = value;
    uint64_t b = *bound;
    switch (cond->op) {
      case BinOp::kLt: return a < b;
      case BinOp::kLe: return a <= b;
      case BinOp::kGt: return a > b;
      case BinOp::kGe: return a >= b;
      default: return a != b;
    }
  };

  while (holds(v)) {
    if (plan.values.size() >= max_trip_count) {
      return LoopError(span, "loop does not terminate or exceeds " +
                                 std::to_string(max_trip_count) +
                                 " iterations");
    }
    plan.values.push_back(v);
    v = (step->subtract ? v - step->delta : v + step->delta) & mask;
  }
  plan.exit_value = v;
  return plan;
}

bool DefinitelyReturns(const Stmt& stmt) {
  struct Visitor {
    bool operator()(const BlockStmt& s) const {
      return std::any_of(s.stmts.begin(), s.stmts.end(), [](const StmtPtr& p) {
        return DefinitelyReturns(*p);
      });
    }
    bool operator()(const DeclStmt&) const { return false; }
    bool operator()(const AssignStmt&) const { return false; }
    bool operator()(const IfStmt& s) const {
      return s.else_stmt != nullptr && DefinitelyReturns(*s.then_stmt) &&
             DefinitelyReturns(*s.else_stmt);
    }
    bool operator()(const ForStmt&) const { return false; }
    bool operator()(const ReturnStmt&) const { return true; }
  };
  return std::visit(Visitor{}, stmt.node);
}

namespace {

void CollectCallsExpr(const Expr& expr, std::vector<std::string>* out) {
  struct Visitor {
    std::vector<std::string>* out;
    void operator()(const IntLit&) const {}
    void operator()(const BoolLit&) const {}
    void operator()(const VarRef&) const {}
    void operator()(const UnaryExpr& e) const { CollectCallsExpr(*e.operand, out); }
    void operator()(const BinaryExpr& e) const {
      CollectCallsExpr(*e.lhs, out);
      CollectCallsExpr(*e.rhs, out);
    }
    void operator()(const TernaryExpr& e) const {
      CollectCallsExpr(*e.cond, out);
      CollectCallsExpr(*e.then_expr, out);
      CollectCallsExpr(*e.else_expr, out);
    }
    void operator()(const CastExpr& e) const { CollectCallsExpr(*e.operand, out); }
    void operator()(const IndexExpr& e) const {
      CollectCallsExpr(*e.base, out);
      CollectCallsExpr(*e.index, out);
    }
    void operator()(const FieldExpr& e) const { CollectCallsExpr(*e.base, out); }
    void operator()(const CallExpr& e) const {
      if (std::find(out->begin(), out->end(), e.callee) == out->end()) {
        out->push_back(e.callee);
      }
      for (const ExprPtr& arg : e.args) CollectCallsExpr(*arg, out);
    }
  };
  std::visit(Visitor{out}, expr.node);
}

void CollectCallsStmt(const Stmt& stmt, std::vector<std::string>* out) {
  struct Visitor {
    std::vector<std::string>* out;
    void operator()(const BlockStmt& s) const {
      for (const StmtPtr& p : s.stmts) CollectCallsStmt(*p, out);
    }
    void operator()(const DeclStmt& s) const {
      if (s.init) CollectCallsExpr(*s.init, out);
    }
    void operator()(const AssignStmt& s) const {
      CollectCallsExpr(*s.target, out);
      CollectCallsExpr(*s.value, out);
    }
    void operator()(const IfStmt& s) const {
      CollectCallsExpr(*s.cond, out);
      CollectCallsStmt(*s.then_stmt, out);
      if (s.else_stmt) CollectCallsStmt(*s.else_stmt, out);
    }
    void operator()(const ForStmt& s) const {
      if (s.init) CollectCallsStmt(*s.init, out);
      CollectCallsExpr(*s.cond, out);
      if (s.step) CollectCallsStmt(*s.step, out);
      CollectCallsStmt(*s.body, out);
    }
    void operator()(const ReturnStmt& s) const {
      CollectCallsExpr(*s.value, out);
    }
  };
  std::visit(Visitor{out}, stmt.node);
}

}  // namespace

std::vector<std::string> DirectCallees(const FuncDecl& func) {
  std::vector<std::string> out;
  CollectCallsStmt(*func.body, &out);
  return out;
}

}  // namespace fhec
