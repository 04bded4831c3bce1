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
//
// Lowering to dataflow IR. Control flow disappears here:
//  - loops unroll over their compile-time iteration values, with the
//    induction variable bound to a fresh literal per iteration;
//  - both sides of an `if` are lowered against copies of the environment
//    and every binding they disagree on is merged with a SELECT;
//  - `return` records (path predicate, value); at the end the records form
//    a select chain in source order, so the first taken return wins;
//  - calls inline the callee body with arguments bound by value.
// Aggregates exist only in the environment: a value is its vector of scalar
// leaves (layout order), and every IR node is a scalar operation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fhec/frontend.hpp"
#include "frontend_internal.hpp"

namespace fhec {
namespace {

struct LimitAbort {
  std::string message;
  std::string code;
};

struct LoweredValue {
  Type type;
  std::vector<NodeId> leaves;  // layout order; scalars have exactly one
};

using Scope = std::unordered_map<std::string, LoweredValue>;

class Lowerer {
 public:
  Lowerer(const Program& program, const LowerOptions& options)
      : program_(program), options_(options) {}

  IrFunction Lower(const FuncDecl& entry) {
    f_.name = entry.name;
    scopes_.emplace_back();
    for (const Param& param : entry.params) {
      Layout layout = DeriveLayout(program_, param.type);
      LoweredValue value{param.type, {}};
      for (const LayoutLeaf& leaf : LayoutLeaves(layout)) {
        NodeId id = static_cast<NodeId>(f_.inputs.size());
        f_.inputs.push_back(IrInput{param.name + leaf.path, leaf.width});
        value.leaves.push_back(id);
      }
      scopes_.back().emplace(param.name, std::move(value));
    }
    LowerStmt(*entry.body);
    LoweredValue result = FinalizeReturns();
    for (NodeId leaf : result.leaves) {
      f_.outputs.push_back(IrOutput{leaf, f_.width_of(leaf)});
    }
    return std::move(f_);
  }

 private:
  // --- IR building -------------------------------------------------------

  NodeId Emit(IrKind kind, uint32_t width, std::vector<NodeId> operands,
              uint64_t literal = 0, uint32_t imm = 0) {
    if (f_.nodes.size() >= options_.node_limit) {
      throw LimitAbort{"circuit exceeds the IR node limit of " +
                           std::to_string(options_.node_limit) +
                           " (deep unrolling or wide aggregates?)",
                       std::string(diag::kNodeLimit)};
    }
    IrNode node;
    node.id = static_cast<NodeId>(f_.num_ids());
    node.kind = kind;
    node.width = width;
    node.operands = std::move(operands);
    node.literal = literal;
    node.imm = imm;
    f_.nodes.push_back(std::move(node));
    return f_.nodes.back().id;
  }

  NodeId Literal(uint32_t width, uint64_t value) {
    value &= WidthMask(width);
    auto key = std::make_pair(width, value);
    auto it = literal_cache_.find(key);
    if (it != literal_cache_.end()) return it->second;
    NodeId id = Emit(IrKind::kLiteral, width, {}, value);
    literal_cache_.emplace(key, id);
    return id;
  }

  uint32_t WidthOf(NodeId id) const { return f_.width_of(id); }

  NodeId And1(NodeId a, NodeId b) { return Emit(IrKind::kAnd, 1, {a, b}); }
  NodeId Not1(NodeId a) { return Emit(IrKind::kNot, 1, {a}); }

  NodeId Select(NodeId cond, NodeId then_id, NodeId else_id) {
    if (then_id == else_id) return then_id;
    return Emit(IrKind::kSelect, WidthOf(then_id), {cond, then_id, else_id});
  }

  LoweredValue SelectValue(NodeId cond, const LoweredValue& t,
                           const LoweredValue& e) {
    LoweredValue out{t.type, {}};
    out.leaves.reserve(t.leaves.size());
    for (size_t i = 0; i < t.leaves.size(); ++i) {
      out.leaves.push_back(Select(cond, t.leaves[i], e.leaves[i]));
    }
    return out;
  }

  LoweredValue ZeroValue(const Type& type) {
    Layout layout = DeriveLayout(program_, type);
    LoweredValue out{type, {}};
    for (const LayoutLeaf& leaf : LayoutLeaves(layout)) {
      out.leaves.push_back(Literal(leaf.width, 0));
    }
    return out;
  }

  // --- Environment ---------------------------------------------------------

  LoweredValue* FindVar(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void SetVar(const std::string& name, LoweredValue value) {
    LoweredValue* slot = FindVar(name);
    if (slot == nullptr) {
      throw std::logic_error("lowering lost track of variable " + name);
    }
    *slot = std::move(value);
  }

  // --- Statements ----------------------------------------------------------

  void LowerStmt(const Stmt& stmt) {
    struct Visitor {
      Lowerer* lo;
      const Stmt& stmt;
      void operator()(const BlockStmt& s) {
        lo->scopes_.emplace_back();
        for (const StmtPtr& p : s.stmts) lo->LowerStmt(*p);
        lo->scopes_.pop_back();
      }
      void operator()(const DeclStmt& s) {
        LoweredValue v = s.init != nullptr ? lo->LowerExpr(*s.init)
                                           : lo->ZeroValue(s.type);
        lo->scopes_.back().emplace(s.name, std::move(v));
      }
      void operator()(const AssignStmt& s) { lo->LowerAssign(s); }
      void operator()(const IfStmt& s) { lo->LowerIf(s); }
      void operator()(const ForStmt& s) { lo->LowerFor(s, stmt.span); }
      void operator()(const ReturnStmt& s) {
        if (lo->done_) return;
        LoweredValue v = lo->LowerExpr(*s.value);
        if (!lo->pred_.has_value()) lo->done_ = true;
        lo->returns_.emplace_back(lo->pred_, std::move(v));
      }
    };
    std::visit(Visitor{this, stmt}, stmt.node);
  }

  void LowerAssign(const AssignStmt& s) {
    LoweredValue value;
    if (s.op.has_value()) {
      LoweredValue lhs = LowerExpr(*s.target);
      value = LowerBinOp(*s.op, lhs, *s.target, *s.value, s.target->type);
    } else {
      value = LowerExpr(*s.value);
    }
    WriteLValue(*s.target, std::move(value));
  }

  void LowerIf(const IfStmt& s) {
    NodeId cond = LowerExpr(*s.cond).leaves[0];
    std::optional<NodeId> saved_pred = pred_;
    std::vector<Scope> base = scopes_;

    pred_ = saved_pred.has_value() ? And1(*saved_pred, cond) : cond;
    LowerStmt(*s.then_stmt);
    std::vector<Scope> then_scopes = std::exchange(scopes_, std::move(base));

    if (s.else_stmt != nullptr) {
      NodeId not_cond = Not1(cond);
      pred_ = saved_pred.has_value() ? And1(*saved_pred, not_cond) : not_cond;
      LowerStmt(*s.else_stmt);
    }
    pred_ = saved_pred;

    // scopes_ now holds the else-state (or the pre-state when there is no
    // else); fold the then-state in with selects where bindings disagree.
    for (size_t i = 0; i < scopes_.size(); ++i) {
      for (auto& [name, else_value] : scopes_[i]) {
        const LoweredValue& then_value = then_scopes[i].at(name);
        if (then_value.leaves != else_value.leaves) {
          else_value = SelectValue(cond, then_value, else_value);
        }
      }
    }
  }

  void LowerFor(const ForStmt& s, const SourceSpan& span) {
    auto analyzed = AnalyzeLoop(s, span, MaxTripCount());
    if (auto* d = std::get_if<Diagnostic>(&analyzed)) {
      // CheckRestrictions reports this before lowering runs; reaching this
      // point means the caller skipped it.
      throw LimitAbort{d->message, d->code};
    }
    const LoopPlan& plan = std::get<LoopPlan>(analyzed);
    scopes_.emplace_back();
    if (plan.declares_var) {
      scopes_.back().emplace(
          plan.var, LoweredValue{plan.var_type,
                                 {Literal(plan.var_type.width, 0)}});
    }
    for (uint64_t v : plan.values) {
      SetVar(plan.var,
             LoweredValue{plan.var_type, {Literal(plan.var_type.width, v)}});
      scopes_.emplace_back();
      LowerStmt(*s.body);
      scopes_.pop_back();
    }
    scopes_.pop_back();
    if (!plan.declares_var) {
      SetVar(plan.var, LoweredValue{plan.var_type,
                                    {Literal(plan.var_type.width,
                                             plan.exit_value)}});
    }
  }

  uint64_t MaxTripCount() const {
    return std::min<uint64_t>(kDefaultMaxTripCount, options_.node_limit);
  }

  LoweredValue FinalizeReturns() {
    if (returns_.empty()) {
      throw std::logic_error("lowering reached the end of a function without "
                             "a return");
    }
    // The checker proved some return always fires, so if none of the earlier
    // predicates held the last recorded return must have; its predicate can
    // be dropped and its value used as the chain default.
    LoweredValue acc = std::move(returns_.back().second);
    for (size_t i = returns_.size() - 1; i-- > 0;) {
      acc = SelectValue(*returns_[i].first, returns_[i].second, acc);
    }
    return acc;
  }

  // --- LValues -------------------------------------------------------------

  // Offset (in leaves) and leaf count of field `name` within struct type.
  std::pair<size_t, size_t> FieldLeafRange(const Type& type,
                                           const std::string& name) {
    const StructDecl* decl = program_.FindStruct(type.struct_name);
    size_t offset = 0;
    for (const auto& [fname, ftype] : decl->fields) {
      size_t count = LeafCount(ftype);
      if (fname == name) return {offset, count};
      offset += count;
    }
    throw std::logic_error("lowering lost field " + name);
  }

  size_t LeafCount(const Type& type) {
    return LayoutLeaves(DeriveLayout(program_, type)).size();
  }

  // Elements a dynamic index of width `w` can actually address.
  static uint64_t AddressableElems(uint64_t length, uint32_t w) {
    if (w >= 32) return length;
    return std::min<uint64_t>(length, uint64_t{1} << w);
  }

  void WriteLValue(const Expr& lvalue, LoweredValue value) {
    if (const auto* var = std::get_if<VarRef>(&lvalue.node)) {
      SetVar(var->name, std::move(value));
      return;
    }
    if (const auto* fld = std::get_if<FieldExpr>(&lvalue.node)) {
      LoweredValue base = LowerExpr(*fld->base);
      auto [offset, count] = FieldLeafRange(fld->base->type, fld->field);
      std::copy(value.leaves.begin(), value.leaves.end(),
                base.leaves.begin() + offset);
      WriteLValue(*fld->base, std::move(base));
      return;
    }
    const auto& idx = std::get<IndexExpr>(lvalue.node);
    LoweredValue base = LowerExpr(*idx.base);
    const Type& elem_type = *idx.base->type.elem;
    const size_t stride = LeafCount(elem_type);
    auto const_index = ConstEval(*idx.index);
    if (const_index.has_value()) {
      std::copy(value.leaves.begin(), value.leaves.end(),
                base.leaves.begin() + *const_index * stride);
    } else {
      // Writes through a dynamic index keep every element it cannot name;
      // an out-of-range index writes nothing.
      NodeId index = LowerExpr(*idx.index).leaves[0];
      uint32_t iw = WidthOf(index);
      uint64_t limit = AddressableElems(idx.base->type.length, iw);
      for (uint64_t k = 0; k < limit; ++k) {
        NodeId hit = Emit(IrKind::kEq, 1, {index, Literal(iw, k)});
        for (size_t j = 0; j < stride; ++j) {
          NodeId& slot = base.leaves[k * stride + j];
          slot = Select(hit, value.leaves[j], slot);
        }
      }
    }
    WriteLValue(*idx.base, std::move(base));
  }

  // --- Expressions -----------------------------------------------------

  LoweredValue LowerExpr(const Expr& e) {
    struct Visitor {
      Lowerer* lo;
      const Expr& e;
      LoweredValue operator()(const IntLit& lit) {
        uint32_t w = e.type.scalar_width();
        return {e.type, {lo->Literal(w, lit.value)}};
      }
      LoweredValue operator()(const BoolLit& lit) {
        return {e.type, {lo->Literal(1, lit.value ? 1 : 0)}};
      }
      LoweredValue operator()(const VarRef& v) {
        LoweredValue* value = lo->FindVar(v.name);
        if (value == nullptr) {
          throw std::logic_error("lowering lost variable " + v.name);
        }
        return *value;
      }
      LoweredValue operator()(const UnaryExpr& u) {
        LoweredValue operand = lo->LowerExpr(*u.operand);
        uint32_t w = lo->WidthOf(operand.leaves[0]);
        switch (u.op) {
          case UnOp::kNeg:
            return {e.type,
                    {lo->Emit(IrKind::kNeg, w, {operand.leaves[0]})}};
          case UnOp::kBitNot:
          case UnOp::kLogNot:
            return {e.type,
                    {lo->Emit(IrKind::kNot, w, {operand.leaves[0]})}};
        }
        throw std::logic_error("unhandled unary operator");
      }
      LoweredValue operator()(const BinaryExpr& b) {
        LoweredValue lhs = lo->LowerExpr(*b.lhs);
        return lo->LowerBinOp(b.op, lhs, *b.lhs, *b.rhs, e.type);
      }
      LoweredValue operator()(const TernaryExpr& t) {
        NodeId cond = lo->LowerExpr(*t.cond).leaves[0];
        LoweredValue tv = lo->LowerExpr(*t.then_expr);
        LoweredValue ev = lo->LowerExpr(*t.else_expr);
        return lo->SelectValue(cond, tv, ev);
      }
      LoweredValue operator()(const CastExpr& cast) {
        LoweredValue operand = lo->LowerExpr(*cast.operand);
        return {e.type, {lo->LowerCast(operand.leaves[0],
                                       cast.operand->type, cast.target)}};
      }
      LoweredValue operator()(const IndexExpr& idx) {
        LoweredValue base = lo->LowerExpr(*idx.base);
        const Type& elem_type = *idx.base->type.elem;
        const size_t stride = lo->LeafCount(elem_type);
        auto elem_at = [&](uint64_t k) {
          LoweredValue out{elem_type, {}};
          out.leaves.assign(base.leaves.begin() + k * stride,
                            base.leaves.begin() + (k + 1) * stride);
          return out;
        };
        auto const_index = ConstEval(*idx.index);
        if (const_index.has_value()) return elem_at(*const_index);
        // Dynamic read: a chain of selects keyed on index equality; an
        // out-of-range index yields the zero element.
        NodeId index = lo->LowerExpr(*idx.index).leaves[0];
        uint32_t iw = lo->WidthOf(index);
        uint64_t limit = AddressableElems(idx.base->type.length, iw);
        LoweredValue acc = lo->ZeroValue(elem_type);
        for (uint64_t k = 0; k < limit; ++k) {
          NodeId hit = lo->Emit(IrKind::kEq, 1, {index, lo->Literal(iw, k)});
          acc = lo->SelectValue(hit, elem_at(k), acc);
        }
        return acc;
      }
      LoweredValue operator()(const FieldExpr& fld) {
        LoweredValue base = lo->LowerExpr(*fld.base);
        auto [offset, count] =
            lo->FieldLeafRange(fld.base->type, fld.field);
        LoweredValue out{e.type, {}};
        out.leaves.assign(base.leaves.begin() + offset,
                          base.leaves.begin() + offset + count);
        return out;
      }
      LoweredValue operator()(const CallExpr& call) {
        return lo->InlineCall(call);
      }
    };
    return std::visit(Visitor{this, e}, e.node);
  }

  NodeId LowerCast(NodeId value, const Type& from, const Type& to) {
    uint32_t fw = from.scalar_width();
    uint32_t tw = to.scalar_width();
    if (to.kind == Type::Kind::kBool && from.kind != Type::Kind::kBool) {
      return Emit(IrKind::kNe, 1, {value, Literal(fw, 0)});
    }
    if (tw == fw) return value;
    if (tw < fw) return Emit(IrKind::kSlice, tw, {value}, 0, 0);
    return Emit(from.is_signed() ? IrKind::kSext : IrKind::kZext, tw, {value});
  }

  LoweredValue LowerBinOp(BinOp op, const LoweredValue& lhs,
                          const Expr& lhs_expr, const Expr& rhs_expr,
                          const Type& result_type) {
    const bool is_signed = lhs_expr.type.is_signed();
    NodeId a = lhs.leaves[0];

    // Shifts take their amount from the constant expression, not a node.
    if (op == BinOp::kShl || op == BinOp::kShr) {
      uint64_t amount = *ConstEval(rhs_expr);
      uint32_t w = WidthOf(a);
      return {result_type, {LowerShift(op, a, w, amount, is_signed)}};
    }

    NodeId b = LowerExpr(rhs_expr).leaves[0];
    uint32_t w = WidthOf(a);
    auto bin = [&](IrKind kind, uint32_t width) {
      return LoweredValue{result_type, {Emit(kind, width, {a, b})}};
    };
    switch (op) {
      case BinOp::kAdd: return bin(IrKind::kAdd, w);
      case BinOp::kSub: return bin(IrKind::kSub, w);
      case BinOp::kMul: return bin(IrKind::kMul, w);
      case BinOp::kDiv:
        return bin(is_signed ? IrKind::kSDiv : IrKind::kUDiv, w);
      case BinOp::kMod:
        return bin(is_signed ? IrKind::kSMod : IrKind::kUMod, w);
      case BinOp::kBitAnd:
      case BinOp::kLogAnd: return bin(IrKind::kAnd, w);
      case BinOp::kBitOr:
      case BinOp::kLogOr: return bin(IrKind::kOr, w);
      case BinOp::kBitXor: return bin(IrKind::kXor, w);
      case BinOp::kEq: return bin(IrKind::kEq, 1);
      case BinOp::kNe: return bin(IrKind::kNe, 1);
      case BinOp::kLt: return bin(is_signed ? IrKind::kSLt : IrKind::kULt, 1);
      case BinOp::kLe: return bin(is_signed ? IrKind::kSLe : IrKind::kULe, 1);
      case BinOp::kGt:
        std::swap(a, b);
        return bin(is_signed ? IrKind::kSLt : IrKind::kULt, 1);
      case BinOp::kGe:
        std::swap(a, b);
        return bin(is_signed ? IrKind::kSLe : IrKind::kULe, 1);
      case BinOp::kShl:
      case BinOp::kShr: break;
    }
    throw std::logic_error("unhandled binary operator");
  }

  NodeId LowerShift(BinOp op, NodeId value, uint32_t w, uint64_t amount,
                    bool is_signed) {
    if (amount == 0) return value;
    if (op == BinOp::kShl) {
      if (amount >= w) return Literal(w, 0);
      return Emit(IrKind::kShlConst, w, {value}, 0,
                  static_cast<uint32_t>(amount));
    }
    if (!is_signed) {
      if (amount >= w) return Literal(w, 0);
      return Emit(IrKind::kShrConst, w, {value}, 0,
                  static_cast<uint32_t>(amount));
    }
    // Arithmetic shift: slice off the low bits and sign-extend back. Once
    // the amount covers the whole width only the sign bit remains.
    if (w == 1) return value;
    if (amount >= w) {
      NodeId sign = Emit(IrKind::kSlice, 1, {value}, 0, w - 1);
      return Emit(IrKind::kSext, w, {sign});
    }
    NodeId high = Emit(IrKind::kSlice, static_cast<uint32_t>(w - amount),
                       {value}, 0, static_cast<uint32_t>(amount));
    return Emit(IrKind::kSext, w, {high});
  }

  LoweredValue InlineCall(const CallExpr& call) {
    const FuncDecl* callee = program_.FindFunction(call.callee);
    if (callee == nullptr) {
      throw std::logic_error("lowering lost function " + call.callee);
    }
    if (inline_depth_ >= kMaxInlineDepth) {
      throw LimitAbort{"call depth exceeds " +
                           std::to_string(kMaxInlineDepth) +
                           " during inlining",
                       std::string(diag::kRecursion)};
    }
    std::vector<LoweredValue> args;
    args.reserve(call.args.size());
    for (const ExprPtr& arg : call.args) args.push_back(LowerExpr(*arg));

    // The callee runs in a fresh frame: its own scopes and its own return
    // chain. Its selects depend only on dataflow, so the caller's path
    // predicate is irrelevant inside.
    std::vector<Scope> saved_scopes = std::move(scopes_);
    std::optional<NodeId> saved_pred = std::exchange(pred_, std::nullopt);
    auto saved_returns = std::move(returns_);
    bool saved_done = std::exchange(done_, false);
    ++inline_depth_;

    scopes_.clear();
    scopes_.emplace_back();
    returns_.clear();
    for (size_t i = 0; i < callee->params.size(); ++i) {
      scopes_.back().emplace(callee->params[i].name, std::move(args[i]));
    }
    LowerStmt(*callee->body);
    LoweredValue result = FinalizeReturns();

    --inline_depth_;
    scopes_ = std::move(saved_scopes);
    pred_ = saved_pred;
    returns_ = std::move(saved_returns);
    done_ = saved_done;
    return result;
  }

  static constexpr int kMaxInlineDepth = 128;

  const Program& program_;
  const LowerOptions& options_;
  IrFunction f_;
  std::map<std::pair<uint32_t, uint64_t>, NodeId> literal_cache_;
  std::vector<Scope> scopes_;
  std::optional<NodeId> pred_;
  std::vector<std::pair<std::optional<NodeId>, LoweredValue>> returns_;
  bool done_ = false;
  int inline_depth_ = 0;
};

}  // namespace

LowerResult LowerToIr(const Program& program, std::string_view entry,
                      const LowerOptions& options) {
  LowerResult result;
  const FuncDecl* fn = program.FindFunction(entry);
  if (fn == nullptr) {
    result.diagnostics.push_back(
        {Severity::kError, SourceSpan{}, std::string(diag::kEntryNotFound),
         "entry function '" + std::string(entry) + "' not found"});
    return result;
  }
  try {
    Lowerer lowerer(program, options);
    IrFunction f = lowerer.Lower(*fn);
    std::vector<IrViolation> violations = Validate(f);
    if (!violations.empty()) {
      throw std::logic_error("lowering produced invalid IR: " +
                             violations.front().message);
    }
    result.func = std::move(f);
  } catch (const LimitAbort& abort) {
    result.diagnostics.push_back(
        {Severity::kError, fn->span, abort.code, abort.message});
  }
  return result;
}

}  // namespace fhec
