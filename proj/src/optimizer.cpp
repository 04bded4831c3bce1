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

#include "fhec/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fhec {
namespace {

// Incremental rebuild of an IrFunction: old ids map to new ids, literals are
// deduplicated, and outputs are remapped at the end.
class Rewriter {
 public:
  explicit Rewriter(const IrFunction& src) : src_(src) {
    out_.name = src.name;
    out_.inputs = src.inputs;
    map_.assign(src.num_ids(), kUnset);
    for (NodeId id = 0; id < src.inputs.size(); ++id) map_[id] = id;
  }

  NodeId Map(NodeId old_id) const { return map_[old_id]; }
  void Alias(NodeId old_id, NodeId new_id) { map_[old_id] = new_id; }

  NodeId Emit(IrKind kind, uint32_t width, std::vector<NodeId> operands,
              uint64_t literal = 0, uint32_t imm = 0) {
    IrNode node;
    node.id = static_cast<NodeId>(out_.num_ids());
    node.kind = kind;
    node.width = width;
    node.operands = std::move(operands);
    node.literal = literal;
    node.imm = imm;
    out_.nodes.push_back(std::move(node));
    return out_.nodes.back().id;
  }

  NodeId Literal(uint32_t width, uint64_t value) {
    value &= WidthMask(width);
    auto key = std::make_pair(width, value);
    auto it = literals_.find(key);
    if (it != literals_.end()) return it->second;
    NodeId id = Emit(IrKind::kLiteral, width, {}, value);
    literals_.emplace(key, id);
    return id;
  }

  // Constant value of a new id, if statically known.
  std::optional<uint64_t> ValueOf(NodeId new_id) const {
    const IrNode* node = NodeOf(new_id);
    if (node != nullptr && node->kind == IrKind::kLiteral) {
      return node->literal;
    }
    return std::nullopt;
  }

  // Producer node of a new id (nullptr for inputs).
  const IrNode* NodeOf(NodeId new_id) const {
    if (new_id < out_.inputs.size()) return nullptr;
    return &out_.nodes[new_id - out_.inputs.size()];
  }

  uint32_t WidthOf(NodeId new_id) const { return out_.width_of(new_id); }

  IrFunction Finish() {
    for (const IrOutput& o : src_.outputs) {
      out_.outputs.push_back(IrOutput{map_[o.id], o.width});
    }
    return std::move(out_);
  }

 private:
  static constexpr NodeId kUnset = ~NodeId{0};
  const IrFunction& src_;
  IrFunction out_;
  std::vector<NodeId> map_;
  std::map<std::pair<uint32_t, uint64_t>, NodeId> literals_;
};

uint32_t BitWidthOf(uint64_t v) {
  return static_cast<uint32_t>(64 - std::countl_zero(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// Constant folding.

IrFunction ConstantFold(const IrFunction& f) {
  Rewriter rw(f);
  for (const IrNode& node : f.nodes) {
    std::vector<NodeId> ops;
    ops.reserve(node.operands.size());
    for (NodeId op : node.operands) ops.push_back(rw.Map(op));

    if (node.kind == IrKind::kLiteral) {
      rw.Alias(node.id, rw.Literal(node.width, node.literal));
      continue;
    }

    // Fully constant: evaluate now.
    std::vector<uint64_t> values;
    std::vector<uint32_t> widths;
    bool all_const = true;
    for (NodeId op : ops) {
      widths.push_back(rw.WidthOf(op));
      if (auto v = rw.ValueOf(op)) {
        values.push_back(*v);
      } else {
        all_const = false;
        break;
      }
    }
    if (all_const) {
      uint64_t value = EvalNode(node.kind, node.width, widths, values,
                                node.literal, node.imm);
      rw.Alias(node.id, rw.Literal(node.width, value));
      continue;
    }

    const uint32_t w = node.width;
    const uint64_t all_ones = WidthMask(w);
    auto lit_of = [&](size_t i) { return rw.ValueOf(ops[i]); };
    auto is_lit = [&](size_t i, uint64_t v) {
      auto l = lit_of(i);
      return l.has_value() && *l == v;
    };
    std::optional<NodeId> replacement;

    switch (node.kind) {
      case IrKind::kAdd:
        if (is_lit(0, 0)) replacement = ops[1];
        else if (is_lit(1, 0)) replacement = ops[0];
        break;
      case IrKind::kSub:
        if (is_lit(1, 0)) replacement = ops[0];
        else if (ops[0] == ops[1]) replacement = rw.Literal(w, 0);
        break;
      case IrKind::kMul:
        if (is_lit(0, 0) || is_lit(1, 0)) replacement = rw.Literal(w, 0);
        else if (is_lit(0, 1)) replacement = ops[1];
        else if (is_lit(1, 1)) replacement = ops[0];
        break;
      case IrKind::kUDiv:
      case IrKind::kSDiv:
        // x / 0 is all-ones by definition; x / 1 is x (also for signed).
        if (is_lit(1, 0)) replacement = rw.Literal(w, all_ones);
        else if (is_lit(1, 1)) replacement = ops[0];
        break;
      case IrKind::kUMod:
      case IrKind::kSMod:
        // x % 0 is x by definition; x % 1 is 0.
        if (is_lit(1, 0)) replacement = ops[0];
        else if (is_lit(1, 1)) replacement = rw.Literal(w, 0);
        break;
      case IrKind::kAnd:
        if (is_lit(0, 0) || is_lit(1, 0)) replacement = rw.Literal(w, 0);
        else if (is_lit(0, all_ones)) replacement = ops[1];
        else if (is_lit(1, all_ones)) replacement = ops[0];
        else if (ops[0] == ops[1]) replacement = ops[0];
        break;
      case IrKind::kOr:
        if (is_lit(0, all_ones) || is_lit(1, all_ones)) {
          replacement = rw.Literal(w, all_ones);
        } else if (is_lit(0, 0)) replacement = ops[1];
        else if (is_lit(1, 0)) replacement = ops[0];
        else if (ops[0] == ops[1]) replacement = ops[0];
        break;
      case IrKind::kXor:
        if (is_lit(0, 0)) replacement = ops[1];
        else if (is_lit(1, 0)) replacement = ops[0];
        else if (ops[0] == ops[1]) replacement = rw.Literal(w, 0);
        break;
      case IrKind::kNot: {
        const IrNode* producer = rw.NodeOf(ops[0]);
        if (producer != nullptr && producer->kind == IrKind::kNot) {
          replacement = producer->operands[0];
        }
        break;
      }
      case IrKind::kNeg: {
        const IrNode* producer = rw.NodeOf(ops[0]);
        if (producer != nullptr && producer->kind == IrKind::kNeg) {
          replacement = producer->operands[0];
        }
        break;
      }
      case IrKind::kShlConst:
      case IrKind::kShrConst:
        if (node.imm == 0) replacement = ops[0];
        break;
      case IrKind::kEq:
        if (ops[0] == ops[1]) replacement = rw.Literal(1, 1);
        break;
      case IrKind::kNe:
        if (ops[0] == ops[1]) replacement = rw.Literal(1, 0);
        break;
      case IrKind::kULt:
      case IrKind::kSLt:
        if (ops[0] == ops[1]) replacement = rw.Literal(1, 0);
        break;
      case IrKind::kULe:
      case IrKind::kSLe:
        if (ops[0] == ops[1]) replacement = rw.Literal(1, 1);
        break;
      case IrKind::kSelect:
        if (auto c = lit_of(0)) replacement = *c != 0 ? ops[1] : ops[2];
        else if (ops[1] == ops[2]) replacement = ops[1];
        else if (w == 1 && is_lit(1, 1) && is_lit(2, 0)) replacement = ops[0];
        else if (w == 1 && is_lit(1, 0) && is_lit(2, 1)) {
          replacement = rw.Emit(IrKind::kNot, 1, {ops[0]});
        }
        break;
      case IrKind::kConcat:
        if (ops.size() == 1) replacement = ops[0];
        break;
      case IrKind::kSlice: {
        if (node.imm == 0 && w == rw.WidthOf(ops[0])) {
          replacement = ops[0];
          break;
        }
        const IrNode* producer = rw.NodeOf(ops[0]);
        if (producer == nullptr) break;
        if (producer->kind == IrKind::kSlice) {
          replacement = rw.Emit(IrKind::kSlice, w, {producer->operands[0]}, 0,
                                producer->imm + node.imm);
        } else if (producer->kind == IrKind::kZext ||
                   producer->kind == IrKind::kSext) {
          uint32_t inner_w = rw.WidthOf(producer->operands[0]);
          if (node.imm + w <= inner_w) {
            if (node.imm == 0 && w == inner_w) {
              replacement = producer->operands[0];
            } else {
              replacement = rw.Emit(IrKind::kSlice, w,
                                    {producer->operands[0]}, 0, node.imm);
            }
          }
        }
        break;
      }
      case IrKind::kZext:
      case IrKind::kSext: {
        if (w == rw.WidthOf(ops[0])) {
          replacement = ops[0];
          break;
        }
        const IrNode* producer = rw.NodeOf(ops[0]);
        if (producer != nullptr && producer->kind == IrKind::kZext) {
          // zext(zext(x)) and, because the extended bits are zero,
          // sext(zext(x)) both collapse to zext(x).
          replacement =
              rw.Emit(IrKind::kZext, w, {producer->operands[0]});
        } else if (producer != nullptr && producer->kind == IrKind::kSext &&
                   node.kind == IrKind::kSext) {
          replacement =
              rw.Emit(IrKind::kSext, w, {producer->operands[0]});
        }
        break;
      }
      default:
        break;
    }

    if (replacement.has_value()) {
      rw.Alias(node.id, *replacement);
    } else {
      rw.Alias(node.id,
               rw.Emit(node.kind, w, std::move(ops), node.literal, node.imm));
    }
  }
  return rw.Finish();
}

// ---------------------------------------------------------------------------
// Dead node elimination.

IrFunction DeadNodeElimination(const IrFunction& f) {
  std::vector<bool> live(f.num_ids(), false);
  for (const IrOutput& o : f.outputs) live[o.id] = true;
  for (size_t i = f.nodes.size(); i-- > 0;) {
    if (!live[f.nodes[i].id]) continue;
    for (NodeId op : f.nodes[i].operands) live[op] = true;
  }
  Rewriter rw(f);
  for (const IrNode& node : f.nodes) {
    if (!live[node.id]) continue;
    std::vector<NodeId> ops;
    ops.reserve(node.operands.size());
    for (NodeId op : node.operands) ops.push_back(rw.Map(op));
    rw.Alias(node.id, rw.Emit(node.kind, node.width, std::move(ops),
                              node.literal, node.imm));
  }
  return rw.Finish();
}

// ---------------------------------------------------------------------------
// Width narrowing.

namespace {

// High bits of a node's value that are provably zero: the value always fits
// in `pw` bits. 0 means the value is always zero.
std::vector<uint32_t> PossibleWidths(const IrFunction& f) {
  std::vector<uint32_t> pw(f.num_ids(), 0);
  for (NodeId id = 0; id < f.inputs.size(); ++id) pw[id] = f.inputs[id].width;
  for (const IrNode& n : f.nodes) {
    const auto& ops = n.operands;
    auto opw = [&](size_t i) { return f.width_of(ops[i]); };
    uint32_t w = n.width;
    uint32_t r = w;
    switch (n.kind) {
      case IrKind::kLiteral:
        r = BitWidthOf(n.literal);
        break;
      case IrKind::kAdd:
        r = std::min(w, std::max(pw[ops[0]], pw[ops[1]]) + 1);
        break;
      case IrKind::kMul:
        r = std::min(w, pw[ops[0]] + pw[ops[1]]);
        break;
      case IrKind::kUDiv: {
        // Division by zero yields all-ones, so only a provably nonzero
        // literal divisor lets the quotient inherit the dividend's bound.
        const IrNode* b =
            ops[1] < f.inputs.size() ? nullptr : &f.nodes[ops[1] - f.inputs.size()];
        r = (b != nullptr && b->kind == IrKind::kLiteral && b->literal != 0)
                ? pw[ops[0]]
                : w;
        break;
      }
      case IrKind::kUMod:
        // r < b when b != 0, and r == a when b == 0.
        r = std::max(pw[ops[0]], pw[ops[1]]);
        break;
      case IrKind::kAnd:
        r = std::min(pw[ops[0]], pw[ops[1]]);
        break;
      case IrKind::kOr:
      case IrKind::kXor:
        r = std::max(pw[ops[0]], pw[ops[1]]);
        break;
      case IrKind::kNeg:
        r = pw[ops[0]] == 0 ? 0 : w;
        break;
      case IrKind::kShlConst:
        r = std::min(w, pw[ops[0]] == 0 ? 0 : pw[ops[0]] + n.imm);
        break;
      case IrKind::kShrConst:
        r = pw[ops[0]] <= n.imm ? 0 : std::min(pw[ops[0]] - n.imm, w - n.imm);
        break;
      case IrKind::kEq:
      case IrKind::kNe:
      case IrKind::kULt:
      case IrKind::kULe:
      case IrKind::kSLt:
      case IrKind::kSLe:
        r = 1;
        break;
      case IrKind::kSelect:
        r = std::max(pw[ops[1]], pw[ops[2]]);
        break;
      case IrKind::kConcat: {
        uint32_t total = 0;
        r = 0;
        for (size_t i = 0; i < ops.size(); ++i) {
          if (pw[ops[i]] > 0) r = total + pw[ops[i]];
          total += opw(i);
        }
        break;
      }
      case IrKind::kSlice:
        r = pw[ops[0]] <= n.imm ? 0 : std::min(pw[ops[0]] - n.imm, w);
        break;
      case IrKind::kZext:
        r = pw[ops[0]];
        break;
      case IrKind::kSext:
        // If the sign bit is provably zero the extension adds zeros.
        r = pw[ops[0]] < opw(0) ? pw[ops[0]] : w;
        break;
      default:  // SUB, SDIV, SMOD, NOT: no useful bound
        r = w;
        break;
    }
    pw[n.id] = std::min(r, w);
  }
  return pw;
}

// Low bits of each node that some consumer (or output) actually reads.
std::vector<uint32_t> DemandedBits(const IrFunction& f) {
  std::vector<uint32_t> demand(f.num_ids(), 0);
  for (const IrOutput& o : f.outputs) demand[o.id] = o.width;
  for (size_t i = f.nodes.size(); i-- > 0;) {
    const IrNode& n = f.nodes[i];
    const auto& ops = n.operands;
    uint32_t d = demand[n.id];
    auto want = [&](NodeId op, uint32_t bits) {
      demand[op] = std::max(demand[op],
                            std::min(bits, f.width_of(op)));
    };
    switch (n.kind) {
      case IrKind::kLiteral:
        break;
      case IrKind::kAdd:
      case IrKind::kSub:
      case IrKind::kMul:
      case IrKind::kAnd:
      case IrKind::kOr:
      case IrKind::kXor:
        want(ops[0], d);
        want(ops[1], d);
        break;
      case IrKind::kNot:
      case IrKind::kNeg:
        want(ops[0], d);
        break;
      case IrKind::kShlConst:
        want(ops[0], d > n.imm ? d - n.imm : 0);
        break;
      case IrKind::kShrConst:
        want(ops[0], d + n.imm);
        break;
      case IrKind::kSelect:
        want(ops[0], 1);
        want(ops[1], d);
        want(ops[2], d);
        break;
      case IrKind::kConcat: {
        uint32_t off = 0;
        for (NodeId op : ops) {
          uint32_t w = f.width_of(op);
          want(op, d > off ? std::min(d - off, w) : 0);
          off += w;
        }
        break;
      }
      case IrKind::kSlice:
        want(ops[0], n.imm + d);
        break;
      case IrKind::kZext:
      case IrKind::kSext:
        want(ops[0], d);  // capped at the operand width by want()
        break;
      default:
        // Division, modulo and comparisons consume their operands whole.
        for (NodeId op : ops) want(op, f.width_of(op));
        break;
    }
  }
  return demand;
}

bool DemandNarrowable(IrKind kind) {
  switch (kind) {
    case IrKind::kAdd:
    case IrKind::kSub:
    case IrKind::kMul:
    case IrKind::kAnd:
    case IrKind::kOr:
    case IrKind::kXor:
    case IrKind::kNot:
    case IrKind::kNeg:
    case IrKind::kSelect:
    case IrKind::kShlConst:
      return true;
    default:
      return false;
  }
}

bool ZeroHighBits(IrKind kind) {
  // Kinds whose result provably fits PossibleWidths bits, so truncating to
  // that width and zero-extending reproduces the exact value.
  switch (kind) {
    case IrKind::kAdd:
    case IrKind::kMul:
    case IrKind::kAnd:
    case IrKind::kOr:
    case IrKind::kXor:
    case IrKind::kSelect:
    case IrKind::kShlConst:
      return true;
    default:
      return false;
  }
}

}  // namespace

IrFunction WidthNarrowing(const IrFunction& f) {
  const std::vector<uint32_t> pw = PossibleWidths(f);
  const std::vector<uint32_t> demand = DemandedBits(f);
  Rewriter rw(f);

  for (const IrNode& node : f.nodes) {
    std::vector<NodeId> ops;
    ops.reserve(node.operands.size());
    for (NodeId op : node.operands) ops.push_back(rw.Map(op));
    const uint32_t w = node.width;

    // Nothing reads this node, or it is provably zero.
    if (node.kind != IrKind::kLiteral &&
        (demand[node.id] == 0 || pw[node.id] == 0)) {
      rw.Alias(node.id, rw.Literal(w, 0));
      continue;
    }

    // A slice that starts above the value's possible width is zero.
    if (node.kind == IrKind::kSlice && node.imm >= pw[node.operands[0]]) {
      rw.Alias(node.id, rw.Literal(w, 0));
      continue;
    }

    uint32_t target = w;
    if (DemandNarrowable(node.kind)) {
      target = std::min(target, demand[node.id]);
    }
    if (ZeroHighBits(node.kind)) {
      target = std::min(target, pw[node.id]);
    }
    target = std::max(target, 1u);

    if (target >= w) {
      rw.Alias(node.id, rw.Emit(node.kind, w, std::move(ops), node.literal,
                                node.imm));
      continue;
    }

    // Rebuild at the narrow width and zero-extend back; consumers never
    // read (or never see set) the dropped bits.
    auto narrowed = [&](NodeId op) -> NodeId {
      if (rw.WidthOf(op) == target) return op;
      if (auto v = rw.ValueOf(op)) return rw.Literal(target, *v);
      return rw.Emit(IrKind::kSlice, target, {op}, 0, 0);
    };
    NodeId narrow_id;
    switch (node.kind) {
      case IrKind::kSelect:
        narrow_id = rw.Emit(IrKind::kSelect, target,
                            {ops[0], narrowed(ops[1]), narrowed(ops[2])});
        break;
      case IrKind::kShlConst:
        if (node.imm >= target) {
          narrow_id = rw.Literal(target, 0);
        } else {
          narrow_id = rw.Emit(IrKind::kShlConst, target, {narrowed(ops[0])},
                              0, node.imm);
        }
        break;
      case IrKind::kNot:
      case IrKind::kNeg:
        narrow_id = rw.Emit(node.kind, target, {narrowed(ops[0])});
        break;
      default:
        narrow_id = rw.Emit(node.kind, target,
                            {narrowed(ops[0]), narrowed(ops[1])});
        break;
    }
    rw.Alias(node.id, rw.Emit(IrKind::kZext, w, {narrow_id}));
  }
  return rw.Finish();
}

// ---------------------------------------------------------------------------
// Pipeline.

namespace {

IrFunction ApplyPass(std::string_view name, const IrFunction& f) {
  if (name == "fold") return ConstantFold(f);
  if (name == "dce") return DeadNodeElimination(f);
  if (name == "narrow") return WidthNarrowing(f);
  throw std::invalid_argument("unknown pass: " + std::string(name));
}

bool IsKnownPass(std::string_view name) {
  return name == "fold" || name == "dce" || name == "narrow";
}

}  // namespace

PassPipeline::PassPipeline(std::vector<std::string> names, int fixpoint_cap)
    : names_(std::move(names)), fixpoint_cap_(fixpoint_cap) {
  if (fixpoint_cap_ < 1) {
    throw std::invalid_argument("fixpoint cap must be at least 1");
  }
  for (const std::string& name : names_) {
    if (!IsKnownPass(name)) {
      throw std::invalid_argument("unknown pass: " + name);
    }
  }
}

PassPipeline PassPipeline::Default() {
  return PassPipeline({"fold", "dce", "narrow"});
}

PassPipeline PassPipeline::FromCommaList(std::string_view list,
                                         int fixpoint_cap) {
  std::vector<std::string> names;
  size_t start = 0;
  while (start <= list.size() && !list.empty()) {
    size_t comma = list.find(',', start);
    size_t end = comma == std::string_view::npos ? list.size() : comma;
    std::string_view item = list.substr(start, end - start);
    // Trim spaces around each name.
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) names.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return PassPipeline(std::move(names), fixpoint_cap);
}

PipelineResult RunPipeline(const IrFunction& f, const PassPipeline& pipeline) {
  PipelineResult result{f, {}};
  if (pipeline.passes().empty()) {
    result.report.reached_fixpoint = true;
    return result;
  }
  for (int round = 1; round <= pipeline.fixpoint_cap(); ++round) {
    bool changed = false;
    for (const std::string& name : pipeline.passes()) {
      size_t before = result.func.nodes.size();
      IrFunction next = ApplyPass(name, result.func);
      result.report.entries.push_back(
          {name, round, before, next.nodes.size()});
      if (!(next == result.func)) {
        changed = true;
        result.func = std::move(next);
      }
    }
    result.report.rounds = round;
    if (!changed) {
      result.report.reached_fixpoint = true;
      break;
    }
  }
  return result;
}

std::string PassReport::ToText() const {
  std::ostringstream os;
  os << "pass        round   nodes-before   nodes-after\n";
  for (const Entry& e : entries) {
    os << e.pass << std::string(e.pass.size() < 12 ? 12 - e.pass.size() : 1, ' ');
    std::string round = std::to_string(e.round);
    os << round << std::string(round.size() < 8 ? 8 - round.size() : 1, ' ');
    std::string before = std::to_string(e.nodes_before);
    os << before << std::string(before.size() < 15 ? 15 - before.size() : 1, ' ');
    os << e.nodes_after << "\n";
  }
  os << "rounds: " << rounds
     << (reached_fixpoint ? " (fixpoint)" : " (cap reached)") << "\n";
  return os.str();
}

std::string PassReport::ToKeyValueText() const {
  std::ostringstream os;
  os << "rounds=" << rounds << "\n";
  os << "fixpoint=" << (reached_fixpoint ? 1 : 0) << "\n";
  os << "entries=" << entries.size() << "\n";
  for (size_t i = 0; i < entries.size(); ++i) {
    os << "entry." << i << ".pass=" << entries[i].pass << "\n";
    os << "entry." << i << ".round=" << entries[i].round << "\n";
    os << "entry." << i << ".before=" << entries[i].nodes_before << "\n";
    os << "entry." << i << ".after=" << entries[i].nodes_after << "\n";
  }
  return os.str();
}

}  // namespace fhec
