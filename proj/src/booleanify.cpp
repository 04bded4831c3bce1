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

#include "fhec/booleanify.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fhec/gates.hpp"
#include "fhec/ir.hpp"

namespace fhec {
namespace {

using BitVec = std::vector<WireId>;

class Booleanifier {
 public:
  explicit Booleanifier(const IrFunction& f) : f_(f) {}

  GateCircuit Run() {
    c_.name = f_.name;
    base_ = 0;
    for (const IrInput& in : f_.inputs) {
      WireGroup g;
      g.name = in.name;
      for (uint32_t b = 0; b < in.width; ++b) g.wires.push_back(base_++);
      c_.inputs.push_back(std::move(g));
      bits_.push_back(c_.inputs.back().wires);
    }
    for (const IrNode& n : f_.nodes) bits_.push_back(LowerNode(n));
    for (size_t i = 0; i < f_.outputs.size(); ++i) {
      WireGroup g;
      g.name = f_.outputs.size() == 1 ? "out" : "out" + std::to_string(i);
      g.wires = bits_[f_.outputs[i].id];
      c_.outputs.push_back(std::move(g));
    }
    return std::move(c_);
  }

 private:
  WireId Emit(GateKind kind, WireId a = 0, WireId b = 0, WireId s = 0) {
    c_.gates.push_back(Gate{kind, {a, b, s}});
    return base_ + static_cast<WireId>(c_.gates.size()) - 1;
  }
  WireId Const(bool one) {
    std::optional<WireId>& slot = const_wire_[one ? 1 : 0];
    if (!slot) slot = Emit(one ? GateKind::kConst1 : GateKind::kConst0);
    return *slot;
  }
  WireId And(WireId a, WireId b) { return Emit(GateKind::kAnd, a, b); }
  WireId Or(WireId a, WireId b) { return Emit(GateKind::kOr, a, b); }
  WireId Xor(WireId a, WireId b) { return Emit(GateKind::kXor, a, b); }
  WireId Not(WireId a) { return Emit(GateKind::kNot, a); }
  WireId Mux(WireId s, WireId t, WireId e) {
    return Emit(GateKind::kMux, s, t, e);
  }

  BitVec ConstBits(uint64_t value, uint32_t width) {
    BitVec out;
    for (uint32_t i = 0; i < width; ++i) out.push_back(Const((value >> i) & 1));
    return out;
  }
  BitVec NotBits(const BitVec& a) {
    BitVec out;
    for (WireId w : a) out.push_back(Not(w));
    return out;
  }
  BitVec MuxBits(WireId s, const BitVec& t, const BitVec& e) {
    BitVec out;
    for (size_t i = 0; i < t.size(); ++i) out.push_back(Mux(s, t[i], e[i]));
    return out;
  }

  struct AddOut {
    BitVec sum;
    WireId carry;
  };

  // Ripple-carry adder, five gates per bit in a fixed order.
  AddOut RippleAdd(const BitVec& a, const BitVec& b, WireId carry_in) {
    AddOut out;
    WireId carry = carry_in;
    for (size_t i = 0; i < a.size(); ++i) {
      WireId t = Xor(a[i], b[i]);
      out.sum.push_back(Xor(t, carry));
      WireId u = And(carry, t);
      WireId v = And(a[i], b[i]);
      carry = Or(v, u);
    }
    out.carry = carry;
    return out;
  }

  // a - b as a + ~b + 1; carry out is 1 iff a >= b (no borrow).
  AddOut SubWithCarry(const BitVec& a, const BitVec& b) {
    return RippleAdd(a, NotBits(b), Const(true));
  }

  // Two's-complement negation: invert, then ripple an increment through.
  BitVec NegBits(const BitVec& a) {
    BitVec nb = NotBits(a);
    BitVec out;
    WireId carry = Const(true);
    for (size_t i = 0; i < nb.size(); ++i) {
      out.push_back(Xor(nb[i], carry));
      if (i + 1 < nb.size()) carry = And(nb[i], carry);
    }
    return out;
  }

  // Balanced OR reduction; the empty vector reduces to constant zero.
  WireId OrTree(BitVec v) {
    if (v.empty()) return Const(false);
    while (v.size() > 1) {
      BitVec next;
      for (size_t i = 0; i + 1 < v.size(); i += 2) {
        next.push_back(Or(v[i], v[i + 1]));
      }
      if (v.size() % 2) next.push_back(v.back());
      v = std::move(next);
    }
    return v[0];
  }
  WireId IsZero(const BitVec& a) { return Not(OrTree(a)); }

  // Schoolbook multiplication with rows truncated to the result width.
  BitVec Mul(const BitVec& a, const BitVec& b) {
    const size_t n = a.size();
    BitVec acc;
    for (size_t i = 0; i < n; ++i) acc.push_back(And(a[i], b[0]));
    for (size_t j = 1; j < n; ++j) {
      BitVec row;
      for (size_t i = 0; i + j < n; ++i) row.push_back(And(a[i], b[j]));
      BitVec hi(acc.begin() + static_cast<ptrdiff_t>(j), acc.end());
      BitVec sum = RippleAdd(hi, row, Const(false)).sum;
      for (size_t i = 0; i < sum.size(); ++i) acc[j + i] = sum[i];
    }
    return acc;
  }

  struct DivOut {
    BitVec quotient;
    BitVec remainder;
  };

  // Restoring division over an (n+1)-bit partial remainder. A zero divisor
  // makes every trial subtraction succeed, which yields an all-ones quotient
  // and leaves the dividend as the remainder - exactly the IR's x/0 and x%0
  // conventions, so no special casing is needed here.
  DivOut UDivCore(const BitVec& a, const BitVec& b) {
    const size_t n = a.size();
    BitVec nb = NotBits(b);
    nb.push_back(Const(true));  // complement of the divisor's zero high bit
    BitVec r(n + 1, Const(false));
    BitVec q(n, 0);
    for (size_t step = 0; step < n; ++step) {
      const size_t i = n - 1 - step;
      BitVec shifted;
      shifted.push_back(a[i]);  // r = 2r + a_i; the old top bit is always 0
      for (size_t j = 0; j + 1 < r.size(); ++j) shifted.push_back(r[j]);
      AddOut sub = RippleAdd(shifted, nb, Const(true));
      q[i] = sub.carry;
      r = MuxBits(sub.carry, sub.sum, shifted);
    }
    return {std::move(q),
            BitVec(r.begin(), r.begin() + static_cast<ptrdiff_t>(n))};
  }

  // Signed division via magnitudes. The remainder takes the dividend's sign;
  // the quotient's sign is the XOR of the operand signs, with the zero-divisor
  // all-ones convention patched in last.
  BitVec SignedDiv(const BitVec& a, const BitVec& b, bool want_mod) {
    WireId sa = a.back();
    WireId sb = b.back();
    BitVec abs_a = MuxBits(sa, NegBits(a), a);
    BitVec abs_b = MuxBits(sb, NegBits(b), b);
    DivOut dv = UDivCore(abs_a, abs_b);
    if (want_mod) return MuxBits(sa, NegBits(dv.remainder), dv.remainder);
    WireId sign = Xor(sa, sb);
    BitVec q = MuxBits(sign, NegBits(dv.quotient), dv.quotient);
    WireId bz = IsZero(b);
    BitVec ones(a.size(), Const(true));
    return MuxBits(bz, ones, q);
  }

  // a >= b, as the carry out of a - b.
  WireId CarryGeq(const BitVec& a, const BitVec& b) {
    return SubWithCarry(a, b).carry;
  }
  // Signed comparisons reuse the unsigned ones with both sign bits flipped.
  BitVec FlipTop(const BitVec& a) {
    BitVec out = a;
    out.back() = Not(out.back());
    return out;
  }

  BitVec PerBit(GateKind kind, const BitVec& a, const BitVec& b) {
    BitVec out;
    for (size_t i = 0; i < a.size(); ++i) out.push_back(Emit(kind, a[i], b[i]));
    return out;
  }

  BitVec LowerNode(const IrNode& n) {
    auto op = [&](size_t i) -> const BitVec& { return bits_[n.operands[i]]; };
    switch (n.kind) {
      case IrKind::kLiteral:
        return ConstBits(n.literal, n.width);
      case IrKind::kAdd:
        return RippleAdd(op(0), op(1), Const(false)).sum;
      case IrKind::kSub:
        return SubWithCarry(op(0), op(1)).sum;
      case IrKind::kMul:
        return Mul(op(0), op(1));
      case IrKind::kUDiv:
        return UDivCore(op(0), op(1)).quotient;
      case IrKind::kUMod:
        return UDivCore(op(0), op(1)).remainder;
      case IrKind::kSDiv:
        return SignedDiv(op(0), op(1), /*want_mod=*/false);
      case IrKind::kSMod:
        return SignedDiv(op(0), op(1), /*want_mod=*/true);
      case IrKind::kAnd:
        return PerBit(GateKind::kAnd, op(0), op(1));
      case IrKind::kOr:
        return PerBit(GateKind::kOr, op(0), op(1));
      case IrKind::kXor:
        return PerBit(GateKind::kXor, op(0), op(1));
      case IrKind::kNot:
        return NotBits(op(0));
      case IrKind::kShlConst: {
        const BitVec& a = op(0);
        BitVec out;
        for (uint32_t i = 0; i < n.imm && i < n.width; ++i) {
          out.push_back(Const(false));
        }
        for (size_t i = 0; out.size() < n.width; ++i) out.push_back(a[i]);
        return out;
      }
      case IrKind::kShrConst: {
        const BitVec& a = op(0);
        BitVec out;
        for (size_t i = n.imm; i < a.size(); ++i) out.push_back(a[i]);
        while (out.size() < n.width) out.push_back(Const(false));
        return out;
      }
      case IrKind::kEq:
        return {IsZero(PerBit(GateKind::kXor, op(0), op(1)))};
      case IrKind::kNe:
        return {OrTree(PerBit(GateKind::kXor, op(0), op(1)))};
      case IrKind::kULt:
        return {Not(CarryGeq(op(0), op(1)))};
      case IrKind::kULe:
        return {CarryGeq(op(1), op(0))};
      case IrKind::kSLt:
        return {Not(CarryGeq(FlipTop(op(0)), FlipTop(op(1))))};
      case IrKind::kSLe:
        return {CarryGeq(FlipTop(op(1)), FlipTop(op(0)))};
      case IrKind::kNeg:
        return NegBits(op(0));
      case IrKind::kSelect:
        return MuxBits(op(0)[0], op(1), op(2));
      case IrKind::kConcat: {
        BitVec out;
        for (NodeId o : n.operands) {
          for (WireId w : bits_[o]) out.push_back(w);
        }
        return out;
      }
      case IrKind::kSlice: {
        const BitVec& a = op(0);
        return BitVec(a.begin() + static_cast<ptrdiff_t>(n.imm),
                      a.begin() + static_cast<ptrdiff_t>(n.imm + n.width));
      }
      case IrKind::kZext: {
        BitVec out = op(0);
        while (out.size() < n.width) out.push_back(Const(false));
        return out;
      }
      case IrKind::kSext: {
        BitVec out = op(0);
        while (out.size() < n.width) out.push_back(out[op(0).size() - 1]);
        return out;
      }
    }
    throw std::logic_error("unhandled IR kind in booleanifier");
  }

  const IrFunction& f_;
  GateCircuit c_;
  WireId base_ = 0;
  std::vector<BitVec> bits_;
  std::array<std::optional<WireId>, 2> const_wire_;
};

}  // namespace

GateCircuit Booleanify(const IrFunction& f) {
  if (!IsValid(f)) {
    throw std::invalid_argument("Booleanify requires a valid IR function");
  }
  return Booleanifier(f).Run();
}

namespace {

// Lattice value for the simplifier: a known constant or an existing wire in
// the rebuilt circuit.
struct OptVal {
  enum Tag { kWire, kZero, kOne };
  Tag tag = kWire;
  WireId wire = 0;
};

bool IsConst(const OptVal& v) { return v.tag != OptVal::kWire; }
bool IsConst(const OptVal& v, bool one) {
  return v.tag == (one ? OptVal::kOne : OptVal::kZero);
}
bool SameVal(const OptVal& a, const OptVal& b) {
  return a.tag == b.tag && (a.tag != OptVal::kWire || a.wire == b.wire);
}
OptVal ConstVal(bool one) {
  return {one ? OptVal::kOne : OptVal::kZero, 0};
}

class GateSimplifier {
 public:
  explicit GateSimplifier(const GateCircuit& in) : in_(in) {}

  GateCircuit Run() {
    // First pass materializes constants lazily, which leaves their position
    // dependent on which consumer happened to ask first. Rerun with the
    // surviving constants pinned to the front so the result is a fixpoint of
    // the simplifier (and stable under re-optimization).
    GateCircuit out = RunOnce(false, false);
    bool need0 = false;
    bool need1 = false;
    for (const Gate& g : out.gates) {
      need0 |= g.kind == GateKind::kConst0;
      need1 |= g.kind == GateKind::kConst1;
    }
    if (!need0 && !need1) return out;
    return RunOnce(need0, need1);
  }

 private:
  GateCircuit RunOnce(bool pin_const0, bool pin_const1) {
    gates_.clear();
    const_wire_ = {std::nullopt, std::nullopt};
    const uint32_t base = in_.num_input_wires();
    base_ = base;
    if (pin_const0) const_wire_[0] = EmitGate(GateKind::kConst0);
    if (pin_const1) const_wire_[1] = EmitGate(GateKind::kConst1);
    std::vector<OptVal> val(in_.num_wires());
    for (WireId w = 0; w < base; ++w) val[w] = {OptVal::kWire, w};
    for (size_t i = 0; i < in_.gates.size(); ++i) {
      val[base + i] = SimplifyGate(in_.gates[i], val);
    }

    GateCircuit out;
    out.name = in_.name;
    out.inputs = in_.inputs;
    for (const WireGroup& g : in_.outputs) {
      WireGroup ng;
      ng.name = g.name;
      for (WireId w : g.wires) ng.wires.push_back(Materialize(val[w]));
      out.outputs.push_back(std::move(ng));
    }
    out.gates = gates_;  // after Materialize has appended any constants
    return RemoveDeadGates(out);
  }
  WireId EmitGate(GateKind kind, WireId a = 0, WireId b = 0, WireId s = 0) {
    gates_.push_back(Gate{kind, {a, b, s}});
    return base_ + static_cast<WireId>(gates_.size()) - 1;
  }
  WireId Materialize(const OptVal& v) {
    if (v.tag == OptVal::kWire) return v.wire;
    const bool one = v.tag == OptVal::kOne;
    std::optional<WireId>& slot = const_wire_[one ? 1 : 0];
    if (!slot) slot = EmitGate(one ? GateKind::kConst1 : GateKind::kConst0);
    return *slot;
  }
  // NOT with constant folding and double-negation collapsing.
  OptVal MakeNot(const OptVal& v) {
    if (IsConst(v)) return ConstVal(v.tag == OptVal::kZero);
    if (v.wire >= base_) {
      const Gate& g = gates_[v.wire - base_];
      if (g.kind == GateKind::kNot) return {OptVal::kWire, g.operands[0]};
    }
    return {OptVal::kWire, EmitGate(GateKind::kNot, v.wire)};
  }

  OptVal SimplifyGate(const Gate& g, const std::vector<OptVal>& val) {
    auto wire = [&](int k) { return val[g.operands[k]]; };
    switch (g.kind) {
      case GateKind::kConst0:
        return ConstVal(false);
      case GateKind::kConst1:
        return ConstVal(true);
      case GateKind::kCopy:
        return wire(0);
      case GateKind::kNot:
        return MakeNot(wire(0));
      case GateKind::kAnd: {
        OptVal a = wire(0), b = wire(1);
        if (IsConst(a, false) || IsConst(b, false)) return ConstVal(false);
        if (IsConst(a, true)) return b;
        if (IsConst(b, true)) return a;
        if (SameVal(a, b)) return a;
        return {OptVal::kWire, EmitGate(GateKind::kAnd, a.wire, b.wire)};
      }
      case GateKind::kOr: {
        OptVal a = wire(0), b = wire(1);
        if (IsConst(a, true) || IsConst(b, true)) return ConstVal(true);
        if (IsConst(a, false)) return b;
        if (IsConst(b, false)) return a;
        if (SameVal(a, b)) return a;
        return {OptVal::kWire, EmitGate(GateKind::kOr, a.wire, b.wire)};
      }
      case GateKind::kXor: {
        OptVal a = wire(0), b = wire(1);
        if (IsConst(a) && IsConst(b)) {
          return ConstVal((a.tag == OptVal::kOne) != (b.tag == OptVal::kOne));
        }
        if (SameVal(a, b)) return ConstVal(false);
        if (IsConst(a, false)) return b;
        if (IsConst(b, false)) return a;
        if (IsConst(a, true)) return MakeNot(b);
        if (IsConst(b, true)) return MakeNot(a);
        return {OptVal::kWire, EmitGate(GateKind::kXor, a.wire, b.wire)};
      }
      case GateKind::kMux: {
        OptVal s = wire(0), t = wire(1), e = wire(2);
        if (IsConst(s)) return s.tag == OptVal::kOne ? t : e;
        if (SameVal(t, e)) return t;
        if (IsConst(t, true) && IsConst(e, false)) return s;
        if (IsConst(t, false) && IsConst(e, true)) return MakeNot(s);
        if (IsConst(t, true)) {  // s ? 1 : e  ==  s | e
          if (SameVal(s, e)) return s;
          return {OptVal::kWire, EmitGate(GateKind::kOr, s.wire, e.wire)};
        }
        if (IsConst(e, false)) {  // s ? t : 0  ==  s & t
          if (SameVal(s, t)) return s;
          return {OptVal::kWire, EmitGate(GateKind::kAnd, s.wire, t.wire)};
        }
        return {OptVal::kWire, EmitGate(GateKind::kMux, s.wire,
                                        Materialize(t), Materialize(e))};
      }
    }
    throw std::logic_error("unhandled gate kind in simplifier");
  }

  // Liveness sweep from the outputs, then dense renumbering.
  static GateCircuit RemoveDeadGates(const GateCircuit& c) {
    const uint32_t base = c.num_input_wires();
    std::vector<bool> live(c.num_wires(), false);
    for (const WireGroup& g : c.outputs) {
      for (WireId w : g.wires) live[w] = true;
    }
    for (size_t i = c.gates.size(); i-- > 0;) {
      if (!live[base + i]) continue;
      const Gate& g = c.gates[i];
      for (int k = 0; k < GateArity(g.kind); ++k) live[g.operands[k]] = true;
    }

    std::vector<WireId> remap(c.num_wires(), 0);
    for (WireId w = 0; w < base; ++w) remap[w] = w;
    GateCircuit out;
    out.name = c.name;
    out.inputs = c.inputs;
    for (size_t i = 0; i < c.gates.size(); ++i) {
      if (!live[base + i]) continue;
      Gate g = c.gates[i];
      Gate ng{g.kind, {0, 0, 0}};
      for (int k = 0; k < GateArity(g.kind); ++k) {
        ng.operands[k] = remap[g.operands[k]];
      }
      remap[base + i] = base + static_cast<WireId>(out.gates.size());
      out.gates.push_back(ng);
    }
    for (const WireGroup& g : c.outputs) {
      WireGroup ng;
      ng.name = g.name;
      for (WireId w : g.wires) ng.wires.push_back(remap[w]);
      out.outputs.push_back(std::move(ng));
    }
    return out;
  }

  const GateCircuit& in_;
  uint32_t base_ = 0;
  std::vector<Gate> gates_;
  std::array<std::optional<WireId>, 2> const_wire_;
};

}  // namespace

GateCircuit GateOptimize(const GateCircuit& c) {
  return GateSimplifier(c).Run();
}

}  // namespace fhec
