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

#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include "fhec/gates.hpp"
#include "fhec/ir.hpp"
#include "support/random_circuit.hpp"

namespace fhec {
namespace {

// Single-node function: out = kind(inputs...).
IrFunction OneNode(IrKind kind, uint32_t result_width,
                   std::vector<uint32_t> input_widths, uint64_t literal = 0,
                   uint32_t imm = 0) {
  IrFunction f;
  f.name = "one";
  std::vector<NodeId> ops;
  for (size_t i = 0; i < input_widths.size(); ++i) {
    f.inputs.push_back({"in" + std::to_string(i), input_widths[i]});
    ops.push_back(static_cast<NodeId>(i));
  }
  NodeId id = static_cast<NodeId>(input_widths.size());
  f.nodes.push_back({id, kind, result_width, std::move(ops), literal, imm});
  f.outputs.push_back({id, result_width});
  return f;
}

// Checks Booleanify (and its optimized form) against EvalNode over every
// input assignment of the node's operands.
void ExhaustiveNodeCheck(const IrFunction& f) {
  ASSERT_TRUE(IsValid(f));
  const IrNode& node = f.nodes[0];
  GateCircuit raw = Booleanify(f);
  GateCircuit opt = GateOptimize(raw);
  ASSERT_TRUE(IsWellFormed(raw));
  ASSERT_TRUE(IsWellFormed(opt));
  EXPECT_LE(opt.gates.size(), raw.gates.size());

  uint32_t total_bits = 0;
  for (const IrInput& in : f.inputs) total_bits += in.width;
  ASSERT_LE(total_bits, 14u) << "exhaustive check would be too slow";

  std::vector<uint32_t> operand_widths;
  for (const IrInput& in : f.inputs) operand_widths.push_back(in.width);

  for (uint64_t pattern = 0; pattern < (uint64_t{1} << total_bits); ++pattern) {
    std::vector<uint8_t> bits(total_bits);
    std::vector<uint64_t> operands(f.inputs.size());
    uint32_t at = 0;
    for (size_t i = 0; i < f.inputs.size(); ++i) {
      for (uint32_t b = 0; b < f.inputs[i].width; ++b, ++at) {
        uint8_t bit = (pattern >> at) & 1;
        bits[at] = bit;
        operands[i] |= uint64_t{bit} << b;
      }
    }
    uint64_t expected = EvalNode(node.kind, node.width, operand_widths,
                                 operands, node.literal, node.imm);
    for (const GateCircuit* c : {&raw, &opt}) {
      std::vector<uint8_t> out = EvaluateGates(*c, bits);
      ASSERT_EQ(out.size(), node.width);
      ASSERT_EQ(ValueFromBits(out), expected)
          << IrKindName(node.kind) << " w=" << node.width
          << " pattern=" << pattern
          << (c == &raw ? " (raw)" : " (optimized)");
    }
  }
}

TEST(BooleanifyTest, ArithmeticKindsMatchNodeSemantics) {
  ExhaustiveNodeCheck(OneNode(IrKind::kAdd, 6, {6, 6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kSub, 6, {6, 6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kMul, 5, {5, 5}));
  ExhaustiveNodeCheck(OneNode(IrKind::kNeg, 7, {7}));
}

TEST(BooleanifyTest, DivisionKindsMatchNodeSemantics) {
  ExhaustiveNodeCheck(OneNode(IrKind::kUDiv, 5, {5, 5}));
  ExhaustiveNodeCheck(OneNode(IrKind::kUMod, 5, {5, 5}));
  ExhaustiveNodeCheck(OneNode(IrKind::kSDiv, 5, {5, 5}));
  ExhaustiveNodeCheck(OneNode(IrKind::kSMod, 5, {5, 5}));
}

TEST(BooleanifyTest, BitwiseKindsMatchNodeSemantics) {
  ExhaustiveNodeCheck(OneNode(IrKind::kAnd, 6, {6, 6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kOr, 6, {6, 6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kXor, 6, {6, 6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kNot, 6, {6}));
}

TEST(BooleanifyTest, ComparisonKindsMatchNodeSemantics) {
  for (IrKind kind : {IrKind::kEq, IrKind::kNe, IrKind::kULt, IrKind::kULe,
                      IrKind::kSLt, IrKind::kSLe}) {
    ExhaustiveNodeCheck(OneNode(kind, 1, {6, 6}));
  }
}

TEST(BooleanifyTest, RewiringKindsMatchNodeSemantics) {
  for (uint32_t amount : {0u, 1u, 3u, 5u}) {
    ExhaustiveNodeCheck(OneNode(IrKind::kShlConst, 6, {6}, 0, amount));
    ExhaustiveNodeCheck(OneNode(IrKind::kShrConst, 6, {6}, 0, amount));
  }
  ExhaustiveNodeCheck(OneNode(IrKind::kSlice, 3, {8}, 0, 2));
  ExhaustiveNodeCheck(OneNode(IrKind::kZext, 12, {6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kSext, 12, {6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kConcat, 9, {4, 5}));
  ExhaustiveNodeCheck(OneNode(IrKind::kSelect, 6, {1, 6, 6}));
  ExhaustiveNodeCheck(OneNode(IrKind::kLiteral, 8, {}, 0xa5));
}

TEST(BooleanifyTest, RewiringEmitsNoLogicGates) {
  for (IrKind kind : {IrKind::kShlConst, IrKind::kShrConst, IrKind::kSlice,
                      IrKind::kZext}) {
    uint32_t width = kind == IrKind::kSlice ? 4 : 8;
    GateCircuit c = Booleanify(OneNode(kind, width, {8}, 0, 2));
    EXPECT_EQ(c.logic_gate_count(), 0u) << IrKindName(kind);
  }
  GateCircuit sext = Booleanify(OneNode(IrKind::kSext, 16, {8}));
  EXPECT_EQ(sext.logic_gate_count(), 0u);
}

// The ripple-carry adder shape: a CONST0 initial carry, then exactly five
// logic gates per bit in the order XOR, XOR, AND, AND, OR (half the XORs
// make the sum, the ANDs and OR propagate the carry).
TEST(BooleanifyTest, AdderHasFiveGatesPerBit) {
  for (uint32_t n : {1u, 4u, 8u, 16u, 32u, 64u}) {
    GateCircuit c = Booleanify(OneNode(IrKind::kAdd, n, {n, n}));
    ASSERT_TRUE(IsWellFormed(c));
    EXPECT_EQ(c.logic_gate_count(), 5u * n) << "n=" << n;

    ASSERT_FALSE(c.gates.empty());
    EXPECT_EQ(c.gates[0].kind, GateKind::kConst0);  // initial carry
    ASSERT_EQ(c.gates.size(), 1u + 5u * n);
    const GateKind kPerBit[5] = {GateKind::kXor, GateKind::kXor,
                                 GateKind::kAnd, GateKind::kAnd,
                                 GateKind::kOr};
    for (uint32_t bit = 0; bit < n; ++bit) {
      for (uint32_t g = 0; g < 5; ++g) {
        EXPECT_EQ(c.gates[1 + bit * 5 + g].kind, kPerBit[g])
            << "n=" << n << " bit=" << bit << " gate=" << g;
      }
    }
  }
}

TEST(BooleanifyTest, InputGroupsMirrorIrInputs) {
  IrFunction f = OneNode(IrKind::kAdd, 8, {8, 8});
  f.inputs[0].name = "a";
  f.inputs[1].name = "b";
  GateCircuit c = Booleanify(f);
  ASSERT_EQ(c.inputs.size(), 2u);
  EXPECT_EQ(c.inputs[0].name, "a");
  EXPECT_EQ(c.inputs[0].width(), 8u);
  EXPECT_EQ(c.inputs[1].name, "b");
  ASSERT_EQ(c.outputs.size(), 1u);
  EXPECT_EQ(c.outputs[0].name, "out");
}

TEST(BooleanifyTest, MultipleOutputsAreNumbered) {
  IrFunction f;
  f.name = "two";
  f.inputs = {{"a", 4}};
  f.nodes = {{1, IrKind::kNot, 4, {0}, 0, 0}};
  f.outputs = {{0, 4}, {1, 4}};
  GateCircuit c = Booleanify(f);
  ASSERT_EQ(c.outputs.size(), 2u);
  EXPECT_EQ(c.outputs[0].name, "out0");
  EXPECT_EQ(c.outputs[1].name, "out1");
}

TEST(BooleanifyTest, RejectsInvalidIr) {
  IrFunction f = OneNode(IrKind::kAdd, 8, {8, 8});
  f.nodes[0].width = 4;  // width mismatch
  EXPECT_THROW(Booleanify(f), std::invalid_argument);
}

// --- Gate-level optimization ----------------------------------------------

TEST(GateOptimizeTest, CollapsesDoubleNot) {
  GateCircuit c;
  c.name = "nn";
  c.inputs = {{"a", {0}}};
  c.gates = {{GateKind::kNot, {0, 0, 0}}, {GateKind::kNot, {1, 0, 0}}};
  c.outputs = {{"out", {2}}};
  GateCircuit opt = GateOptimize(c);
  EXPECT_EQ(opt.logic_gate_count(), 0u);
}

TEST(GateOptimizeTest, FoldsConstantsThroughLogic) {
  // AND(a, 0) -> 0, OR(a, 1) -> 1, XOR(a, 1) -> NOT(a).
  GateCircuit c;
  c.name = "consts";
  c.inputs = {{"a", {0}}};
  c.gates = {
      {GateKind::kConst0, {0, 0, 0}},  // w1
      {GateKind::kConst1, {0, 0, 0}},  // w2
      {GateKind::kAnd, {0, 1, 0}},     // w3 = a & 0
      {GateKind::kOr, {0, 2, 0}},      // w4 = a | 1
      {GateKind::kXor, {0, 2, 0}},     // w5 = a ^ 1
  };
  c.outputs = {{"out", {3, 4, 5}}};
  GateCircuit opt = GateOptimize(c);
  ASSERT_TRUE(IsWellFormed(opt));
  auto counts = opt.counts_by_kind();
  EXPECT_EQ(counts[GateKind::kAnd], 0u);
  EXPECT_EQ(counts[GateKind::kOr], 0u);
  EXPECT_EQ(counts[GateKind::kXor], 0u);
  EXPECT_EQ(counts[GateKind::kNot], 1u);
  for (uint64_t a = 0; a < 2; ++a) {
    std::vector<uint8_t> in = {static_cast<uint8_t>(a)};
    EXPECT_EQ(EvaluateGates(opt, in), EvaluateGates(c, in));
  }
}

TEST(GateOptimizeTest, SimplifiesMuxShapes) {
  // MUX(s, 1, 0) -> s and MUX(s, 0, 1) -> NOT(s); MUX(s, t, t) -> t.
  GateCircuit c;
  c.name = "mux";
  c.inputs = {{"s", {0}}, {"t", {1}}};
  c.gates = {
      {GateKind::kConst0, {0, 0, 0}},       // w2
      {GateKind::kConst1, {0, 0, 0}},       // w3
      {GateKind::kMux, {0, 3, 2}},          // w4 = s ? 1 : 0  -> s
      {GateKind::kMux, {0, 2, 3}},          // w5 = s ? 0 : 1  -> NOT s
      {GateKind::kMux, {0, 1, 1}},          // w6 = s ? t : t  -> t
  };
  c.outputs = {{"out", {4, 5, 6}}};
  GateCircuit opt = GateOptimize(c);
  EXPECT_EQ(opt.counts_by_kind()[GateKind::kMux], 0u);
  for (uint64_t pattern = 0; pattern < 4; ++pattern) {
    std::vector<uint8_t> in = {static_cast<uint8_t>(pattern & 1),
                               static_cast<uint8_t>(pattern >> 1)};
    EXPECT_EQ(EvaluateGates(opt, in), EvaluateGates(c, in));
  }
}

TEST(GateOptimizeTest, NeverGrowsAndPreservesRandomCircuits) {
  std::mt19937_64 rng(0x9a9a);
  for (int trial = 0; trial < 20; ++trial) {
    GateCircuit c = testing::RandomGateCircuit(rng(), 24, 300, 16);
    ASSERT_TRUE(IsWellFormed(c));
    GateCircuit opt = GateOptimize(c);
    ASSERT_TRUE(IsWellFormed(opt));
    EXPECT_LE(opt.gates.size(), c.gates.size());
    // Group shapes survive untouched.
    ASSERT_EQ(opt.inputs.size(), c.inputs.size());
    ASSERT_EQ(opt.outputs.size(), c.outputs.size());
    for (size_t i = 0; i < c.outputs.size(); ++i) {
      EXPECT_EQ(opt.outputs[i].name, c.outputs[i].name);
      EXPECT_EQ(opt.outputs[i].width(), c.outputs[i].width());
    }
    for (int n = 0; n < 50; ++n) {
      std::vector<uint8_t> bits(24);
      for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);
      ASSERT_EQ(EvaluateGates(opt, bits), EvaluateGates(c, bits))
          << "trial " << trial;
    }
  }
}

TEST(GateOptimizeTest, IsIdempotent) {
  std::mt19937_64 rng(0xbeef);
  for (int trial = 0; trial < 10; ++trial) {
    GateCircuit c = testing::RandomGateCircuit(rng(), 16, 200, 8);
    GateCircuit once = GateOptimize(c);
    GateCircuit twice = GateOptimize(once);
    EXPECT_EQ(twice, once);
  }
}

}  // namespace
}  // namespace fhec
