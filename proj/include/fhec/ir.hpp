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
// Multi-bit dataflow IR: the intermediate layer between the frontend and the
// booleanifier. A function is a flat, topologically ordered node list over a
// shared id space; ids [0, inputs.size()) are the function inputs, node ids
// continue from there. Evaluation is the single semantics oracle the
// optimizer and booleanifier are tested against.

#ifndef FHEC_IR_HPP_
#define FHEC_IR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fhec {

using NodeId = uint32_t;

enum class IrKind {
  kLiteral,
  kAdd,
  kSub,
  kMul,
  kUDiv,
  kUMod,
  kSDiv,
  kSMod,
  kAnd,
  kOr,
  kXor,
  kNot,
  kShlConst,
  kShrConst,
  kEq,
  kNe,
  kULt,
  kULe,
  kSLt,
  kSLe,
  kNeg,
  kSelect,
  kConcat,
  kSlice,
  kZext,
  kSext,
};

// Serialized spelling ("ADD", "SHL_CONST", ...).
std::string_view IrKindName(IrKind kind);
std::optional<IrKind> IrKindFromName(std::string_view name);

// Operand count for fixed-arity kinds; -1 for variadic (CONCAT).
int IrKindArity(IrKind kind);

struct IrNode {
  NodeId id = 0;
  IrKind kind = IrKind::kLiteral;
  uint32_t width = 1;  // result width, 1..64
  std::vector<NodeId> operands;
  uint64_t literal = 0;  // LITERAL payload
  uint32_t imm = 0;      // SLICE start / SHL_CONST, SHR_CONST amount

  bool operator==(const IrNode&) const = default;
};

struct IrInput {
  std::string name;
  uint32_t width = 1;

  bool operator==(const IrInput&) const = default;
};

struct IrOutput {
  NodeId id = 0;  // may reference an input directly
  uint32_t width = 1;

  bool operator==(const IrOutput&) const = default;
};

struct IrFunction {
  std::string name;
  std::vector<IrInput> inputs;
  std::vector<IrNode> nodes;  // topologically ordered, ids dense after inputs
  std::vector<IrOutput> outputs;

  NodeId num_ids() const {
    return static_cast<NodeId>(inputs.size() + nodes.size());
  }
  // Width of any id, input or node.
  uint32_t width_of(NodeId id) const {
    return id < inputs.size() ? inputs[id].width
                              : nodes[id - inputs.size()].width;
  }

  bool operator==(const IrFunction&) const = default;
};

// Low `width` bits set; width must be in 1..64.
constexpr uint64_t WidthMask(uint32_t width) {
  return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

struct IrViolation {
  NodeId id = 0;
  std::string message;
};

// Structural check: dense topological ids, per-kind arity/width rules, slice
// bounds, literal range, output references. Empty result means well-formed.
std::vector<IrViolation> Validate(const IrFunction& f);
bool IsValid(const IrFunction& f);

// Single-node semantics shared by Evaluate and the constant folder.
// `operands` holds already-masked operand values in node operand order.
uint64_t EvalNode(IrKind kind, uint32_t width,
                  std::span<const uint32_t> operand_widths,
                  std::span<const uint64_t> operands, uint64_t literal,
                  uint32_t imm);

// Evaluates a validated function. Throws std::invalid_argument on a missing
// input or an input value that does not fit its declared width.
std::vector<uint64_t> Evaluate(const IrFunction& f,
                               const std::map<std::string, uint64_t>& inputs);

// Text format, one node per line:
//   fn <name>
//   input <name>:<width>          (ids 0.. in order)
//   %<id>:<width> = KIND(%<op>, ...)
//   output %<id>:<width>
// LITERAL carries value=, SLICE start=, SHL_CONST/SHR_CONST amount=.
// CONCAT lists the least significant operand first.
std::string Serialize(const IrFunction& f);

class IrParseError : public std::runtime_error {
 public:
  IrParseError(int line, int col, const std::string& message);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

IrFunction ParseIr(std::string_view text);

}  // namespace fhec

#endif  // FHEC_IR_HPP_
