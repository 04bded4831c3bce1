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
// Single-bit gate circuits: the booleanified form every backend executes.
// Wire ids are dense: input wires first (header order, LSB first within a
// group), then one wire per gate in list order. Output groups may reference
// input wires directly and may repeat a wire (e.g. sign extension).

#ifndef FHEC_GATES_HPP_
#define FHEC_GATES_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fhec {

using WireId = uint32_t;

enum class GateKind : uint8_t {
  kAnd,
  kOr,
  kXor,
  kNot,
  kMux,
  kConst0,
  kConst1,
  kCopy,
};
inline constexpr int kNumGateKinds = 8;

std::string_view GateKindName(GateKind kind);
int GateArity(GateKind kind);  // NOT/COPY 1, AND/OR/XOR 2, MUX 3, CONST 0

struct Gate {
  GateKind kind = GateKind::kConst0;
  // MUX operand order: selector, then-wire, else-wire.
  std::array<WireId, 3> operands = {0, 0, 0};

  bool operator==(const Gate&) const = default;
};

struct WireGroup {
  std::string name;
  std::vector<WireId> wires;  // LSB first

  uint32_t width() const { return static_cast<uint32_t>(wires.size()); }
  bool operator==(const WireGroup&) const = default;
};

struct GateCircuit {
  std::string name;
  std::vector<WireGroup> inputs;   // wires are ids 0..num_input_wires-1
  std::vector<WireGroup> outputs;  // reference any defined wire
  std::vector<Gate> gates;         // gate g defines wire num_input_wires+g

  uint32_t num_input_wires() const;
  uint32_t num_wires() const {
    return num_input_wires() + static_cast<uint32_t>(gates.size());
  }
  WireId gate_wire(size_t gate_index) const {
    return num_input_wires() + static_cast<WireId>(gate_index);
  }
  // Gates excluding CONST0/CONST1 (the count the adder structure law uses).
  size_t logic_gate_count() const;
  std::map<GateKind, size_t> counts_by_kind() const;

  bool operator==(const GateCircuit&) const = default;
};

struct CircuitViolation {
  std::string message;
};

// Structural well-formedness: arity, operand ordering (acyclicity), output
// references, header consistency.
std::vector<CircuitViolation> ValidateCircuit(const GateCircuit& c);
bool IsWellFormed(const GateCircuit& c);

// Plaintext-bit oracle: deterministic topological evaluation. `input_bits`
// holds one bit per input wire in wire-id order (i.e. groups concatenated).
// Throws std::invalid_argument on a bit-count mismatch.
std::vector<uint8_t> EvaluateGates(const GateCircuit& c,
                                   const std::vector<uint8_t>& input_bits);

// Packing helpers between group-ordered bit vectors and integers (LSB first).
std::vector<uint8_t> BitsFromValue(uint64_t value, uint32_t width);
uint64_t ValueFromBits(const std::vector<uint8_t>& bits);

// Text format:
//   circuit <name>
//   inputs <name>:<width> ...
//   outputs <name>:<width> ...
//   w<id> = KIND(w<op>, ...)        one gate per line, MUX selector first
//   output <name> = w<id> ...       binding per output group, LSB first
std::string SerializeGates(const GateCircuit& c);

class GatesParseError : public std::runtime_error {
 public:
  GatesParseError(int line, int col, const std::string& message);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

GateCircuit ParseGates(std::string_view text);

}  // namespace fhec

#endif  // FHEC_GATES_HPP_
