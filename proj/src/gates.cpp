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

#include "fhec/gates.hpp"

#include <sstream>

namespace fhec {
namespace {

struct GateInfo {
  std::string_view name;
  int arity;
};

constexpr std::array<GateInfo, kNumGateKinds> kGates = {{
    {"AND", 2},
    {"OR", 2},
    {"XOR", 2},
    {"NOT", 1},
    {"MUX", 3},
    {"CONST0", 0},
    {"CONST1", 0},
    {"COPY", 1},
}};

}  // namespace

std::string_view GateKindName(GateKind kind) {
  return kGates[static_cast<size_t>(kind)].name;
}

int GateArity(GateKind kind) {
  return kGates[static_cast<size_t>(kind)].arity;
}

uint32_t GateCircuit::num_input_wires() const {
  uint32_t n = 0;
  for (const WireGroup& g : inputs) n += g.width();
  return n;
}

size_t GateCircuit::logic_gate_count() const {
  size_t n = 0;
  for (const Gate& g : gates) {
    if (g.kind != GateKind::kConst0 && g.kind != GateKind::kConst1) ++n;
  }
  return n;
}

std::map<GateKind, size_t> GateCircuit::counts_by_kind() const {
  std::map<GateKind, size_t> counts;
  for (const Gate& g : gates) ++counts[g.kind];
  return counts;
}

std::vector<CircuitViolation> ValidateCircuit(const GateCircuit& c) {
  std::vector<CircuitViolation> out;
  auto bad = [&out](std::string msg) { out.push_back({std::move(msg)}); };

  const uint32_t n_in = c.num_input_wires();
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    const WireId self = n_in + static_cast<WireId>(i);
    for (int k = 0; k < GateArity(g.kind); ++k) {
      if (g.operands[k] >= self) {
        bad("gate w" + std::to_string(self) + " operand w" +
            std::to_string(g.operands[k]) + " is not an earlier wire");
      }
    }
  }
  for (const WireGroup& o : c.outputs) {
    for (WireId w : o.wires) {
      if (w >= c.num_wires()) {
        bad("output " + o.name + " references undefined wire w" +
            std::to_string(w));
      }
    }
    if (o.wires.empty()) bad("output group " + o.name + " is empty");
  }
  for (const WireGroup& in : c.inputs) {
    if (in.wires.empty()) bad("input group " + in.name + " is empty");
  }
  // Input groups must tile the id range [0, n_in) in order.
  WireId next = 0;
  for (const WireGroup& in : c.inputs) {
    for (WireId w : in.wires) {
      if (w != next) {
        bad("input group " + in.name + " wires are not dense");
        next = w;
      }
      ++next;
    }
  }
  return out;
}

bool IsWellFormed(const GateCircuit& c) { return ValidateCircuit(c).empty(); }

std::vector<uint8_t> EvaluateGates(const GateCircuit& c,
                                   const std::vector<uint8_t>& input_bits) {
  const uint32_t n_in = c.num_input_wires();
  if (input_bits.size() != n_in) {
    throw std::invalid_argument(
        "input bit count mismatch: expected " + std::to_string(n_in) +
        ", got " + std::to_string(input_bits.size()));
  }
  std::vector<uint8_t> wire(c.num_wires(), 0);
  for (uint32_t i = 0; i < n_in; ++i) wire[i] = input_bits[i] ? 1 : 0;

  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    uint8_t v = 0;
    switch (g.kind) {
      case GateKind::kAnd:
        v = wire[g.operands[0]] & wire[g.operands[1]];
        break;
      case GateKind::kOr:
        v = wire[g.operands[0]] | wire[g.operands[1]];
        break;
      case GateKind::kXor:
        v = wire[g.operands[0]] ^ wire[g.operands[1]];
        break;
      case GateKind::kNot:
        v = wire[g.operands[0]] ^ 1;
        break;
      case GateKind::kMux:
        v = wire[g.operands[0]] ? wire[g.operands[1]] : wire[g.operands[2]];
        break;
      case GateKind::kConst0:
        v = 0;
        break;
      case GateKind::kConst1:
        v = 1;
        break;
      case GateKind::kCopy:
        v = wire[g.operands[0]];
        break;
    }
    wire[n_in + i] = v;
  }

  std::vector<uint8_t> out;
  for (const WireGroup& o : c.outputs) {
    for (WireId w : o.wires) out.push_back(wire[w]);
  }
  return out;
}

std::vector<uint8_t> BitsFromValue(uint64_t value, uint32_t width) {
  std::vector<uint8_t> bits(width);
  for (uint32_t i = 0; i < width; ++i) bits[i] = (value >> i) & 1;
  return bits;
}

uint64_t ValueFromBits(const std::vector<uint8_t>& bits) {
  uint64_t v = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) v |= uint64_t{1} << i;
  }
  return v;
}

std::string SerializeGates(const GateCircuit& c) {
  std::ostringstream os;
  os << "circuit " << c.name << '\n';
  os << "inputs";
  for (const WireGroup& g : c.inputs) os << ' ' << g.name << ':' << g.width();
  os << '\n';
  os << "outputs";
  for (const WireGroup& g : c.outputs) os << ' ' << g.name << ':' << g.width();
  os << '\n';
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    os << 'w' << c.gate_wire(i) << " = " << GateKindName(g.kind) << '(';
    for (int k = 0; k < GateArity(g.kind); ++k) {
      if (k) os << ", ";
      os << 'w' << g.operands[k];
    }
    os << ")\n";
  }
  for (const WireGroup& g : c.outputs) {
    os << "output " << g.name << " =";
    for (WireId w : g.wires) os << " w" << w;
    os << '\n';
  }
  return os.str();
}

GatesParseError::GatesParseError(int line, int col, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                         ": " + message),
      line_(line),
      col_(col) {}

namespace {

class Cursor {
 public:
  Cursor(std::string_view s, int line) : s_(s), line_(line) {}

  void SkipWs() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool AtEnd() {
    SkipWs();
    return pos_ >= s_.size();
  }
  bool Peek(char c) {
    SkipWs();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool Eat(char c) {
    if (!Peek(c)) return false;
    ++pos_;
    return true;
  }
  void Expect(char c) {
    if (!Eat(c)) Fail(std::string("expected '") + c + "'");
  }
  std::string Token() {
    SkipWs();
    size_t start = pos_;
    while (pos_ < s_.size() && !isspace(s_[pos_]) && s_[pos_] != ':' &&
           s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != ',' &&
           s_[pos_] != '=') {
      ++pos_;
    }
    if (pos_ == start) Fail("expected token");
    return std::string(s_.substr(start, pos_ - start));
  }
  uint64_t Number() {
    SkipWs();
    size_t start = pos_;
    while (pos_ < s_.size() && isdigit(s_[pos_])) ++pos_;
    if (pos_ == start) Fail("expected number");
    return std::stoull(std::string(s_.substr(start, pos_ - start)));
  }
  [[noreturn]] void Fail(const std::string& msg) {
    throw GatesParseError(line_, static_cast<int>(pos_) + 1, msg);
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;
  int line_;
};

GateKind GateKindFromNameOrFail(Cursor& c, const std::string& name) {
  for (int k = 0; k < kNumGateKinds; ++k) {
    if (GateKindName(static_cast<GateKind>(k)) == name) {
      return static_cast<GateKind>(k);
    }
  }
  c.Fail("unknown gate kind " + name);
}

}  // namespace

GateCircuit ParseGates(std::string_view text) {
  GateCircuit c;
  bool saw_circuit = false, saw_inputs = false, saw_outputs = false;
  std::vector<uint32_t> declared_output_widths;
  size_t bound_outputs = 0;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    Cursor cur(line, line_no);
    if (cur.AtEnd() || cur.Peek('#')) continue;

    if (cur.Peek('w')) {
      if (!saw_inputs) cur.Fail("gate before inputs header");
      cur.Expect('w');
      WireId id = static_cast<WireId>(cur.Number());
      cur.Expect('=');
      std::string kind_name = cur.Token();
      Gate g;
      g.kind = GateKindFromNameOrFail(cur, kind_name);
      cur.Expect('(');
      int arity = GateArity(g.kind);
      for (int k = 0; k < arity; ++k) {
        if (k) cur.Expect(',');
        cur.Expect('w');
        WireId op = static_cast<WireId>(cur.Number());
        g.operands[k] = op;
      }
      cur.Expect(')');
      if (!cur.AtEnd()) cur.Fail("trailing characters");
      if (id != c.num_input_wires() + c.gates.size()) {
        cur.Fail("wire id out of order (expected w" +
                 std::to_string(c.num_input_wires() + c.gates.size()) + ")");
      }
      c.gates.push_back(g);
      continue;
    }

    std::string word = cur.Token();
    if (word == "circuit") {
      if (saw_circuit) cur.Fail("duplicate circuit header");
      saw_circuit = true;
      c.name = cur.Token();
    } else if (word == "inputs") {
      if (saw_inputs) cur.Fail("duplicate inputs header");
      saw_inputs = true;
      WireId next = 0;
      while (!cur.AtEnd()) {
        WireGroup g;
        g.name = cur.Token();
        cur.Expect(':');
        uint32_t w = static_cast<uint32_t>(cur.Number());
        if (w == 0) cur.Fail("zero-width input group");
        for (uint32_t i = 0; i < w; ++i) g.wires.push_back(next++);
        c.inputs.push_back(std::move(g));
      }
    } else if (word == "outputs") {
      if (saw_outputs) cur.Fail("duplicate outputs header");
      saw_outputs = true;
      while (!cur.AtEnd()) {
        WireGroup g;
        g.name = cur.Token();
        cur.Expect(':');
        uint32_t w = static_cast<uint32_t>(cur.Number());
        if (w == 0) cur.Fail("zero-width output group");
        declared_output_widths.push_back(w);
        c.outputs.push_back(std::move(g));
      }
    } else if (word == "output") {
      if (bound_outputs >= c.outputs.size()) cur.Fail("unexpected output binding");
      WireGroup& g = c.outputs[bound_outputs];
      std::string name = cur.Token();
      if (name != g.name) {
        cur.Fail("output bindings must follow header order; expected " +
                 g.name);
      }
      cur.Expect('=');
      while (!cur.AtEnd()) {
        cur.Expect('w');
        g.wires.push_back(static_cast<WireId>(cur.Number()));
      }
      if (g.wires.size() != declared_output_widths[bound_outputs]) {
        cur.Fail("output " + g.name + " binds " +
                 std::to_string(g.wires.size()) + " wires, declared " +
                 std::to_string(declared_output_widths[bound_outputs]));
      }
      ++bound_outputs;
    } else {
      cur.Fail("unknown directive " + word);
    }
  }
  if (!saw_circuit) throw GatesParseError(1, 1, "missing circuit header");
  if (bound_outputs != c.outputs.size()) {
    throw GatesParseError(line_no, 1, "missing output binding");
  }
  return c;
}

}  // namespace fhec
