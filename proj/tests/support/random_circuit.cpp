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

#include "support/random_circuit.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace fhec::testing {

GateCircuit RandomGateCircuit(uint64_t seed, uint32_t num_inputs,
                              uint32_t num_gates, uint32_t num_outputs) {
  if (num_inputs == 0 || num_gates == 0 || num_outputs == 0) {
    throw std::invalid_argument("random circuit needs inputs/gates/outputs");
  }
  std::mt19937_64 rng(seed);
  GateCircuit c;
  c.name = "random_" + std::to_string(seed);

  for (uint32_t at = 0; at < num_inputs; at += 16) {
    WireGroup group;
    group.name = "in" + std::to_string(at / 16);
    for (uint32_t i = at; i < std::min(at + 16, num_inputs); ++i) {
      group.wires.push_back(i);
    }
    c.inputs.push_back(std::move(group));
  }

  // Kind mix: mostly two-input logic, some NOT/MUX, a sprinkle of COPY and
  // constants so every backend entry point gets exercised.
  const GateKind kMix[] = {
      GateKind::kAnd, GateKind::kAnd, GateKind::kOr,   GateKind::kOr,
      GateKind::kXor, GateKind::kXor, GateKind::kXor,  GateKind::kNot,
      GateKind::kMux, GateKind::kMux, GateKind::kCopy, GateKind::kConst0,
      GateKind::kConst1};
  for (uint32_t g = 0; g < num_gates; ++g) {
    uint32_t known = num_inputs + g;  // wires defined before this gate
    Gate gate;
    gate.kind = kMix[rng() % (sizeof(kMix) / sizeof(kMix[0]))];
    for (int i = 0; i < GateArity(gate.kind); ++i) {
      gate.operands[static_cast<size_t>(i)] =
          static_cast<WireId>(rng() % known);
    }
    c.gates.push_back(gate);
  }

  // Outputs read the most recently defined wires: those sit deepest in the
  // DAG, so the whole circuit stays live.
  uint32_t total = num_inputs + num_gates;
  for (uint32_t at = 0; at < num_outputs; at += 16) {
    WireGroup group;
    group.name = "out" + std::to_string(at / 16);
    for (uint32_t i = at; i < std::min(at + 16, num_outputs); ++i) {
      group.wires.push_back(total - 1 - i);
    }
    c.outputs.push_back(std::move(group));
  }
  return c;
}

}  // namespace fhec::testing
