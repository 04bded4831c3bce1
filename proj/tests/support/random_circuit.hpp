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
// Deterministic pseudo-random gate circuits for runtime and optimizer
// stress tests. The same seed always produces the same circuit.

#ifndef FHEC_TESTS_SUPPORT_RANDOM_CIRCUIT_HPP_
#define FHEC_TESTS_SUPPORT_RANDOM_CIRCUIT_HPP_

#include <cstdint>

#include "fhec/gates.hpp"

namespace fhec::testing {

// Builds a well-formed circuit with `num_inputs` input wires (grouped in
// spans of at most 16), `num_gates` gates whose kinds and operands are
// drawn from the seeded generator, and `num_outputs` output wires picked
// from the deepest wires.
GateCircuit RandomGateCircuit(uint64_t seed, uint32_t num_inputs,
                              uint32_t num_gates, uint32_t num_outputs);

}  // namespace fhec::testing

#endif  // FHEC_TESTS_SUPPORT_RANDOM_CIRCUIT_HPP_
