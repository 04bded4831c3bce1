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
// Booleanification: expands every multi-bit IR node into single-bit gates.
// Arithmetic uses textbook constructions - ripple-carry adders (exactly
// five gates per bit: XOR, XOR, AND, AND, OR, with a constant-zero initial
// carry), two's-complement subtraction, schoolbook multiplication and
// restoring division - so gate counts are predictable functions of width.
// Shifts by constants, slices, extensions and concatenations are pure
// rewiring and emit no gates.

#ifndef FHEC_BOOLEANIFY_HPP_
#define FHEC_BOOLEANIFY_HPP_

#include "fhec/gates.hpp"
#include "fhec/ir.hpp"

namespace fhec {

// Pre: f is valid. Input groups mirror f's inputs (name, width, order);
// output groups are named "out" (single output) or "out0", "out1", ...
GateCircuit Booleanify(const IrFunction& f);

// Local gate-level cleanup: constant propagation, operand aliasing (COPY
// removal, double NOT, x XOR 1 -> NOT x, MUX with known selector or equal
// arms), then dead-gate removal and dense renumbering. Never increases the
// gate count and never touches input/output group shapes.
GateCircuit GateOptimize(const GateCircuit& c);

}  // namespace fhec

#endif  // FHEC_BOOLEANIFY_HPP_
