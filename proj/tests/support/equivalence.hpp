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
// Whole-pipeline equivalence harness. A test program is compiled through
// every stage; each input assignment is then checked across all of:
//
//   * the reference AST interpreter (support/oracle.hpp),
//   * IR evaluation, before and after the optimizer pipeline,
//   * gate evaluation, before and after gate-level optimization,
//   * circuit execution on the cleartext backend,
//   * circuit execution on the FHE backend, decrypted.
//
// Inputs are enumerated exhaustively when the total input width is small
// and sampled with a fixed seed otherwise, so every run checks the same
// cases.

#ifndef FHEC_TESTS_SUPPORT_EQUIVALENCE_HPP_
#define FHEC_TESTS_SUPPORT_EQUIVALENCE_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fhec/ast.hpp"
#include "fhec/backend.hpp"
#include "fhec/codec.hpp"
#include "fhec/gates.hpp"
#include "fhec/ir.hpp"
#include "fhec/layout.hpp"

namespace fhec::testing {

// Every stage of the pipeline for one entry function. Throws
// std::runtime_error with the formatted diagnostics if any stage rejects
// the program.
struct CompiledProgram {
  std::string name;          // entry function name
  Program program;           // typed AST
  IrFunction ir;             // straight lowering
  IrFunction ir_opt;         // after the default pass pipeline
  GateCircuit gates;         // Booleanify(ir)
  GateCircuit gates_opt;     // GateOptimize(Booleanify(ir_opt))
  std::vector<Layout> param_layouts;
  Layout return_layout;
  uint32_t total_input_bits = 0;
};

CompiledProgram CompileForTest(std::string_view source,
                               std::string_view entry = "main");

struct EquivalenceOptions {
  // Enumerate all inputs when total_input_bits <= this; sample otherwise.
  uint32_t exhaustive_bit_limit = 12;
  uint64_t random_cases = 1000;
  uint64_t seed = 0x5eed;
  bool check_fhe = true;  // run the FHE backend path (slowest stage)
};

struct EquivalenceResult {
  uint64_t cases_checked = 0;
  bool exhaustive = false;
  std::string failure;  // empty when every case agreed

  bool ok() const { return failure.empty(); }
};

EquivalenceResult CheckEquivalence(const CompiledProgram& cp,
                                   const EquivalenceOptions& options = {});

// Helpers shared by tests.

// Splits a flat input bit string into one Value per parameter.
std::vector<Value> ArgsFromBits(const CompiledProgram& cp,
                                const std::vector<uint8_t>& bits);

// IR input map ("a", "xs[0]", "p.x" -> leaf value) for the same bit string.
std::vector<std::pair<std::string, uint64_t>> IrInputsFromBits(
    const CompiledProgram& cp, const std::vector<uint8_t>& bits);

// Flattens IR output values back to a bit string for comparison.
std::vector<uint8_t> BitsFromIrOutputs(const IrFunction& f,
                                       const std::vector<uint64_t>& outputs);

// Reads program text from the test data directory (TESTDATA_DIR).
std::string ReadTestdataFile(const std::string& filename);

// The standard end-to-end program suite under testdata/.
const std::vector<std::string>& SuiteFiles();

}  // namespace fhec::testing

#endif  // FHEC_TESTS_SUPPORT_EQUIVALENCE_HPP_
