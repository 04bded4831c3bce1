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

#include "support/equivalence.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fhec/booleanify.hpp"
#include "fhec/frontend.hpp"
#include "fhec/optimizer.hpp"
#include "fhec/runtime.hpp"
#include "support/oracle.hpp"

namespace fhec::testing {
namespace {

std::string JoinDiagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream out;
  for (const auto& d : diags) out << FormatDiagnostic("<test>", d) << "\n";
  return out.str();
}

std::string HexBits(const std::vector<uint8_t>& bits) {
  // Bits are LSB first; print as a hex string, low nibble last.
  std::string hex;
  for (size_t i = 0; i < bits.size(); i += 4) {
    int nibble = 0;
    for (size_t j = 0; j < 4 && i + j < bits.size(); ++j) {
      nibble |= bits[i + j] << j;
    }
    hex.insert(hex.begin(), "0123456789abcdef"[nibble]);
  }
  return "0x" + (hex.empty() ? "0" : hex);
}

std::vector<std::vector<CiphertextBit>> ImportGroups(
    const GateCircuit& c, const std::vector<uint8_t>& bits,
    GateBackend& backend) {
  std::vector<std::vector<CiphertextBit>> groups;
  size_t at = 0;
  for (const auto& group : c.inputs) {
    std::vector<CiphertextBit> wires;
    wires.reserve(group.wires.size());
    for (size_t i = 0; i < group.wires.size(); ++i) {
      wires.push_back(backend.ImportBit(bits[at++]));
    }
    groups.push_back(std::move(wires));
  }
  return groups;
}

std::vector<uint8_t> ExportGroups(
    const std::vector<std::vector<CiphertextBit>>& outputs,
    GateBackend& backend) {
  std::vector<uint8_t> bits;
  for (const auto& group : outputs) {
    for (const auto& bit : group) bits.push_back(backend.ExportBit(bit));
  }
  return bits;
}

}  // namespace

CompiledProgram CompileForTest(std::string_view source,
                               std::string_view entry) {
  ParseResult parsed = Parse(source);
  if (!parsed.program.has_value()) {
    throw std::runtime_error("parse failed:\n" +
                             JoinDiagnostics(parsed.diagnostics));
  }
  CompiledProgram cp;
  cp.name = std::string(entry);
  cp.program = std::move(*parsed.program);

  std::vector<Diagnostic> restriction = CheckRestrictions(cp.program);
  if (HasErrors(restriction)) {
    throw std::runtime_error("restriction check failed:\n" +
                             JoinDiagnostics(restriction));
  }

  LowerResult lowered = LowerToIr(cp.program, entry);
  if (!lowered.func.has_value()) {
    throw std::runtime_error("lowering failed:\n" +
                             JoinDiagnostics(lowered.diagnostics));
  }
  cp.ir = std::move(*lowered.func);
  cp.ir_opt = RunPipeline(cp.ir, PassPipeline::Default()).func;
  cp.gates = Booleanify(cp.ir);
  cp.gates_opt = GateOptimize(Booleanify(cp.ir_opt));

  const FuncDecl* fn = cp.program.FindFunction(entry);
  for (const Param& param : fn->params) {
    cp.param_layouts.push_back(DeriveLayout(cp.program, param.type));
    cp.total_input_bits += cp.param_layouts.back().total_bits();
  }
  cp.return_layout = DeriveLayout(cp.program, fn->return_type);
  return cp;
}

std::vector<Value> ArgsFromBits(const CompiledProgram& cp,
                                const std::vector<uint8_t>& bits) {
  std::vector<Value> args;
  size_t at = 0;
  for (const Layout& layout : cp.param_layouts) {
    std::vector<uint8_t> slice(bits.begin() + at,
                               bits.begin() + at + layout.total_bits());
    at += layout.total_bits();
    args.push_back(DecodeValue(layout, slice));
  }
  return args;
}

std::vector<std::pair<std::string, uint64_t>> IrInputsFromBits(
    const CompiledProgram& cp, const std::vector<uint8_t>& bits) {
  std::vector<std::pair<std::string, uint64_t>> inputs;
  const FuncDecl* fn = cp.program.FindFunction(cp.name);
  if (fn == nullptr) {
    throw std::runtime_error("no function named '" + cp.name + "'");
  }
  size_t at = 0;
  for (size_t p = 0; p < cp.param_layouts.size(); ++p) {
    for (const LayoutLeaf& leaf : LayoutLeaves(cp.param_layouts[p])) {
      uint64_t value = 0;
      for (uint32_t i = 0; i < leaf.width; ++i) {
        value |= uint64_t{bits[at++]} << i;
      }
      inputs.emplace_back(fn->params[p].name + leaf.path, value);
    }
  }
  return inputs;
}

std::vector<uint8_t> BitsFromIrOutputs(const IrFunction& f,
                                       const std::vector<uint64_t>& outputs) {
  std::vector<uint8_t> bits;
  for (size_t i = 0; i < f.outputs.size(); ++i) {
    std::vector<uint8_t> chunk = BitsFromValue(outputs[i], f.outputs[i].width);
    bits.insert(bits.end(), chunk.begin(), chunk.end());
  }
  return bits;
}

EquivalenceResult CheckEquivalence(const CompiledProgram& cp,
                                   const EquivalenceOptions& options) {
  EquivalenceResult result;
  result.exhaustive = cp.total_input_bits <= options.exhaustive_bit_limit;
  uint64_t cases = result.exhaustive ? (uint64_t{1} << cp.total_input_bits)
                                     : options.random_cases;

  CleartextBackend clear;
  FheBackend fhe(SchemeParams::Preset("tfhe_like"));

  std::mt19937_64 rng(options.seed);
  std::vector<uint8_t> bits(cp.total_input_bits);

  auto fail = [&](uint64_t case_index, const std::string& stage,
                  const std::vector<uint8_t>& expected,
                  const std::vector<uint8_t>& got) {
    std::ostringstream out;
    out << cp.name << " case " << case_index << " inputs " << HexBits(bits)
        << ": " << stage << " disagrees with the reference interpreter"
        << " (expected " << HexBits(expected) << ", got " << HexBits(got)
        << ")";
    result.failure = out.str();
    return result;
  };

  for (uint64_t n = 0; n < cases; ++n) {
    if (result.exhaustive) {
      for (uint32_t i = 0; i < cp.total_input_bits; ++i) {
        bits[i] = static_cast<uint8_t>((n >> i) & 1);
      }
    } else {
      for (uint32_t i = 0; i < cp.total_input_bits; ++i) {
        bits[i] = static_cast<uint8_t>(rng() & 1);
      }
    }

    Value expected_value = OracleRun(cp.program, cp.name, ArgsFromBits(cp, bits));
    std::vector<uint8_t> expected = EncodeValue(expected_value, cp.return_layout);

    std::map<std::string, uint64_t> ir_inputs;
    for (auto& [name, value] : IrInputsFromBits(cp, bits)) {
      ir_inputs[name] = value;
    }
    std::vector<uint8_t> ir_bits =
        BitsFromIrOutputs(cp.ir, Evaluate(cp.ir, ir_inputs));
    if (ir_bits != expected) return fail(n, "IR evaluation", expected, ir_bits);

    std::vector<uint8_t> ir_opt_bits =
        BitsFromIrOutputs(cp.ir_opt, Evaluate(cp.ir_opt, ir_inputs));
    if (ir_opt_bits != expected) {
      return fail(n, "optimized IR evaluation", expected, ir_opt_bits);
    }

    std::vector<uint8_t> gate_bits = EvaluateGates(cp.gates, bits);
    if (gate_bits != expected) {
      return fail(n, "gate evaluation", expected, gate_bits);
    }

    std::vector<uint8_t> gate_opt_bits = EvaluateGates(cp.gates_opt, bits);
    if (gate_opt_bits != expected) {
      return fail(n, "optimized gate evaluation", expected, gate_opt_bits);
    }

    ExecResult clear_run =
        Execute(cp.gates_opt, ImportGroups(cp.gates_opt, bits, clear), clear);
    std::vector<uint8_t> clear_bits = ExportGroups(clear_run.outputs, clear);
    if (clear_bits != expected) {
      return fail(n, "cleartext backend execution", expected, clear_bits);
    }

    if (options.check_fhe) {
      ExecResult fhe_run =
          Execute(cp.gates_opt, ImportGroups(cp.gates_opt, bits, fhe), fhe);
      std::vector<uint8_t> fhe_bits = ExportGroups(fhe_run.outputs, fhe);
      if (fhe_bits != expected) {
        return fail(n, "decrypted FHE backend execution", expected, fhe_bits);
      }
      if (fhe_bits != clear_bits) {
        return fail(n, "FHE/cleartext backend agreement", clear_bits, fhe_bits);
      }
    }

    ++result.cases_checked;
  }
  return result;
}

std::string ReadTestdataFile(const std::string& filename) {
  std::string path = std::string(TESTDATA_DIR) + "/" + filename;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::vector<std::string>& SuiteFiles() {
  static const std::vector<std::string> kFiles = {
      "add8.fhe.c",    "add16.fhe.c",  "bitops.fhe.c", "clamp8.fhe.c",
      "cmp6.fhe.c",    "divmod6.fhe.c", "lookup.fhe.c", "max8.fhe.c",
      "mul8.fhe.c",    "parity.fhe.c",  "point_abs.fhe.c",
      "sub8.fhe.c",    "sum4.fhe.c",
  };
  return kFiles;
}

}  // namespace fhec::testing
