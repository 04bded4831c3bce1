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
// fhec: compile restricted C-like sources to gate circuits and run them on
// a gate backend. Exit codes: 0 success, 1 compile/usage error, 2 noise
// overflow, 3 result mismatch.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fhec/ast.hpp"
#include "fhec/backend.hpp"
#include "fhec/booleanify.hpp"
#include "fhec/codec.hpp"
#include "fhec/diagnostics.hpp"
#include "fhec/frontend.hpp"
#include "fhec/gates.hpp"
#include "fhec/ir.hpp"
#include "fhec/layout.hpp"
#include "fhec/optimizer.hpp"
#include "fhec/runtime.hpp"

namespace {

using namespace fhec;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoise = 2;
constexpr int kExitMismatch = 3;

std::string ReadFileOrThrow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteFileOrThrow(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct CompileOptions {
  std::string entry = "main";
  std::string passes = "fold,dce,narrow";
  bool gate_opt = true;
};

// A named logical input or output, plus the circuit groups that carry its
// scalar leaves (in bit order).
struct IoSlot {
  std::string name;
  Layout layout;
  std::vector<size_t> groups;
};

struct Target {
  GateCircuit circuit;
  std::vector<IoSlot> inputs;
  std::vector<IoSlot> outputs;

  // Set when compiled from source.
  std::optional<IrFunction> ir;
  std::optional<IrFunction> ir_optimized;
  PassReport report;
  size_t raw_logic_gates = 0;
  size_t raw_depth = 0;
};

void PrintDiagnostics(const std::string& file,
                      const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) {
    std::cerr << FormatDiagnostic(file, d) << '\n';
  }
}

size_t CircuitDepth(const GateCircuit& c) {
  return c.gates.empty() ? 0 : ScheduleLevels(c).depth();
}

// Compiles a source file end to end; nullopt (with diagnostics on stderr)
// when the program is rejected.
std::optional<Target> CompileSource(const std::string& path,
                                    const CompileOptions& opts) {
  const std::string source = ReadFileOrThrow(path);
  ParseResult parsed = Parse(source);
  PrintDiagnostics(path, parsed.diagnostics);
  if (!parsed.program) return std::nullopt;

  std::vector<Diagnostic> restriction = CheckRestrictions(*parsed.program);
  PrintDiagnostics(path, restriction);
  if (HasErrors(restriction)) return std::nullopt;

  LowerResult lowered = LowerToIr(*parsed.program, opts.entry);
  PrintDiagnostics(path, lowered.diagnostics);
  if (!lowered.func) return std::nullopt;

  Target t;
  t.ir = *lowered.func;
  PipelineResult piped =
      RunPipeline(*lowered.func, PassPipeline::FromCommaList(opts.passes));
  t.ir_optimized = piped.func;
  t.report = piped.report;

  GateCircuit raw = Booleanify(piped.func);
  t.raw_logic_gates = raw.logic_gate_count();
  t.raw_depth = CircuitDepth(raw);
  t.circuit = opts.gate_opt ? GateOptimize(raw) : raw;

  const FuncDecl* fn = parsed.program->FindFunction(opts.entry);
  size_t group = 0;
  for (const Param& p : fn->params) {
    IoSlot slot;
    slot.name = p.name;
    slot.layout = DeriveLayout(*parsed.program, p.type);
    for (size_t i = 0; i < LayoutLeaves(slot.layout).size(); ++i) {
      slot.groups.push_back(group++);
    }
    t.inputs.push_back(std::move(slot));
  }
  IoSlot out;
  out.name = "out";
  out.layout = DeriveLayout(*parsed.program, fn->return_type);
  for (size_t i = 0; i < t.circuit.outputs.size(); ++i) out.groups.push_back(i);
  t.outputs.push_back(std::move(out));
  return t;
}

Target LoadGates(const std::string& path) {
  Target t;
  t.circuit = ParseGates(ReadFileOrThrow(path));
  for (size_t i = 0; i < t.circuit.inputs.size(); ++i) {
    const WireGroup& g = t.circuit.inputs[i];
    t.inputs.push_back({g.name, Layout::Scalar(g.width(), false), {i}});
  }
  for (size_t i = 0; i < t.circuit.outputs.size(); ++i) {
    const WireGroup& g = t.circuit.outputs[i];
    t.outputs.push_back({g.name, Layout::Scalar(g.width(), false), {i}});
  }
  return t;
}

std::optional<Target> LoadTarget(const std::string& path,
                                 const CompileOptions& opts) {
  if (EndsWith(path, ".gates")) return LoadGates(path);
  return CompileSource(path, opts);
}

struct BackendOptions {
  std::string backend = "fhe";
  std::string params = "tfhe_like";
  std::optional<uint64_t> seed;
};

SchemeParams ResolveParams(const BackendOptions& opts) {
  SchemeParams p;
  bool preset = false;
  for (const std::string& name : SchemeParams::PresetNames()) {
    if (name == opts.params) {
      p = SchemeParams::Preset(name);
      preset = true;
      break;
    }
  }
  if (!preset) p = SchemeParams::FromKeyValueText(ReadFileOrThrow(opts.params));
  if (opts.seed) p.key_seed = *opts.seed;
  return p;
}

std::unique_ptr<GateBackend> MakeBackend(const BackendOptions& opts) {
  if (opts.backend == "cleartext") {
    return std::make_unique<CleartextBackend>();
  }
  if (opts.backend == "fhe") {
    return std::make_unique<FheBackend>(ResolveParams(opts));
  }
  throw std::runtime_error("unknown backend '" + opts.backend +
                           "' (expected cleartext or fhe)");
}

// Splits an encoded value across the slot's circuit groups.
void EncryptSlot(const Target& t, const IoSlot& slot, const Value& value,
                 GateBackend& backend,
                 std::vector<std::vector<CiphertextBit>>& groups) {
  std::vector<uint8_t> bits = EncodeValue(value, slot.layout);
  size_t pos = 0;
  for (size_t gi : slot.groups) {
    std::vector<CiphertextBit>& dst = groups[gi];
    for (size_t k = 0; k < t.circuit.inputs[gi].wires.size(); ++k) {
      dst.push_back(backend.ImportBit(bits[pos++]));
    }
  }
}

Value DecryptSlot(const IoSlot& slot,
                  const std::vector<std::vector<CiphertextBit>>& outputs,
                  GateBackend& backend) {
  std::vector<CiphertextBit> bits;
  for (size_t gi : slot.groups) {
    bits.insert(bits.end(), outputs[gi].begin(), outputs[gi].end());
  }
  return DecryptValue(slot.layout, bits, backend);
}

// One evaluation of the target on parsed input values.
std::vector<Value> RunOnce(const Target& t, const std::vector<Value>& inputs,
                           GateBackend& backend, int jobs,
                           ExecStats* stats_out) {
  std::vector<std::vector<CiphertextBit>> groups(t.circuit.inputs.size());
  for (size_t i = 0; i < t.inputs.size(); ++i) {
    EncryptSlot(t, t.inputs[i], inputs[i], backend, groups);
  }
  ExecOptions exec;
  exec.jobs = jobs;
  ExecResult result = Execute(t.circuit, groups, backend, exec);
  if (stats_out) *stats_out = result.stats;
  std::vector<Value> out;
  for (const IoSlot& slot : t.outputs) {
    out.push_back(DecryptSlot(slot, result.outputs, backend));
  }
  return out;
}

int CmdTranspile(const std::string& file, const CompileOptions& opts,
                 const std::string& emit_ir, const std::string& emit_gates,
                 bool kv) {
  std::optional<Target> t = CompileSource(file, opts);
  if (!t) return kExitError;
  const size_t opt_logic = t->circuit.logic_gate_count();
  const size_t opt_depth = CircuitDepth(t->circuit);
  if (kv) {
    std::cout << "entry=" << opts.entry << '\n';
    std::cout << "ir_nodes=" << t->ir->nodes.size() << '\n';
    std::cout << "ir_nodes_optimized=" << t->ir_optimized->nodes.size()
              << '\n';
    std::cout << t->report.ToKeyValueText();
    std::cout << "logic_gates=" << t->raw_logic_gates << '\n';
    std::cout << "logic_gates_optimized=" << opt_logic << '\n';
    std::cout << "depth=" << t->raw_depth << '\n';
    std::cout << "depth_optimized=" << opt_depth << '\n';
  } else {
    std::cout << "entry: " << opts.entry << '\n';
    std::cout << "ir nodes: " << t->ir->nodes.size() << " -> "
              << t->ir_optimized->nodes.size() << '\n';
    std::cout << t->report.ToText();
    std::cout << "logic gates: " << t->raw_logic_gates;
    if (opts.gate_opt) std::cout << " -> " << opt_logic;
    std::cout << '\n';
    std::cout << "depth: " << t->raw_depth;
    if (opts.gate_opt) std::cout << " -> " << opt_depth;
    std::cout << '\n';
  }
  if (!emit_ir.empty()) WriteFileOrThrow(emit_ir, Serialize(*t->ir_optimized));
  if (!emit_gates.empty()) {
    WriteFileOrThrow(emit_gates, SerializeGates(t->circuit));
  }
  return kExitOk;
}

std::vector<Value> ParseNamedInputs(const Target& t,
                                    const std::vector<std::string>& in_flags) {
  std::vector<std::optional<Value>> parsed(t.inputs.size());
  for (const std::string& flag : in_flags) {
    const size_t eq = flag.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--in expects name=value, got '" + flag + "'");
    }
    const std::string name = flag.substr(0, eq);
    bool found = false;
    for (size_t i = 0; i < t.inputs.size(); ++i) {
      if (t.inputs[i].name != name) continue;
      parsed[i] = ParseValueLiteral(flag.substr(eq + 1), t.inputs[i].layout);
      found = true;
      break;
    }
    if (!found) throw std::runtime_error("no input named '" + name + "'");
  }
  std::vector<Value> values;
  for (size_t i = 0; i < t.inputs.size(); ++i) {
    if (!parsed[i]) {
      throw std::runtime_error(
          "missing input '" + t.inputs[i].name + "' (" +
          LayoutTypeName(t.inputs[i].layout) + "); pass --in " +
          t.inputs[i].name + "=...");
    }
    values.push_back(*parsed[i]);
  }
  return values;
}

int CmdRun(const std::string& file, const CompileOptions& opts,
           const BackendOptions& bopts, const std::vector<std::string>& ins,
           const std::string& expect, int jobs, bool show_stats, bool kv) {
  std::optional<Target> t = LoadTarget(file, opts);
  if (!t) return kExitError;
  std::unique_ptr<GateBackend> backend = MakeBackend(bopts);
  std::vector<Value> values = ParseNamedInputs(*t, ins);
  ExecStats stats;
  std::vector<Value> outputs;
  try {
    outputs = RunOnce(*t, values, *backend, jobs, &stats);
  } catch (const NoiseOverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoise;
  }
  for (size_t i = 0; i < outputs.size(); ++i) {
    std::cout << t->outputs[i].name << " = "
              << FormatValue(outputs[i], t->outputs[i].layout) << '\n';
  }
  if (show_stats) std::cout << (kv ? stats.ToKeyValueText() : stats.ToText());
  if (!expect.empty()) {
    if (t->outputs.size() != 1) {
      throw std::runtime_error("--expect needs a single-output circuit");
    }
    Value want = ParseValueLiteral(expect, t->outputs[0].layout);
    if (!(want == outputs[0])) {
      std::cerr << "mismatch: expected "
                << FormatValue(want, t->outputs[0].layout) << ", got "
                << FormatValue(outputs[0], t->outputs[0].layout) << '\n';
      return kExitMismatch;
    }
  }
  return kExitOk;
}

std::vector<std::string> SplitTokens(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> tokens;
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return tokens;
}

int CmdTestbench(const std::string& file, const std::string& bench,
                 const CompileOptions& opts, const BackendOptions& bopts,
                 int jobs) {
  std::optional<Target> t = LoadTarget(file, opts);
  if (!t) return kExitError;
  std::unique_ptr<GateBackend> backend = MakeBackend(bopts);

  const std::string text = ReadFileOrThrow(bench);
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  int cases = 0;
  int failures = 0;
  bool overflow = false;
  while (std::getline(lines, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (SplitTokens(line).empty()) continue;
    const size_t arrow = line.find("=>");
    if (arrow == std::string::npos) {
      throw std::runtime_error(bench + ":" + std::to_string(lineno) +
                               ": expected 'inputs => outputs'");
    }
    std::vector<std::string> in_toks = SplitTokens(line.substr(0, arrow));
    std::vector<std::string> out_toks = SplitTokens(line.substr(arrow + 2));
    if (in_toks.size() != t->inputs.size() ||
        out_toks.size() != t->outputs.size()) {
      throw std::runtime_error(
          bench + ":" + std::to_string(lineno) + ": expected " +
          std::to_string(t->inputs.size()) + " inputs and " +
          std::to_string(t->outputs.size()) + " outputs");
    }
    std::vector<Value> values;
    for (size_t i = 0; i < in_toks.size(); ++i) {
      values.push_back(ParseValueLiteral(in_toks[i], t->inputs[i].layout));
    }
    ++cases;
    std::vector<Value> outputs;
    try {
      outputs = RunOnce(*t, values, *backend, jobs, nullptr);
    } catch (const NoiseOverflowError& e) {
      std::cout << "case " << cases << ": noise overflow (" << e.what()
                << ")\n";
      overflow = true;
      continue;
    }
    bool ok = true;
    std::ostringstream detail;
    for (size_t i = 0; i < outputs.size(); ++i) {
      Value want = ParseValueLiteral(out_toks[i], t->outputs[i].layout);
      if (!(want == outputs[i])) {
        detail << (ok ? "" : ";") << " expected "
               << FormatValue(want, t->outputs[i].layout) << ", got "
               << FormatValue(outputs[i], t->outputs[i].layout);
        ok = false;
      }
    }
    if (!ok) {
      std::cout << "case " << cases << ": FAIL" << detail.str() << '\n';
      ++failures;
    }
  }
  std::cout << (cases - failures) << "/" << cases << " cases passed\n";
  if (overflow) return kExitNoise;
  return failures == 0 ? kExitOk : kExitMismatch;
}

int CmdStats(const std::string& file, const CompileOptions& opts, bool kv) {
  std::optional<Target> t = LoadTarget(file, opts);
  if (!t) return kExitError;
  const GateCircuit& c = t->circuit;
  Schedule sched = ScheduleLevels(c);
  size_t widest = 0;
  for (const auto& level : sched.levels) {
    widest = std::max(widest, level.size());
  }
  auto counts = c.counts_by_kind();
  if (kv) {
    std::cout << "circuit=" << c.name << '\n';
    std::cout << "input_wires=" << c.num_input_wires() << '\n';
    std::cout << "input_groups=" << c.inputs.size() << '\n';
    std::cout << "output_groups=" << c.outputs.size() << '\n';
    std::cout << "total_gates=" << c.gates.size() << '\n';
    std::cout << "logic_gates=" << c.logic_gate_count() << '\n';
    std::cout << "depth=" << sched.depth() << '\n';
    std::cout << "widest_level=" << widest << '\n';
    for (const auto& [kind, count] : counts) {
      std::cout << "count." << GateKindName(kind) << '=' << count << '\n';
    }
  } else {
    std::cout << "circuit: " << c.name << '\n';
    std::cout << "inputs:";
    for (const WireGroup& g : c.inputs) {
      std::cout << ' ' << g.name << ':' << g.width();
    }
    std::cout << " (" << c.num_input_wires() << " wires)\n";
    std::cout << "outputs:";
    for (const WireGroup& g : c.outputs) {
      std::cout << ' ' << g.name << ':' << g.width();
    }
    std::cout << '\n';
    std::cout << "gates: " << c.gates.size() << " total, "
              << c.logic_gate_count() << " logic";
    bool first = true;
    for (const auto& [kind, count] : counts) {
      std::cout << (first ? " (" : ", ") << GateKindName(kind) << ' '
                << count;
      first = false;
    }
    if (!first) std::cout << ')';
    std::cout << '\n';
    std::cout << "depth: " << sched.depth() << '\n';
    std::cout << "widest level: " << widest << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fhec: restricted C-like programs to boolean gate circuits"};
  app.require_subcommand(1);

  CompileOptions copts;
  BackendOptions bopts;
  std::vector<std::string> ins;
  std::string file, bench, expect, emit_ir, emit_gates;
  uint64_t seed = 0;
  int jobs = 1;
  bool kv = false, show_stats = false;

  auto add_compile_flags = [&](CLI::App* sub) {
    sub->add_option("--entry", copts.entry, "Entry function")
        ->capture_default_str();
    sub->add_option("--passes", copts.passes,
                    "Comma-separated IR passes (empty for none)")
        ->capture_default_str();
    sub->add_flag("!--no-gate-opt", copts.gate_opt,
                  "Skip gate-level cleanup");
  };
  auto add_backend_flags = [&](CLI::App* sub) {
    sub->add_option("--backend", bopts.backend, "cleartext or fhe")
        ->capture_default_str();
    sub->add_option("--params", bopts.params,
                    "Scheme parameter preset name or key=value file")
        ->capture_default_str();
    auto* seed_opt =
        sub->add_option("--seed", seed, "Override the key seed");
    sub->parse_complete_callback([&, seed_opt] {
      if (seed_opt->count() > 0) bopts.seed = seed;
    });
    sub->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  };

  CLI::App* transpile =
      app.add_subcommand("transpile", "Compile and report stage sizes");
  transpile->add_option("file", file, "Source file")->required();
  add_compile_flags(transpile);
  transpile->add_option("--emit-ir", emit_ir,
                        "Write optimized IR to a file ('-' for stdout)");
  transpile->add_option("--emit-gates", emit_gates,
                        "Write the gate circuit to a file ('-' for stdout)");
  transpile->add_flag("--kv", kv, "Machine-readable key=value output");

  CLI::App* run = app.add_subcommand("run", "Compile and execute");
  run->add_option("file", file, "Source (.fhe.c) or circuit (.gates) file")
      ->required();
  add_compile_flags(run);
  add_backend_flags(run);
  run->add_option("--in", ins, "Input value as name=literal (repeatable)");
  run->add_option("--expect", expect, "Fail (exit 3) unless output matches");
  run->add_flag("--stats", show_stats, "Print execution stats");
  run->add_flag("--kv", kv, "Machine-readable stats");

  CLI::App* testbench =
      app.add_subcommand("testbench", "Run 'inputs => outputs' cases");
  testbench->add_option("file", file, "Source or circuit file")->required();
  testbench->add_option("bench", bench, "Testbench file")->required();
  add_compile_flags(testbench);
  add_backend_flags(testbench);

  CLI::App* stats = app.add_subcommand("stats", "Circuit shape summary");
  stats->add_option("file", file, "Source or circuit file")->required();
  add_compile_flags(stats);
  stats->add_flag("--kv", kv, "Machine-readable key=value output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(transpile)) {
      return CmdTranspile(file, copts, emit_ir, emit_gates, kv);
    }
    if (app.got_subcommand(run)) {
      return CmdRun(file, copts, bopts, ins, expect, jobs, show_stats, kv);
    }
    if (app.got_subcommand(testbench)) {
      return CmdTestbench(file, bench, copts, bopts, jobs);
    }
    if (app.got_subcommand(stats)) {
      return CmdStats(file, copts, kv);
    }
  } catch (const GatesParseError& e) {
    std::cerr << "error: " << file << ':' << e.line() << ':' << e.col()
              << ": " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
