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
// Circuit interpreter: groups gates into dependency levels and evaluates
// them against a GateBackend, optionally with a worker pool. Results are
// bit-identical for any worker count because each wire has exactly one
// writer and levels are separated by barriers.

#ifndef FHEC_RUNTIME_HPP_
#define FHEC_RUNTIME_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fhec/backend.hpp"
#include "fhec/gates.hpp"

namespace fhec {

// Gate indices grouped by longest-path depth: a gate's level is one past the
// deepest gate it reads (gates reading only inputs are level 0). Every gate
// appears exactly once; level k+1 gates depend only on inputs and levels<=k.
struct Schedule {
  std::vector<std::vector<uint32_t>> levels;

  size_t depth() const { return levels.size(); }
};

// Throws std::invalid_argument if the circuit is not well-formed.
Schedule ScheduleLevels(const GateCircuit& c);

// Checks a schedule against a circuit: exactly-once coverage and the
// dependency rule above. Empty result means valid.
std::vector<std::string> ValidateSchedule(const GateCircuit& c,
                                          const Schedule& s);

struct ExecStats {
  std::string backend_name;
  std::map<GateKind, size_t> gate_counts;
  size_t total_gates = 0;  // all gates evaluated, constants included
  size_t depth = 0;        // schedule levels
  int jobs = 1;
  double wall_seconds = 0.0;
  // Noisiest wire produced at each level (interesting with bootstrap off).
  std::vector<uint64_t> per_level_max_noise;

  std::string ToText() const;
  std::string ToKeyValueText() const;
};

struct ExecOptions {
  int jobs = 1;  // worker threads; must be >= 1
  // Optional precomputed schedule; validated before use.
  const Schedule* schedule = nullptr;
};

struct ExecResult {
  // One bit vector per output group, LSB first, group order.
  std::vector<std::vector<CiphertextBit>> outputs;
  ExecStats stats;
};

// Evaluates `c` on one bit vector per input group (group order, LSB first).
// Throws std::invalid_argument on shape mismatches or bad options; backend
// exceptions (noise overflow, key mismatch) propagate unchanged.
ExecResult Execute(const GateCircuit& c,
                   const std::vector<std::vector<CiphertextBit>>& inputs,
                   GateBackend& backend, const ExecOptions& options = {});

}  // namespace fhec

#endif  // FHEC_RUNTIME_HPP_
