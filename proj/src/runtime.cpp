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

#include "fhec/runtime.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fhec {

Schedule ScheduleLevels(const GateCircuit& c) {
  std::vector<CircuitViolation> violations = ValidateCircuit(c);
  if (!violations.empty()) {
    throw std::invalid_argument("circuit is not well-formed: " +
                                violations[0].message);
  }
  const uint32_t base = c.num_input_wires();
  std::vector<uint32_t> level(c.gates.size(), 0);
  uint32_t deepest = 0;
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    uint32_t lv = 0;
    for (int k = 0; k < GateArity(g.kind); ++k) {
      if (g.operands[k] >= base) {
        lv = std::max(lv, level[g.operands[k] - base] + 1);
      }
    }
    level[i] = lv;
    deepest = std::max(deepest, lv);
  }
  Schedule s;
  if (!c.gates.empty()) s.levels.resize(deepest + 1);
  for (size_t i = 0; i < c.gates.size(); ++i) {
    s.levels[level[i]].push_back(static_cast<uint32_t>(i));
  }
  return s;
}

std::vector<std::string> ValidateSchedule(const GateCircuit& c,
                                          const Schedule& s) {
  std::vector<std::string> issues;
  if (!IsWellFormed(c)) {
    issues.push_back("circuit is not well-formed");
    return issues;
  }
  const uint32_t base = c.num_input_wires();
  std::vector<int64_t> assigned(c.gates.size(), -1);
  for (size_t lv = 0; lv < s.levels.size(); ++lv) {
    for (uint32_t idx : s.levels[lv]) {
      if (idx >= c.gates.size()) {
        issues.push_back("gate index " + std::to_string(idx) +
                         " is out of range");
        continue;
      }
      if (assigned[idx] >= 0) {
        issues.push_back("gate " + std::to_string(idx) +
                         " is scheduled more than once");
        continue;
      }
      assigned[idx] = static_cast<int64_t>(lv);
    }
  }
  for (size_t i = 0; i < assigned.size(); ++i) {
    if (assigned[i] < 0) {
      issues.push_back("gate " + std::to_string(i) + " is never scheduled");
    }
  }
  if (!issues.empty()) return issues;
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    for (int k = 0; k < GateArity(g.kind); ++k) {
      if (g.operands[k] < base) continue;
      const size_t dep = g.operands[k] - base;
      if (assigned[dep] >= assigned[i]) {
        issues.push_back("gate " + std::to_string(i) +
                         " depends on gate " + std::to_string(dep) +
                         " scheduled at the same or a later level");
      }
    }
  }
  return issues;
}

std::string ExecStats::ToText() const {
  std::ostringstream os;
  os << "backend: " << backend_name << '\n';
  os << "gates: " << total_gates;
  bool first = true;
  for (const auto& [kind, count] : gate_counts) {
    os << (first ? " (" : ", ") << GateKindName(kind) << ' ' << count;
    first = false;
  }
  if (!first) os << ')';
  os << '\n';
  os << "depth: " << depth << '\n';
  os << "jobs: " << jobs << '\n';
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", wall_seconds);
  os << "wall_seconds: " << buf << '\n';
  if (!per_level_max_noise.empty()) {
    os << "max noise by level:";
    for (uint64_t n : per_level_max_noise) os << ' ' << n;
    os << '\n';
  }
  return os.str();
}

std::string ExecStats::ToKeyValueText() const {
  std::ostringstream os;
  os << "backend=" << backend_name << '\n';
  os << "total_gates=" << total_gates << '\n';
  os << "depth=" << depth << '\n';
  os << "jobs=" << jobs << '\n';
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", wall_seconds);
  os << "wall_seconds=" << buf << '\n';
  for (const auto& [kind, count] : gate_counts) {
    os << "count." << GateKindName(kind) << '=' << count << '\n';
  }
  for (size_t i = 0; i < per_level_max_noise.size(); ++i) {
    os << "level_noise." << i << '=' << per_level_max_noise[i] << '\n';
  }
  return os.str();
}

ExecResult Execute(const GateCircuit& c,
                   const std::vector<std::vector<CiphertextBit>>& inputs,
                   GateBackend& backend, const ExecOptions& options) {
  if (options.jobs < 1) {
    throw std::invalid_argument("jobs must be at least 1");
  }
  Schedule computed;
  const Schedule* sched = options.schedule;
  if (sched != nullptr) {
    std::vector<std::string> issues = ValidateSchedule(c, *sched);
    if (!issues.empty()) {
      throw std::invalid_argument("invalid schedule: " + issues[0]);
    }
  } else {
    computed = ScheduleLevels(c);  // also validates the circuit
    sched = &computed;
  }
  if (inputs.size() != c.inputs.size()) {
    throw std::invalid_argument(
        "expected " + std::to_string(c.inputs.size()) +
        " input groups, got " + std::to_string(inputs.size()));
  }
  std::vector<CiphertextBit> wires(c.num_wires());
  {
    size_t w = 0;
    for (size_t g = 0; g < inputs.size(); ++g) {
      if (inputs[g].size() != c.inputs[g].wires.size()) {
        throw std::invalid_argument(
            "input group '" + c.inputs[g].name + "' expects " +
            std::to_string(c.inputs[g].wires.size()) + " bits, got " +
            std::to_string(inputs[g].size()));
      }
      for (const CiphertextBit& bit : inputs[g]) wires[w++] = bit;
    }
  }

  const uint32_t base = c.num_input_wires();
  auto eval_gate = [&](uint32_t idx) {
    const Gate& g = c.gates[idx];
    std::array<CiphertextBit, 3> ops;
    const int arity = GateArity(g.kind);
    for (int k = 0; k < arity; ++k) ops[k] = wires[g.operands[k]];
    wires[base + idx] = ApplyGate(
        backend, g.kind,
        std::span<const CiphertextBit>(ops.data(), static_cast<size_t>(arity)));
  };

  const auto t0 = std::chrono::steady_clock::now();
  if (options.jobs == 1) {
    for (const std::vector<uint32_t>& level : sched->levels) {
      for (uint32_t idx : level) eval_gate(idx);
    }
  } else {
    const int jobs = options.jobs;
    std::barrier sync(jobs);
    std::mutex err_mu;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto work = [&](int worker) {
      for (const std::vector<uint32_t>& level : sched->levels) {
        if (!failed.load(std::memory_order_acquire)) {
          for (size_t k = static_cast<size_t>(worker); k < level.size();
               k += static_cast<size_t>(jobs)) {
            try {
              eval_gate(level[k]);
            } catch (...) {
              std::lock_guard<std::mutex> lock(err_mu);
              if (!err) err = std::current_exception();
              failed.store(true, std::memory_order_release);
              break;
            }
          }
        }
        sync.arrive_and_wait();
      }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < jobs; ++w) pool.emplace_back(work, w);
    work(0);
    for (std::thread& t : pool) t.join();
    if (err) std::rethrow_exception(err);
  }
  const auto t1 = std::chrono::steady_clock::now();

  ExecResult result;
  result.stats.backend_name = std::string(backend.name());
  result.stats.gate_counts = c.counts_by_kind();
  result.stats.total_gates = c.gates.size();
  result.stats.depth = sched->levels.size();
  result.stats.jobs = options.jobs;
  result.stats.wall_seconds =
      std::chrono::duration<double>(t1 - t0).count();
  for (const std::vector<uint32_t>& level : sched->levels) {
    uint64_t worst = 0;
    for (uint32_t idx : level) {
      worst = std::max(worst, wires[base + idx].noise);
    }
    result.stats.per_level_max_noise.push_back(worst);
  }
  for (const WireGroup& g : c.outputs) {
    std::vector<CiphertextBit> bits;
    for (WireId w : g.wires) bits.push_back(wires[w]);
    result.outputs.push_back(std::move(bits));
  }
  return result;
}

}  // namespace fhec
