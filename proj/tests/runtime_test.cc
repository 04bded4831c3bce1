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
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include "fhec/backend.hpp"
#include "fhec/gates.hpp"
#include "support/random_circuit.hpp"

namespace fhec {
namespace {

using testing::RandomGateCircuit;

std::vector<std::vector<CiphertextBit>> ImportGroups(
    const GateCircuit& c, const std::vector<uint8_t>& bits,
    GateBackend& backend) {
  std::vector<std::vector<CiphertextBit>> groups;
  size_t at = 0;
  for (const auto& group : c.inputs) {
    std::vector<CiphertextBit> wires;
    for (size_t i = 0; i < group.wires.size(); ++i) {
      wires.push_back(backend.ImportBit(bits[at++]));
    }
    groups.push_back(std::move(wires));
  }
  return groups;
}

std::vector<uint8_t> ExportAll(const ExecResult& result,
                               GateBackend& backend) {
  std::vector<uint8_t> bits;
  for (const auto& group : result.outputs) {
    for (const auto& bit : group) bits.push_back(backend.ExportBit(bit));
  }
  return bits;
}

// w2 = a & b, w3 = ~w2, w4 = w2 ^ w3 (always 1).
GateCircuit SmallCircuit() {
  GateCircuit c;
  c.name = "small";
  c.inputs = {{"a", {0}}, {"b", {1}}};
  c.gates = {
      {GateKind::kAnd, {0, 1, 0}},
      {GateKind::kNot, {2, 0, 0}},
      {GateKind::kXor, {2, 3, 0}},
  };
  c.outputs = {{"out", {4}}};
  return c;
}

TEST(ScheduleTest, LevelsFollowLongestPath) {
  Schedule s = ScheduleLevels(SmallCircuit());
  // AND depends on inputs only; NOT depends on AND; XOR on both.
  ASSERT_EQ(s.levels.size(), 3u);
  EXPECT_EQ(s.levels[0], std::vector<uint32_t>{0});
  EXPECT_EQ(s.levels[1], std::vector<uint32_t>{1});
  EXPECT_EQ(s.levels[2], std::vector<uint32_t>{2});
  EXPECT_EQ(s.depth(), 3u);
}

TEST(ScheduleTest, IndependentGatesShareALevel) {
  GateCircuit c;
  c.name = "flat";
  c.inputs = {{"a", {0}}, {"b", {1}}};
  c.gates = {
      {GateKind::kAnd, {0, 1, 0}},
      {GateKind::kOr, {0, 1, 0}},
      {GateKind::kXor, {0, 1, 0}},
  };
  c.outputs = {{"out", {2, 3, 4}}};
  Schedule s = ScheduleLevels(c);
  ASSERT_EQ(s.levels.size(), 1u);
  EXPECT_EQ(s.levels[0].size(), 3u);
}

TEST(ScheduleTest, ValidateAcceptsPermutationWithinLevels) {
  GateCircuit c = RandomGateCircuit(7, 16, 400, 8);
  Schedule s = ScheduleLevels(c);
  EXPECT_TRUE(ValidateSchedule(c, s).empty());

  std::mt19937_64 rng(99);
  for (auto& level : s.levels) {
    std::shuffle(level.begin(), level.end(), rng);
  }
  EXPECT_TRUE(ValidateSchedule(c, s).empty());
}

TEST(ScheduleTest, ValidateRejectsBrokenSchedules) {
  GateCircuit c = SmallCircuit();
  Schedule s = ScheduleLevels(c);

  Schedule missing = s;
  missing.levels.back().clear();
  EXPECT_FALSE(ValidateSchedule(c, missing).empty());

  Schedule duplicated = s;
  duplicated.levels[0].push_back(0);
  EXPECT_FALSE(ValidateSchedule(c, duplicated).empty());

  Schedule out_of_range = s;
  out_of_range.levels[0][0] = 17;
  EXPECT_FALSE(ValidateSchedule(c, out_of_range).empty());

  // NOT(w2) scheduled before AND produces w2.
  Schedule reordered = s;
  std::swap(reordered.levels[0][0], reordered.levels[1][0]);
  EXPECT_FALSE(ValidateSchedule(c, reordered).empty());
}

TEST(ExecuteTest, MatchesDirectGateEvaluation) {
  std::mt19937_64 rng(0x7777);
  CleartextBackend backend;
  for (int trial = 0; trial < 10; ++trial) {
    GateCircuit c = RandomGateCircuit(rng(), 24, 500, 16);
    for (int n = 0; n < 20; ++n) {
      std::vector<uint8_t> bits(24);
      for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);
      ExecResult run = Execute(c, ImportGroups(c, bits, backend), backend);
      EXPECT_EQ(ExportAll(run, backend), EvaluateGates(c, bits));
    }
  }
}

TEST(ExecuteTest, ChecksInputShapes) {
  CleartextBackend backend;
  GateCircuit c = SmallCircuit();
  std::vector<std::vector<CiphertextBit>> too_few = {{backend.ImportBit(1)}};
  EXPECT_THROW(Execute(c, too_few, backend), std::invalid_argument);

  std::vector<std::vector<CiphertextBit>> bad_width = {
      {backend.ImportBit(1), backend.ImportBit(0)}, {backend.ImportBit(1)}};
  EXPECT_THROW(Execute(c, bad_width, backend), std::invalid_argument);

  ExecOptions bad_jobs;
  bad_jobs.jobs = 0;
  std::vector<std::vector<CiphertextBit>> ok = {{backend.ImportBit(1)},
                                                {backend.ImportBit(0)}};
  EXPECT_THROW(Execute(c, ok, backend, bad_jobs), std::invalid_argument);
}

TEST(ExecuteTest, RejectsInvalidExplicitSchedule) {
  CleartextBackend backend;
  GateCircuit c = SmallCircuit();
  Schedule bad = ScheduleLevels(c);
  bad.levels[0].push_back(2);  // duplicate
  ExecOptions options;
  options.schedule = &bad;
  std::vector<std::vector<CiphertextBit>> in = {{backend.ImportBit(1)},
                                                {backend.ImportBit(0)}};
  EXPECT_THROW(Execute(c, in, backend, options), std::invalid_argument);
}

TEST(ExecuteTest, StatsDescribeTheRun) {
  CleartextBackend backend;
  GateCircuit c = SmallCircuit();
  std::vector<std::vector<CiphertextBit>> in = {{backend.ImportBit(1)},
                                                {backend.ImportBit(1)}};
  ExecOptions options;
  options.jobs = 2;
  ExecResult run = Execute(c, in, backend, options);
  EXPECT_EQ(run.stats.backend_name, "cleartext");
  EXPECT_EQ(run.stats.total_gates, 3u);
  EXPECT_EQ(run.stats.depth, 3u);
  EXPECT_EQ(run.stats.jobs, 2);
  EXPECT_EQ(run.stats.gate_counts[GateKind::kAnd], 1u);
  EXPECT_EQ(run.stats.per_level_max_noise.size(), 3u);
  std::string kv = run.stats.ToKeyValueText();
  EXPECT_NE(kv.find("backend=cleartext"), std::string::npos);
  EXPECT_NE(kv.find("total_gates=3"), std::string::npos);
  EXPECT_NE(kv.find("count.AND=1"), std::string::npos);
}

TEST(ExecuteTest, PerLevelNoiseTracksBackendModel) {
  SchemeParams p = SchemeParams::Preset("leveled_small");
  FheBackend backend(p);
  // A 3-level XOR ladder: noise 20, 30, 40 by level.
  GateCircuit c;
  c.name = "ladder";
  c.inputs = {{"a", {0}}, {"b", {1}}};
  c.gates = {
      {GateKind::kXor, {0, 1, 0}},
      {GateKind::kXor, {2, 0, 0}},
      {GateKind::kXor, {3, 1, 0}},
  };
  c.outputs = {{"out", {4}}};
  ExecResult run = Execute(c, ImportGroups(c, {1, 0}, backend), backend);
  EXPECT_EQ(run.stats.per_level_max_noise,
            (std::vector<uint64_t>{20, 30, 40}));
  EXPECT_EQ(backend.ExportBit(run.outputs[0][0]), 0);
}

TEST(ExecuteTest, EmptyCircuitPassesInputsThrough) {
  CleartextBackend backend;
  GateCircuit c;
  c.name = "wires_only";
  c.inputs = {{"a", {0, 1}}};
  c.outputs = {{"out", {1, 0}}};  // swapped passthrough
  ExecResult run = Execute(c, ImportGroups(c, {1, 0}, backend), backend);
  EXPECT_EQ(ExportAll(run, backend), (std::vector<uint8_t>{0, 1}));
  EXPECT_EQ(run.stats.total_gates, 0u);
}

// Decrypted results must not depend on worker count or on the order gates
// run within a level.
TEST(ExecuteTest, ParallelRunsAreDeterministic) {
  GateCircuit c = RandomGateCircuit(0xD17E, 32, 6000, 32);
  ASSERT_GE(c.gates.size(), 5000u);
  std::vector<uint8_t> bits(32);
  std::mt19937_64 rng(5);
  for (auto& b : bits) b = static_cast<uint8_t>(rng() & 1);

  SchemeParams params;  // per-gate mode handles any depth
  FheBackend backend(params);
  ExecResult baseline = Execute(c, ImportGroups(c, bits, backend), backend);
  std::vector<uint8_t> expected = ExportAll(baseline, backend);
  EXPECT_EQ(expected, EvaluateGates(c, bits));

  for (int jobs : {1, 2, 8}) {
    ExecOptions options;
    options.jobs = jobs;
    ExecResult run =
        Execute(c, ImportGroups(c, bits, backend), backend, options);
    EXPECT_EQ(ExportAll(run, backend), expected) << "jobs=" << jobs;
  }

  // Randomized orders within each level, still a valid schedule.
  for (uint64_t shuffle_seed : {1u, 2u, 3u}) {
    Schedule s = ScheduleLevels(c);
    std::mt19937_64 shuffle_rng(shuffle_seed);
    for (auto& level : s.levels) {
      std::shuffle(level.begin(), level.end(), shuffle_rng);
    }
    ASSERT_TRUE(ValidateSchedule(c, s).empty());
    ExecOptions options;
    options.jobs = 4;
    options.schedule = &s;
    ExecResult run =
        Execute(c, ImportGroups(c, bits, backend), backend, options);
    EXPECT_EQ(ExportAll(run, backend), expected)
        << "shuffle seed " << shuffle_seed;
  }
}

TEST(ExecuteTest, WorkerExceptionsPropagate) {
  // Feeding cleartext bits into the FHE backend fails inside worker
  // threads; the error must surface as KeyMismatchError, not a hang.
  GateCircuit c = RandomGateCircuit(0xE44, 16, 800, 8);
  CleartextBackend clear;
  FheBackend fhe(SchemeParams{});
  std::vector<uint8_t> bits(16, 1);
  auto plain_inputs = ImportGroups(c, bits, clear);
  for (int jobs : {1, 4}) {
    ExecOptions options;
    options.jobs = jobs;
    EXPECT_THROW(Execute(c, plain_inputs, fhe, options), KeyMismatchError)
        << "jobs=" << jobs;
  }
}

}  // namespace
}  // namespace fhec
