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

#include "fhec/backend.hpp"

#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

namespace fhec {
namespace {

// Evaluates one gate on plaintext operand bits through a backend and
// decrypts the result.
uint8_t RunGate(GateBackend& backend, GateKind kind,
                std::vector<uint8_t> operand_bits) {
  std::vector<CiphertextBit> operands;
  for (uint8_t b : operand_bits) operands.push_back(backend.ImportBit(b));
  return backend.ExportBit(ApplyGate(backend, kind, operands));
}

uint8_t TruthTable(GateKind kind, uint64_t pattern) {
  uint8_t a = pattern & 1, b = (pattern >> 1) & 1, c = (pattern >> 2) & 1;
  switch (kind) {
    case GateKind::kAnd: return a & b;
    case GateKind::kOr: return a | b;
    case GateKind::kXor: return a ^ b;
    case GateKind::kNot: return !a;
    case GateKind::kMux: return a ? b : c;  // operands: selector, then, else
    case GateKind::kConst0: return 0;
    case GateKind::kConst1: return 1;
    case GateKind::kCopy: return a;
  }
  return 0;
}

// --- Parameters -------------------------------------------------------------

TEST(SchemeParamsTest, DefaultAndPresetsValidate) {
  EXPECT_TRUE(SchemeParams().Validate().empty());
  for (const std::string& name : SchemeParams::PresetNames()) {
    EXPECT_TRUE(SchemeParams::Preset(name).Validate().empty()) << name;
  }
  EXPECT_THROW(SchemeParams::Preset("nope"), std::invalid_argument);
}

TEST(SchemeParamsTest, PresetValuesAreStable) {
  SchemeParams tfhe = SchemeParams::Preset("tfhe_like");
  EXPECT_EQ(tfhe.bootstrap_mode, BootstrapMode::kPerGate);
  EXPECT_EQ(tfhe.noise_budget, 100u);
  EXPECT_EQ(tfhe.fresh_noise, 5u);
  EXPECT_EQ(tfhe.refresh_noise, 5u);

  SchemeParams small = SchemeParams::Preset("leveled_small");
  EXPECT_EQ(small.bootstrap_mode, BootstrapMode::kOff);
  EXPECT_EQ(small.noise_budget, 170u);
  EXPECT_EQ(small.fresh_noise, 10u);
  // Uniform increment of 10 for two-input logic: depth (170-10)/10 == 16.
  EXPECT_EQ(small.gate_noise[static_cast<size_t>(GateKind::kAnd)], 10u);
  EXPECT_EQ(small.gate_noise[static_cast<size_t>(GateKind::kXor)], 10u);

  SchemeParams large = SchemeParams::Preset("leveled_large");
  EXPECT_EQ(large.noise_budget, 1290u);
  EXPECT_EQ((large.noise_budget - large.fresh_noise) /
                large.gate_noise[static_cast<size_t>(GateKind::kAnd)],
            128u);
}

TEST(SchemeParamsTest, ValidateCatchesBadBudgets) {
  SchemeParams p;
  p.noise_budget = 0;
  EXPECT_FALSE(p.Validate().empty());

  p = SchemeParams();
  p.fresh_noise = p.noise_budget + 1;
  EXPECT_FALSE(p.Validate().empty());

  p = SchemeParams();  // per-gate: refreshed output + worst gate must fit
  p.refresh_noise = p.noise_budget;
  EXPECT_FALSE(p.Validate().empty());
}

TEST(SchemeParamsTest, KeyValueTextRoundTrips) {
  SchemeParams p = SchemeParams::Preset("leveled_small");
  p.key_seed = 77;
  p.gate_noise[static_cast<size_t>(GateKind::kMux)] = 21;
  SchemeParams back = SchemeParams::FromKeyValueText(p.ToKeyValueText());
  EXPECT_EQ(back, p);
}

TEST(SchemeParamsTest, FromKeyValueTextParsesAndRejects) {
  SchemeParams p = SchemeParams::FromKeyValueText(
      "# comment\n"
      "bootstrap = off\n"
      "noise_budget = 300\n"
      "gate.AND = 12\n");
  EXPECT_EQ(p.bootstrap_mode, BootstrapMode::kOff);
  EXPECT_EQ(p.noise_budget, 300u);
  EXPECT_EQ(p.gate_noise[static_cast<size_t>(GateKind::kAnd)], 12u);

  EXPECT_THROW(SchemeParams::FromKeyValueText("mystery = 1\n"),
               std::invalid_argument);
  EXPECT_THROW(SchemeParams::FromKeyValueText("noise_budget = soon\n"),
               std::invalid_argument);
  EXPECT_THROW(SchemeParams::FromKeyValueText("bootstrap = maybe\n"),
               std::invalid_argument);
}

TEST(SchemeParamsTest, HashCoversSemanticsNotSeed) {
  SchemeParams a;
  SchemeParams b = a;
  b.key_seed = 999;  // different key, same scheme
  EXPECT_EQ(ParamsHash(a), ParamsHash(b));
  b = a;
  b.noise_budget += 1;
  EXPECT_NE(ParamsHash(a), ParamsHash(b));
  b = a;
  b.bootstrap_mode = BootstrapMode::kOff;
  EXPECT_NE(ParamsHash(a), ParamsHash(b));
}

TEST(KeygenTest, DeterministicPerSeedAndParams) {
  SchemeParams p;
  SecretKey k1 = Keygen(p);
  SecretKey k2 = Keygen(p);
  EXPECT_EQ(k1.material, k2.material);
  EXPECT_EQ(k1.tag, k2.tag);
  EXPECT_NE(k1.tag, 0u);  // 0 is reserved for cleartext bits

  p.key_seed = 2;
  EXPECT_NE(Keygen(p).tag, k1.tag);
}

// --- Cleartext backend ------------------------------------------------------

TEST(CleartextBackendTest, GateTruthTables) {
  CleartextBackend backend;
  for (GateKind kind :
       {GateKind::kAnd, GateKind::kOr, GateKind::kXor, GateKind::kNot,
        GateKind::kMux, GateKind::kConst0, GateKind::kConst1,
        GateKind::kCopy}) {
    int arity = GateArity(kind);
    for (uint64_t pattern = 0; pattern < (uint64_t{1} << arity); ++pattern) {
      std::vector<uint8_t> bits;
      for (int i = 0; i < arity; ++i) bits.push_back((pattern >> i) & 1);
      EXPECT_EQ(RunGate(backend, kind, bits), TruthTable(kind, pattern))
          << GateKindName(kind) << " pattern " << pattern;
    }
  }
}

TEST(CleartextBackendTest, BitsAreUntaggedAndNoiseless) {
  CleartextBackend backend;
  CiphertextBit bit = backend.ImportBit(1);
  EXPECT_EQ(bit.key_tag, 0u);
  EXPECT_EQ(bit.noise, 0u);
  EXPECT_EQ(backend.ExportBit(bit), 1);
}

TEST(CleartextBackendTest, RejectsEncryptedBits) {
  CleartextBackend clear;
  FheBackend fhe(SchemeParams{});
  CiphertextBit encrypted = fhe.EncryptBit(1);
  EXPECT_THROW(clear.ExportBit(encrypted), KeyMismatchError);
  EXPECT_THROW(clear.Not(encrypted), KeyMismatchError);
}

// --- FHE backend ------------------------------------------------------------

TEST(FheBackendTest, RejectsInvalidParams) {
  SchemeParams p;
  p.noise_budget = 0;
  EXPECT_THROW(FheBackend{p}, std::invalid_argument);
}

TEST(FheBackendTest, EncryptDecryptRoundTrips) {
  FheBackend backend(SchemeParams{});
  for (int n = 0; n < 64; ++n) {
    uint8_t bit = n & 1;
    CiphertextBit ct = backend.EncryptBit(bit);
    EXPECT_EQ(ct.key_tag, backend.key_tag());
    EXPECT_EQ(ct.noise, backend.params().fresh_noise);
    EXPECT_EQ(backend.DecryptBit(ct), bit);
  }
}

TEST(FheBackendTest, PayloadsAreMasked) {
  FheBackend backend(SchemeParams{});
  // If payloads leaked plaintext, encrypting zero would always store zero.
  std::set<uint64_t> nonces;
  int ones = 0;
  for (int n = 0; n < 256; ++n) {
    CiphertextBit ct = backend.EncryptBit(0);
    ones += ct.masked_payload;
    EXPECT_TRUE(nonces.insert(ct.nonce).second) << "nonce reused";
  }
  EXPECT_GT(ones, 64);   // masks flip a healthy fraction of payloads
  EXPECT_LT(ones, 192);
}

TEST(FheBackendTest, GateTruthTablesUnderEncryption) {
  FheBackend backend(SchemeParams{});
  for (GateKind kind :
       {GateKind::kAnd, GateKind::kOr, GateKind::kXor, GateKind::kNot,
        GateKind::kMux, GateKind::kConst0, GateKind::kConst1,
        GateKind::kCopy}) {
    int arity = GateArity(kind);
    for (uint64_t pattern = 0; pattern < (uint64_t{1} << arity); ++pattern) {
      std::vector<uint8_t> bits;
      for (int i = 0; i < arity; ++i) bits.push_back((pattern >> i) & 1);
      EXPECT_EQ(RunGate(backend, kind, bits), TruthTable(kind, pattern))
          << GateKindName(kind) << " pattern " << pattern;
    }
  }
}

TEST(FheBackendTest, GateOutputsStayMaskedUntilDecrypt) {
  FheBackend backend(SchemeParams{});
  CiphertextBit a = backend.EncryptBit(1);
  CiphertextBit b = backend.EncryptBit(0);
  uint64_t boundary_before = backend.unmask_calls();
  CiphertextBit x = backend.And(a, b);
  x = backend.Or(x, a);
  x = backend.Xor(x, b);
  x = backend.Mux(a, x, b);
  EXPECT_EQ(backend.unmask_calls(), boundary_before);  // no gate unmasked
  EXPECT_EQ(backend.DecryptBit(x), 1);
  EXPECT_EQ(backend.unmask_calls(), boundary_before + 1);
}

TEST(FheBackendTest, PerGateModeRefreshesEveryOutput) {
  SchemeParams p;  // per-gate bootstrapping
  FheBackend backend(p);
  CiphertextBit a = backend.EncryptBit(1);
  CiphertextBit b = backend.EncryptBit(1);
  EXPECT_EQ(backend.And(a, b).noise, p.refresh_noise);
  EXPECT_EQ(backend.Xor(a, b).noise, p.refresh_noise);
  EXPECT_EQ(backend.Not(a).noise, p.refresh_noise);
  EXPECT_EQ(backend.Mux(a, a, b).noise, p.refresh_noise);
  EXPECT_EQ(backend.Constant(true).noise, 0u);
  // Unbounded depth: chain far past the budget and still decrypt.
  CiphertextBit x = a;
  for (int i = 0; i < 1000; ++i) x = backend.Xor(x, b);
  EXPECT_EQ(x.noise, p.refresh_noise);
  EXPECT_EQ(backend.DecryptBit(x), 1);  // an even number of flips lands on 1
}

TEST(FheBackendTest, LeveledModeAccumulatesNoise) {
  SchemeParams p = SchemeParams::Preset("leveled_small");
  FheBackend backend(p);
  CiphertextBit a = backend.EncryptBit(1);
  CiphertextBit b = backend.EncryptBit(0);
  // max(operand noise) + per-kind increment.
  CiphertextBit x = backend.And(a, b);
  EXPECT_EQ(x.noise, 10u + 10u);
  CiphertextBit y = backend.Xor(x, a);
  EXPECT_EQ(y.noise, 20u + 10u);
  EXPECT_EQ(backend.Copy(y).noise, y.noise);  // COPY adds nothing
  EXPECT_EQ(backend.Constant(false).noise, 0u);
}

TEST(FheBackendTest, DecryptEnforcesBudgetExactly) {
  SchemeParams p = SchemeParams::Preset("leveled_small");
  FheBackend backend(p);
  CiphertextBit zero = backend.EncryptBit(0);
  CiphertextBit x = backend.EncryptBit(1);
  // Each XOR adds 10; after 16 gates noise is exactly 170 == budget.
  for (int depth = 1; depth <= 16; ++depth) x = backend.Xor(x, zero);
  EXPECT_EQ(x.noise, p.noise_budget);
  EXPECT_EQ(backend.DecryptBit(x), 1);  // at the budget still decrypts

  CiphertextBit y = backend.Xor(x, zero);  // one past the budget
  try {
    backend.DecryptBit(y);
    FAIL() << "expected NoiseOverflowError";
  } catch (const NoiseOverflowError& e) {
    EXPECT_EQ(e.noise(), 180u);
    EXPECT_EQ(e.budget(), 170u);
    EXPECT_EQ(e.bit_index(), -1);
  }
}

TEST(FheBackendTest, RejectsForeignAndCleartextBits) {
  SchemeParams p;
  FheBackend backend(p);

  SchemeParams other_key = p;
  other_key.key_seed = 42;
  FheBackend foreign(other_key);
  EXPECT_THROW(backend.DecryptBit(foreign.EncryptBit(1)), KeyMismatchError);

  SchemeParams other_params = p;
  other_params.noise_budget += 1;  // same seed, different scheme
  FheBackend sibling(other_params);
  EXPECT_THROW(backend.DecryptBit(sibling.EncryptBit(1)), KeyMismatchError);

  CleartextBackend clear;
  EXPECT_THROW(backend.Not(clear.ImportBit(1)), KeyMismatchError);
  EXPECT_THROW(backend.DecryptBit(clear.ImportBit(1)), KeyMismatchError);
}

TEST(ApplyGateTest, DispatchesAndChecksArity) {
  CleartextBackend backend;
  CiphertextBit a = backend.ImportBit(1);
  CiphertextBit b = backend.ImportBit(0);
  std::vector<CiphertextBit> two = {a, b};
  EXPECT_EQ(backend.ExportBit(ApplyGate(backend, GateKind::kAnd, two)), 0);
  EXPECT_EQ(backend.ExportBit(ApplyGate(backend, GateKind::kConst1, {})), 1);
  std::vector<CiphertextBit> one = {a};
  EXPECT_THROW(ApplyGate(backend, GateKind::kAnd, one), std::invalid_argument);
}

}  // namespace
}  // namespace fhec
