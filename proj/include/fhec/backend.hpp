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
// Gate backends: the pluggable "cryptography" layer the interpreter drives.
// CleartextBackend computes on plain bits. FheBackend models a
// bootstrapping gate scheme: every bit is a masked payload plus an integer
// noise level, gate evaluation works purely on masked values (it never
// unmasks an operand - the audit counter proves it), and decryption fails
// once noise exceeds the parameter budget. With per-gate bootstrapping the
// noise resets to `refresh_noise` after every gate; with bootstrapping off
// it grows by `gate_noise[kind]` over the noisiest operand, which caps the
// evaluable depth at floor((noise_budget - fresh_noise) / increment).

#ifndef FHEC_BACKEND_HPP_
#define FHEC_BACKEND_HPP_

#include <array>
#include <atomic>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fhec/gates.hpp"

namespace fhec {

enum class BootstrapMode : uint8_t {
  kPerGate,  // every gate output is refreshed to refresh_noise
  kOff,      // leveled: noise accumulates, decryption enforces the budget
};

std::string_view BootstrapModeName(BootstrapMode mode);

struct SchemeParams {
  BootstrapMode bootstrap_mode = BootstrapMode::kPerGate;
  uint64_t noise_budget = 100;
  uint64_t fresh_noise = 5;    // noise of a newly encrypted bit
  uint64_t refresh_noise = 5;  // noise after a per-gate bootstrap
  // Additive noise per gate kind (leveled mode), indexed by GateKind.
  // Constants are always produced noiseless regardless of these entries.
  std::array<uint64_t, kNumGateKinds> gate_noise = {10, 10, 10, 0,
                                                    15, 0,  0,  0};
  uint64_t key_seed = 1;

  // Empty result means usable. Checks the budget admits fresh bits and, in
  // per-gate mode, a bootstrap output plus the worst gate increment.
  std::vector<std::string> Validate() const;

  // "tfhe_like" (defaults above), "leveled_small" (depth 16),
  // "leveled_large" (depth 128). Throws std::invalid_argument otherwise.
  static SchemeParams Preset(std::string_view name);
  static std::vector<std::string> PresetNames();

  // key=value lines ('#' comments allowed); unspecified keys keep defaults.
  // Keys: bootstrap, noise_budget, fresh_noise, refresh_noise, key_seed,
  // gate.<KIND>. Throws std::invalid_argument on unknown keys or bad values.
  static SchemeParams FromKeyValueText(std::string_view text);
  std::string ToKeyValueText() const;

  bool operator==(const SchemeParams&) const = default;
};

// Stable digest over every semantic field (not key_seed-dependent).
uint64_t ParamsHash(const SchemeParams& p);

struct SecretKey {
  uint64_t material = 0;  // PRF key for payload masks
  uint64_t tag = 0;       // binds ciphertexts to key material + params
};

SecretKey Keygen(const SchemeParams& params);

// One encrypted bit. The payload is the plaintext XOR a PRF mask derived
// from (key material, nonce); `key_tag` identifies the producing key and is
// 0 for cleartext bits.
struct CiphertextBit {
  uint8_t masked_payload = 0;
  uint64_t nonce = 0;
  uint64_t noise = 0;
  uint64_t key_tag = 0;

  bool operator==(const CiphertextBit&) const = default;
};

class NoiseOverflowError : public std::runtime_error {
 public:
  NoiseOverflowError(uint64_t noise, uint64_t budget, int bit_index = -1);
  uint64_t noise() const { return noise_; }
  uint64_t budget() const { return budget_; }
  int bit_index() const { return bit_index_; }  // -1 when unknown

 private:
  uint64_t noise_;
  uint64_t budget_;
  int bit_index_;
};

class KeyMismatchError : public std::runtime_error {
 public:
  explicit KeyMismatchError(const std::string& message);
};

// Gate evaluation interface. Implementations must be safe to call from
// multiple threads concurrently.
class GateBackend {
 public:
  virtual ~GateBackend() = default;

  virtual std::string_view name() const = 0;
  virtual CiphertextBit Constant(bool value) = 0;
  virtual CiphertextBit Not(const CiphertextBit& a) = 0;
  virtual CiphertextBit And(const CiphertextBit& a, const CiphertextBit& b) = 0;
  virtual CiphertextBit Or(const CiphertextBit& a, const CiphertextBit& b) = 0;
  virtual CiphertextBit Xor(const CiphertextBit& a, const CiphertextBit& b) = 0;
  virtual CiphertextBit Mux(const CiphertextBit& s, const CiphertextBit& t,
                            const CiphertextBit& e) = 0;
  virtual CiphertextBit Copy(const CiphertextBit& a) = 0;

  // Boundary conversions: plaintext bit in, plaintext bit out.
  virtual CiphertextBit ImportBit(uint8_t bit) = 0;
  virtual uint8_t ExportBit(const CiphertextBit& bit) = 0;
};

// Dispatches one gate; `operands` length must equal GateArity(kind).
CiphertextBit ApplyGate(GateBackend& backend, GateKind kind,
                        std::span<const CiphertextBit> operands);

// Plain-bit backend; bits carry key_tag 0 and zero noise.
class CleartextBackend : public GateBackend {
 public:
  std::string_view name() const override { return "cleartext"; }
  CiphertextBit Constant(bool value) override;
  CiphertextBit Not(const CiphertextBit& a) override;
  CiphertextBit And(const CiphertextBit& a, const CiphertextBit& b) override;
  CiphertextBit Or(const CiphertextBit& a, const CiphertextBit& b) override;
  CiphertextBit Xor(const CiphertextBit& a, const CiphertextBit& b) override;
  CiphertextBit Mux(const CiphertextBit& s, const CiphertextBit& t,
                    const CiphertextBit& e) override;
  CiphertextBit Copy(const CiphertextBit& a) override;
  CiphertextBit ImportBit(uint8_t bit) override;
  uint8_t ExportBit(const CiphertextBit& bit) override;
};

// Noise-model backend. Gate evaluation combines masked payloads and masks
// algebraically and re-masks under a fresh nonce; only EncryptBit/DecryptBit
// style boundary calls unmask, and unmask_calls() counts them.
class FheBackend : public GateBackend {
 public:
  // Throws std::invalid_argument when params.Validate() is non-empty.
  explicit FheBackend(const SchemeParams& params);

  const SchemeParams& params() const { return params_; }
  uint64_t key_tag() const { return key_.tag; }
  // Number of unmask operations performed (boundary decrypts only).
  uint64_t unmask_calls() const { return unmask_calls_.load(); }

  CiphertextBit EncryptBit(uint8_t bit);
  // Throws NoiseOverflowError above the budget, KeyMismatchError for bits
  // produced under a different key or parameter set.
  uint8_t DecryptBit(const CiphertextBit& bit);

  std::string_view name() const override { return "fhe"; }
  CiphertextBit Constant(bool value) override;
  CiphertextBit Not(const CiphertextBit& a) override;
  CiphertextBit And(const CiphertextBit& a, const CiphertextBit& b) override;
  CiphertextBit Or(const CiphertextBit& a, const CiphertextBit& b) override;
  CiphertextBit Xor(const CiphertextBit& a, const CiphertextBit& b) override;
  CiphertextBit Mux(const CiphertextBit& s, const CiphertextBit& t,
                    const CiphertextBit& e) override;
  CiphertextBit Copy(const CiphertextBit& a) override;
  CiphertextBit ImportBit(uint8_t bit) override { return EncryptBit(bit); }
  uint8_t ExportBit(const CiphertextBit& bit) override {
    return DecryptBit(bit);
  }

 private:
  uint8_t MaskOf(const CiphertextBit& bit) const;
  CiphertextBit Seal(uint8_t raw_masked_combination, uint64_t noise);
  void CheckTag(const CiphertextBit& bit) const;
  uint64_t ResultNoise(GateKind kind,
                       std::initializer_list<CiphertextBit> operands) const;

  SchemeParams params_;
  SecretKey key_;
  std::atomic<uint64_t> next_nonce_{1};
  std::atomic<uint64_t> unmask_calls_{0};
};

}  // namespace fhec

#endif  // FHEC_BACKEND_HPP_
