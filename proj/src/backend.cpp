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

#include <algorithm>
#include <charconv>
#include <sstream>
#include <string>
#include <vector>

namespace fhec {
namespace {

// splitmix64: the usual quick, well-mixed 64-bit permutation.
uint64_t Mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint8_t PrfMaskBit(uint64_t material, uint64_t nonce) {
  return static_cast<uint8_t>(Mix64(material ^ Mix64(nonce)) >> 63);
}

constexpr GateKind kLogicKinds[] = {GateKind::kAnd, GateKind::kOr,
                                    GateKind::kXor, GateKind::kNot,
                                    GateKind::kMux, GateKind::kCopy};

}  // namespace

std::string_view BootstrapModeName(BootstrapMode mode) {
  return mode == BootstrapMode::kPerGate ? "per_gate" : "off";
}

std::vector<std::string> SchemeParams::Validate() const {
  std::vector<std::string> problems;
  if (noise_budget == 0) problems.push_back("noise_budget must be positive");
  if (fresh_noise > noise_budget) {
    problems.push_back("fresh_noise exceeds noise_budget");
  }
  if (bootstrap_mode == BootstrapMode::kPerGate) {
    uint64_t worst = 0;
    for (GateKind k : kLogicKinds) {
      worst = std::max(worst, gate_noise[static_cast<size_t>(k)]);
    }
    if (refresh_noise > noise_budget ||
        noise_budget - refresh_noise < worst) {
      problems.push_back(
          "per-gate bootstrapping needs refresh_noise plus the largest gate "
          "noise to fit in noise_budget");
    }
  }
  return problems;
}

SchemeParams SchemeParams::Preset(std::string_view name) {
  if (name == "tfhe_like") return SchemeParams{};
  if (name == "leveled_small" || name == "leveled_large") {
    SchemeParams p;
    p.bootstrap_mode = BootstrapMode::kOff;
    p.noise_budget = name == "leveled_small" ? 170 : 1290;
    p.fresh_noise = 10;
    p.refresh_noise = 0;
    p.gate_noise = {10, 10, 10, 0, 10, 0, 0, 0};
    return p;
  }
  throw std::invalid_argument("unknown parameter preset '" +
                              std::string(name) + "'");
}

std::vector<std::string> SchemeParams::PresetNames() {
  return {"tfhe_like", "leveled_small", "leveled_large"};
}

namespace {

uint64_t ParseU64(std::string_view text, const std::string& key) {
  uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw std::invalid_argument("bad value for parameter '" + key + "': '" +
                                std::string(text) + "'");
  }
  return value;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

SchemeParams SchemeParams::FromKeyValueText(std::string_view text) {
  SchemeParams p;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected key=value, got '" +
                                  std::string(line) + "'");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string_view value = Trim(line.substr(eq + 1));
    if (key == "bootstrap") {
      if (value == "per_gate") {
        p.bootstrap_mode = BootstrapMode::kPerGate;
      } else if (value == "off") {
        p.bootstrap_mode = BootstrapMode::kOff;
      } else {
        throw std::invalid_argument("bootstrap must be per_gate or off");
      }
    } else if (key == "noise_budget") {
      p.noise_budget = ParseU64(value, key);
    } else if (key == "fresh_noise") {
      p.fresh_noise = ParseU64(value, key);
    } else if (key == "refresh_noise") {
      p.refresh_noise = ParseU64(value, key);
    } else if (key == "key_seed") {
      p.key_seed = ParseU64(value, key);
    } else if (key.rfind("gate.", 0) == 0) {
      std::string kind_name = key.substr(5);
      bool found = false;
      for (int k = 0; k < kNumGateKinds; ++k) {
        if (GateKindName(static_cast<GateKind>(k)) == kind_name) {
          p.gate_noise[static_cast<size_t>(k)] = ParseU64(value, key);
          found = true;
          break;
        }
      }
      if (!found) {
        throw std::invalid_argument("unknown gate kind in parameter '" + key +
                                    "'");
      }
    } else {
      throw std::invalid_argument("unknown parameter '" + key + "'");
    }
  }
  return p;
}

std::string SchemeParams::ToKeyValueText() const {
  std::ostringstream os;
  os << "bootstrap=" << BootstrapModeName(bootstrap_mode) << '\n';
  os << "noise_budget=" << noise_budget << '\n';
  os << "fresh_noise=" << fresh_noise << '\n';
  os << "refresh_noise=" << refresh_noise << '\n';
  os << "key_seed=" << key_seed << '\n';
  for (int k = 0; k < kNumGateKinds; ++k) {
    os << "gate." << GateKindName(static_cast<GateKind>(k)) << '='
       << gate_noise[static_cast<size_t>(k)] << '\n';
  }
  return os.str();
}

uint64_t ParamsHash(const SchemeParams& p) {
  uint64_t h = Mix64(static_cast<uint64_t>(p.bootstrap_mode) + 1);
  h = Mix64(h ^ p.noise_budget);
  h = Mix64(h ^ p.fresh_noise);
  h = Mix64(h ^ p.refresh_noise);
  for (uint64_t n : p.gate_noise) h = Mix64(h ^ n);
  return h;
}

SecretKey Keygen(const SchemeParams& params) {
  SecretKey key;
  key.material = Mix64(params.key_seed ^ 0xF4EC5EED0015ull);
  key.tag = Mix64(key.material ^ ParamsHash(params));
  if (key.tag == 0) key.tag = 1;  // 0 is reserved for cleartext bits
  return key;
}

NoiseOverflowError::NoiseOverflowError(uint64_t noise, uint64_t budget,
                                       int bit_index)
    : std::runtime_error(
          "noise overflow: level " + std::to_string(noise) +
          " exceeds budget " + std::to_string(budget) +
          (bit_index >= 0 ? " at bit " + std::to_string(bit_index) : "")),
      noise_(noise),
      budget_(budget),
      bit_index_(bit_index) {}

KeyMismatchError::KeyMismatchError(const std::string& message)
    : std::runtime_error(message) {}

CiphertextBit ApplyGate(GateBackend& backend, GateKind kind,
                        std::span<const CiphertextBit> operands) {
  if (static_cast<int>(operands.size()) != GateArity(kind)) {
    throw std::invalid_argument("gate operand count mismatch");
  }
  switch (kind) {
    case GateKind::kAnd:
      return backend.And(operands[0], operands[1]);
    case GateKind::kOr:
      return backend.Or(operands[0], operands[1]);
    case GateKind::kXor:
      return backend.Xor(operands[0], operands[1]);
    case GateKind::kNot:
      return backend.Not(operands[0]);
    case GateKind::kMux:
      return backend.Mux(operands[0], operands[1], operands[2]);
    case GateKind::kConst0:
      return backend.Constant(false);
    case GateKind::kConst1:
      return backend.Constant(true);
    case GateKind::kCopy:
      return backend.Copy(operands[0]);
  }
  throw std::logic_error("unhandled gate kind");
}

namespace {

uint8_t PlainBit(const CiphertextBit& bit) {
  if (bit.key_tag != 0) {
    throw KeyMismatchError(
        "cleartext backend cannot operate on an encrypted bit");
  }
  return bit.masked_payload & 1;
}

CiphertextBit Plain(uint8_t value) {
  return CiphertextBit{static_cast<uint8_t>(value & 1), 0, 0, 0};
}

}  // namespace

CiphertextBit CleartextBackend::Constant(bool value) {
  return Plain(value ? 1 : 0);
}
CiphertextBit CleartextBackend::Not(const CiphertextBit& a) {
  return Plain(PlainBit(a) ^ 1);
}
CiphertextBit CleartextBackend::And(const CiphertextBit& a,
                                    const CiphertextBit& b) {
  return Plain(PlainBit(a) & PlainBit(b));
}
CiphertextBit CleartextBackend::Or(const CiphertextBit& a,
                                   const CiphertextBit& b) {
  return Plain(PlainBit(a) | PlainBit(b));
}
CiphertextBit CleartextBackend::Xor(const CiphertextBit& a,
                                    const CiphertextBit& b) {
  return Plain(PlainBit(a) ^ PlainBit(b));
}
CiphertextBit CleartextBackend::Mux(const CiphertextBit& s,
                                    const CiphertextBit& t,
                                    const CiphertextBit& e) {
  return Plain(PlainBit(s) ? PlainBit(t) : PlainBit(e));
}
CiphertextBit CleartextBackend::Copy(const CiphertextBit& a) {
  return Plain(PlainBit(a));
}
CiphertextBit CleartextBackend::ImportBit(uint8_t bit) {
  return Plain(bit & 1);
}
uint8_t CleartextBackend::ExportBit(const CiphertextBit& bit) {
  return PlainBit(bit);
}

FheBackend::FheBackend(const SchemeParams& params) : params_(params) {
  std::vector<std::string> problems = params_.Validate();
  if (!problems.empty()) {
    std::string joined = "invalid scheme parameters: ";
    for (size_t i = 0; i < problems.size(); ++i) {
      if (i) joined += "; ";
      joined += problems[i];
    }
    throw std::invalid_argument(joined);
  }
  key_ = Keygen(params_);
}

uint8_t FheBackend::MaskOf(const CiphertextBit& bit) const {
  return PrfMaskBit(key_.material, bit.nonce);
}

CiphertextBit FheBackend::Seal(uint8_t raw_masked_combination,
                               uint64_t noise) {
  CiphertextBit out;
  out.nonce = next_nonce_.fetch_add(1, std::memory_order_relaxed);
  out.masked_payload = static_cast<uint8_t>(
      (raw_masked_combination ^ PrfMaskBit(key_.material, out.nonce)) & 1);
  out.noise = noise;
  out.key_tag = key_.tag;
  return out;
}

void FheBackend::CheckTag(const CiphertextBit& bit) const {
  if (bit.key_tag != key_.tag) {
    throw KeyMismatchError(
        bit.key_tag == 0
            ? "fhe backend received a cleartext bit"
            : "ciphertext was produced under a different key or parameters");
  }
}

uint64_t FheBackend::ResultNoise(
    GateKind kind, std::initializer_list<CiphertextBit> operands) const {
  if (params_.bootstrap_mode == BootstrapMode::kPerGate) {
    return params_.refresh_noise;
  }
  uint64_t worst = 0;
  for (const CiphertextBit& b : operands) worst = std::max(worst, b.noise);
  return worst + params_.gate_noise[static_cast<size_t>(kind)];
}

CiphertextBit FheBackend::EncryptBit(uint8_t bit) {
  return Seal(bit & 1, params_.fresh_noise);
}

uint8_t FheBackend::DecryptBit(const CiphertextBit& bit) {
  CheckTag(bit);
  if (bit.noise > params_.noise_budget) {
    throw NoiseOverflowError(bit.noise, params_.noise_budget);
  }
  unmask_calls_.fetch_add(1, std::memory_order_relaxed);
  return static_cast<uint8_t>((bit.masked_payload ^ MaskOf(bit)) & 1);
}

CiphertextBit FheBackend::Constant(bool value) {
  return Seal(value ? 1 : 0, 0);
}

// The gate bodies below combine masked payloads and per-operand masks so the
// fresh payload is correct by algebra; no operand is individually unmasked.
CiphertextBit FheBackend::Not(const CiphertextBit& a) {
  CheckTag(a);
  uint8_t raw = static_cast<uint8_t>(a.masked_payload ^ 1 ^ MaskOf(a));
  return Seal(raw, ResultNoise(GateKind::kNot, {a}));
}

CiphertextBit FheBackend::Xor(const CiphertextBit& a, const CiphertextBit& b) {
  CheckTag(a);
  CheckTag(b);
  uint8_t raw = static_cast<uint8_t>((a.masked_payload ^ b.masked_payload) ^
                                     (MaskOf(a) ^ MaskOf(b)));
  return Seal(raw, ResultNoise(GateKind::kXor, {a, b}));
}

namespace {
// Masked multiply: the AND of two masked bits expands to four products.
uint8_t MaskedAnd(uint8_t pa, uint8_t ma, uint8_t pb, uint8_t mb) {
  return static_cast<uint8_t>((pa & pb) ^ (pa & mb) ^ (ma & pb) ^ (ma & mb));
}
}  // namespace

CiphertextBit FheBackend::And(const CiphertextBit& a, const CiphertextBit& b) {
  CheckTag(a);
  CheckTag(b);
  uint8_t raw =
      MaskedAnd(a.masked_payload, MaskOf(a), b.masked_payload, MaskOf(b));
  return Seal(raw, ResultNoise(GateKind::kAnd, {a, b}));
}

CiphertextBit FheBackend::Or(const CiphertextBit& a, const CiphertextBit& b) {
  CheckTag(a);
  CheckTag(b);
  uint8_t pa = a.masked_payload, ma = MaskOf(a);
  uint8_t pb = b.masked_payload, mb = MaskOf(b);
  uint8_t raw = static_cast<uint8_t>(MaskedAnd(pa, ma, pb, mb) ^ (pa ^ pb) ^
                                     (ma ^ mb));
  return Seal(raw, ResultNoise(GateKind::kOr, {a, b}));
}

CiphertextBit FheBackend::Mux(const CiphertextBit& s, const CiphertextBit& t,
                              const CiphertextBit& e) {
  CheckTag(s);
  CheckTag(t);
  CheckTag(e);
  // mux(s, t, e) = e ^ (s & (t ^ e)); (t ^ e) stays masked under mt ^ me.
  uint8_t te_p = static_cast<uint8_t>(t.masked_payload ^ e.masked_payload);
  uint8_t te_m = static_cast<uint8_t>(MaskOf(t) ^ MaskOf(e));
  uint8_t raw = static_cast<uint8_t>(
      MaskedAnd(s.masked_payload, MaskOf(s), te_p, te_m) ^ e.masked_payload ^
      MaskOf(e));
  return Seal(raw, ResultNoise(GateKind::kMux, {s, t, e}));
}

CiphertextBit FheBackend::Copy(const CiphertextBit& a) {
  CheckTag(a);
  uint8_t raw = static_cast<uint8_t>(a.masked_payload ^ MaskOf(a));
  return Seal(raw, ResultNoise(GateKind::kCopy, {a}));
}

}  // namespace fhec
