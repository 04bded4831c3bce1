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
// Plaintext values and their bit codecs. A Value mirrors a Layout: scalars
// hold the raw two's-complement bit pattern, arrays and structs are
// positional element lists. Encoding concatenates scalar leaves LSB first
// in layout order - the same order the frontend assigns input wires - and
// the encrypt/decrypt helpers lift that through a gate backend bit by bit.

#ifndef FHEC_CODEC_HPP_
#define FHEC_CODEC_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fhec/backend.hpp"
#include "fhec/layout.hpp"

namespace fhec {

struct Value {
  // Scalars store raw masked bits (two's complement for signed types).
  std::variant<uint64_t, std::vector<Value>> v = uint64_t{0};

  static Value Scalar(uint64_t raw);
  static Value List(std::vector<Value> elems);

  bool is_scalar() const { return std::holds_alternative<uint64_t>(v); }
  uint64_t scalar() const;               // throws std::logic_error on lists
  const std::vector<Value>& elems() const;  // throws std::logic_error on scalars

  bool operator==(const Value&) const = default;
};

// Value <-> plain bits (one uint8_t per bit, values 0/1). Encode validates
// the value's shape against the layout and that every scalar fits its leaf
// width; both throw std::invalid_argument on mismatch.
std::vector<uint8_t> EncodeValue(const Value& value, const Layout& layout);
Value DecodeValue(const Layout& layout, const std::vector<uint8_t>& bits);

// Same bit order, through a backend boundary. DecryptValue rethrows a
// NoiseOverflowError with the offending bit index filled in.
std::vector<CiphertextBit> EncryptValue(const Value& value,
                                        const Layout& layout,
                                        GateBackend& backend);
Value DecryptValue(const Layout& layout,
                   const std::vector<CiphertextBit>& bits,
                   GateBackend& backend);

// Strings ride as u8 arrays: zero-padded to a fixed length on the way in,
// trailing NULs stripped on the way out. PadString throws
// std::invalid_argument if the text does not fit.
Value PadString(std::string_view text, uint32_t max_len);
std::string DecodeString(const Value& value);

// Human syntax used by the command line: "5", "-3", "0x1f", "true",
// "[1, 2, 3]", "{x: 3, y: 10}". FormatValue renders signed scalars with a
// sign; ParseValueLiteral range-checks against the layout and throws
// std::invalid_argument with a position-free message on bad input.
std::string FormatValue(const Value& value, const Layout& layout);
Value ParseValueLiteral(std::string_view text, const Layout& layout);

}  // namespace fhec

#endif  // FHEC_CODEC_HPP_
