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

#include "fhec/codec.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace fhec {
namespace {

uint64_t MaskBits(uint32_t width) {
  return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

}  // namespace

Value Value::Scalar(uint64_t raw) {
  Value v;
  v.v = raw;
  return v;
}

Value Value::List(std::vector<Value> elems) {
  Value v;
  v.v = std::move(elems);
  return v;
}

uint64_t Value::scalar() const {
  if (!is_scalar()) throw std::logic_error("value is not a scalar");
  return std::get<uint64_t>(v);
}

const std::vector<Value>& Value::elems() const {
  if (is_scalar()) throw std::logic_error("value is not a list");
  return std::get<std::vector<Value>>(v);
}

namespace {

void EncodeInto(const Value& value, const Layout& layout,
                std::vector<uint8_t>& bits) {
  switch (layout.kind) {
    case Layout::Kind::kScalar: {
      if (!value.is_scalar()) {
        throw std::invalid_argument("expected a scalar value for " +
                                    LayoutTypeName(layout));
      }
      const uint64_t raw = value.scalar();
      if (raw & ~MaskBits(layout.width)) {
        throw std::invalid_argument(
            "value " + std::to_string(raw) + " does not fit in " +
            std::to_string(layout.width) + " bits");
      }
      for (uint32_t i = 0; i < layout.width; ++i) {
        bits.push_back(static_cast<uint8_t>((raw >> i) & 1));
      }
      return;
    }
    case Layout::Kind::kArray: {
      if (value.is_scalar() || value.elems().size() != layout.length) {
        throw std::invalid_argument(
            "expected " + std::to_string(layout.length) + " elements for " +
            LayoutTypeName(layout));
      }
      for (const Value& elem : value.elems()) {
        EncodeInto(elem, layout.element.front(), bits);
      }
      return;
    }
    case Layout::Kind::kStruct: {
      if (value.is_scalar() || value.elems().size() != layout.fields.size()) {
        throw std::invalid_argument(
            "expected " + std::to_string(layout.fields.size()) +
            " fields for " + LayoutTypeName(layout));
      }
      for (size_t i = 0; i < layout.fields.size(); ++i) {
        EncodeInto(value.elems()[i], layout.fields[i].second, bits);
      }
      return;
    }
  }
  throw std::logic_error("unhandled layout kind");
}

Value DecodeFrom(const Layout& layout, const std::vector<uint8_t>& bits,
                 size_t& pos) {
  switch (layout.kind) {
    case Layout::Kind::kScalar: {
      uint64_t raw = 0;
      for (uint32_t i = 0; i < layout.width; ++i) {
        raw |= static_cast<uint64_t>(bits[pos++] & 1) << i;
      }
      return Value::Scalar(raw);
    }
    case Layout::Kind::kArray: {
      std::vector<Value> elems;
      for (uint32_t i = 0; i < layout.length; ++i) {
        elems.push_back(DecodeFrom(layout.element.front(), bits, pos));
      }
      return Value::List(std::move(elems));
    }
    case Layout::Kind::kStruct: {
      std::vector<Value> elems;
      for (const auto& [name, field] : layout.fields) {
        elems.push_back(DecodeFrom(field, bits, pos));
      }
      return Value::List(std::move(elems));
    }
  }
  throw std::logic_error("unhandled layout kind");
}

}  // namespace

std::vector<uint8_t> EncodeValue(const Value& value, const Layout& layout) {
  std::vector<uint8_t> bits;
  bits.reserve(layout.total_bits());
  EncodeInto(value, layout, bits);
  return bits;
}

Value DecodeValue(const Layout& layout, const std::vector<uint8_t>& bits) {
  if (bits.size() != layout.total_bits()) {
    throw std::invalid_argument(
        "layout " + LayoutTypeName(layout) + " needs " +
        std::to_string(layout.total_bits()) + " bits, got " +
        std::to_string(bits.size()));
  }
  size_t pos = 0;
  return DecodeFrom(layout, bits, pos);
}

std::vector<CiphertextBit> EncryptValue(const Value& value,
                                        const Layout& layout,
                                        GateBackend& backend) {
  std::vector<uint8_t> bits = EncodeValue(value, layout);
  std::vector<CiphertextBit> out;
  out.reserve(bits.size());
  for (uint8_t b : bits) out.push_back(backend.ImportBit(b));
  return out;
}

Value DecryptValue(const Layout& layout,
                   const std::vector<CiphertextBit>& bits,
                   GateBackend& backend) {
  std::vector<uint8_t> plain;
  plain.reserve(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    try {
      plain.push_back(backend.ExportBit(bits[i]));
    } catch (const NoiseOverflowError& e) {
      throw NoiseOverflowError(e.noise(), e.budget(), static_cast<int>(i));
    }
  }
  return DecodeValue(layout, plain);
}

Value PadString(std::string_view text, uint32_t max_len) {
  if (text.size() > max_len) {
    throw std::invalid_argument("string of length " +
                                std::to_string(text.size()) +
                                " does not fit in " +
                                std::to_string(max_len) + " bytes");
  }
  std::vector<Value> elems;
  for (char ch : text) {
    elems.push_back(Value::Scalar(static_cast<uint8_t>(ch)));
  }
  while (elems.size() < max_len) elems.push_back(Value::Scalar(0));
  return Value::List(std::move(elems));
}

std::string DecodeString(const Value& value) {
  std::string out;
  for (const Value& elem : value.elems()) {
    const uint64_t raw = elem.scalar();
    if (raw > 0xFF) {
      throw std::invalid_argument("element " + std::to_string(raw) +
                                  " is not a byte");
    }
    out.push_back(static_cast<char>(raw));
  }
  while (!out.empty() && out.back() == '\0') out.pop_back();
  return out;
}

std::string FormatValue(const Value& value, const Layout& layout) {
  std::ostringstream os;
  switch (layout.kind) {
    case Layout::Kind::kScalar: {
      const uint64_t raw = value.scalar();
      if (layout.is_bool) {
        os << (raw ? "true" : "false");
      } else if (layout.is_signed &&
                 ((raw >> (layout.width - 1)) & 1) != 0) {
        os << static_cast<int64_t>(raw | ~MaskBits(layout.width));
      } else {
        os << raw;
      }
      break;
    }
    case Layout::Kind::kArray: {
      os << '[';
      for (size_t i = 0; i < value.elems().size(); ++i) {
        if (i) os << ", ";
        os << FormatValue(value.elems()[i], layout.element.front());
      }
      os << ']';
      break;
    }
    case Layout::Kind::kStruct: {
      os << '{';
      for (size_t i = 0; i < layout.fields.size(); ++i) {
        if (i) os << ", ";
        os << layout.fields[i].first << ": "
           << FormatValue(value.elems()[i], layout.fields[i].second);
      }
      os << '}';
      break;
    }
  }
  return os.str();
}

namespace {

class LiteralCursor {
 public:
  explicit LiteralCursor(std::string_view text) : text_(text) {}

  void SkipWs() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t')) {
      ++pos_;
    }
  }
  bool AtEnd() {
    SkipWs();
    return pos_ >= text_.size();
  }
  char Peek() {
    SkipWs();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool Eat(char ch) {
    if (Peek() != ch) return false;
    ++pos_;
    return true;
  }
  void Expect(char ch) {
    if (!Eat(ch)) {
      Fail(std::string("expected '") + ch + "'");
    }
  }
  std::string Ident() {
    SkipWs();
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) Fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }
  // Returns (magnitude, negative, was_hex).
  struct Number {
    uint64_t magnitude = 0;
    bool negative = false;
    bool hex = false;
  };
  Number ParseNumber() {
    SkipWs();
    Number n;
    n.negative = Eat('-');
    SkipWs();
    size_t start = pos_;
    int base = 10;
    if (pos_ + 1 < text_.size() && text_[pos_] == '0' &&
        (text_[pos_ + 1] == 'x' || text_[pos_ + 1] == 'X')) {
      base = 16;
      n.hex = true;
      pos_ += 2;
      start = pos_;
    }
    while (pos_ < text_.size() &&
           std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    std::string_view digits = text_.substr(start, pos_ - start);
    const char* first = digits.data();
    const char* last = digits.data() + digits.size();
    auto [ptr, ec] = std::from_chars(first, last, n.magnitude, base);
    if (digits.empty() || ec != std::errc{} || ptr != last) {
      Fail("expected a number");
    }
    return n;
  }
  [[noreturn]] void Fail(const std::string& message) const {
    throw std::invalid_argument("bad value literal: " + message);
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

Value ParseLiteral(LiteralCursor& cur, const Layout& layout) {
  switch (layout.kind) {
    case Layout::Kind::kScalar: {
      if (layout.is_bool) {
        char c = cur.Peek();
        if (c == 't' || c == 'f') {
          std::string word = cur.Ident();
          if (word == "true") return Value::Scalar(1);
          if (word == "false") return Value::Scalar(0);
          cur.Fail("expected true or false");
        }
        LiteralCursor::Number n = cur.ParseNumber();
        if (n.negative || n.magnitude > 1) cur.Fail("expected a boolean");
        return Value::Scalar(n.magnitude);
      }
      LiteralCursor::Number n = cur.ParseNumber();
      const uint64_t mask = MaskBits(layout.width);
      if (n.hex) {
        // Hex spells the raw bit pattern, signed or not.
        if (n.negative) cur.Fail("hex literals cannot be negative");
        if (n.magnitude & ~mask) {
          cur.Fail("value does not fit in " + std::to_string(layout.width) +
                   " bits");
        }
        return Value::Scalar(n.magnitude);
      }
      if (layout.is_signed) {
        const uint64_t limit = uint64_t{1} << (layout.width - 1);
        if (n.negative ? n.magnitude > limit : n.magnitude >= limit) {
          cur.Fail("value does not fit in " + LayoutTypeName(layout));
        }
        return Value::Scalar((n.negative ? ~n.magnitude + 1 : n.magnitude) &
                             mask);
      }
      if (n.negative || (n.magnitude & ~mask)) {
        cur.Fail("value does not fit in " + LayoutTypeName(layout));
      }
      return Value::Scalar(n.magnitude);
    }
    case Layout::Kind::kArray: {
      cur.Expect('[');
      std::vector<Value> elems;
      for (uint32_t i = 0; i < layout.length; ++i) {
        if (i) cur.Expect(',');
        elems.push_back(ParseLiteral(cur, layout.element.front()));
      }
      cur.Expect(']');
      return Value::List(std::move(elems));
    }
    case Layout::Kind::kStruct: {
      cur.Expect('{');
      std::vector<Value> elems;
      for (size_t i = 0; i < layout.fields.size(); ++i) {
        if (i) cur.Expect(',');
        std::string name = cur.Ident();
        if (name != layout.fields[i].first) {
          cur.Fail("expected field '" + layout.fields[i].first + "', got '" +
                   name + "'");
        }
        cur.Expect(':');
        elems.push_back(ParseLiteral(cur, layout.fields[i].second));
      }
      cur.Expect('}');
      return Value::List(std::move(elems));
    }
  }
  throw std::logic_error("unhandled layout kind");
}

}  // namespace

Value ParseValueLiteral(std::string_view text, const Layout& layout) {
  LiteralCursor cur(text);
  Value v = ParseLiteral(cur, layout);
  if (!cur.AtEnd()) cur.Fail("trailing characters");
  return v;
}

}  // namespace fhec
