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

#include "lexer.hpp"

#include <array>
#include <cctype>

namespace fhec {
namespace {

constexpr std::array<std::string_view, 7> kKeywords = {
    "struct", "if", "else", "for", "return", "true", "false"};

bool IsKeyword(std::string_view s) {
  for (std::string_view k : kKeywords) {
    if (s == k) return true;
  }
  return false;
}

// Multi-character punctuators, longest first so maximal munch works.
constexpr std::array<std::string_view, 20> kPuncts3 = {
    "<<=", ">>=", "<<", ">>", "==", "!=", "<=", ">=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "++", "--"};

}  // namespace

std::vector<Token> Lex(std::string_view source) {
  std::vector<Token> tokens;
  size_t i = 0;
  int line = 1, col = 1;

  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (source[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < source.size()) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '*') {
      SourceSpan start{line, col};
      advance(2);
      bool closed = false;
      while (i + 1 < source.size()) {
        if (source[i] == '*' && source[i + 1] == '/') {
          advance(2);
          closed = true;
          break;
        }
        advance(1);
      }
      if (!closed) {
        tokens.push_back(
            {TokKind::kError, "unterminated block comment", 0, false, start});
        break;
      }
      continue;
    }

    SourceSpan span{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t begin = i;
      while (i < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[i])) ||
              source[i] == '_')) {
        advance(1);
      }
      std::string text(source.substr(begin, i - begin));
      TokKind kind = IsKeyword(text) ? TokKind::kKeyword : TokKind::kIdent;
      tokens.push_back({kind, std::move(text), 0, false, span});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t begin = i;
      int base = 10;
      if (c == '0' && i + 1 < source.size() &&
          (source[i + 1] == 'x' || source[i + 1] == 'X')) {
        base = 16;
        advance(2);
      } else if (c == '0' && i + 1 < source.size() &&
                 (source[i + 1] == 'b' || source[i + 1] == 'B')) {
        base = 2;
        advance(2);
      }
      uint64_t value = 0;
      bool overflow = false;
      bool any_digit = base == 10;
      while (i < source.size()) {
        char d = source[i];
        int digit;
        if (d >= '0' && d <= '9') {
          digit = d - '0';
        } else if (base == 16 && d >= 'a' && d <= 'f') {
          digit = d - 'a' + 10;
        } else if (base == 16 && d >= 'A' && d <= 'F') {
          digit = d - 'A' + 10;
        } else {
          break;
        }
        if (digit >= base) break;
        if (value > (~uint64_t{0} - digit) / base) overflow = true;
        value = value * base + digit;
        any_digit = true;
        advance(1);
      }
      if (!any_digit) {
        tokens.push_back({TokKind::kError, "malformed integer literal", 0,
                          false, span});
        break;
      }
      tokens.push_back({TokKind::kIntLit,
                        std::string(source.substr(begin, i - begin)), value,
                        overflow, span});
      continue;
    }

    bool matched = false;
    for (std::string_view p : kPuncts3) {
      if (source.substr(i, p.size()) == p) {
        tokens.push_back({TokKind::kPunct, std::string(p), 0, false, span});
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;

    constexpr std::string_view kSingles = "+-*/%&|^~!<>=(){}[];,.:?";
    if (kSingles.find(c) != std::string_view::npos) {
      tokens.push_back({TokKind::kPunct, std::string(1, c), 0, false, span});
      advance(1);
      continue;
    }

    tokens.push_back({TokKind::kError,
                      std::string("unexpected character '") + c + "'", 0,
                      false, span});
    break;
  }

  tokens.push_back({TokKind::kEnd, "", 0, false, SourceSpan{line, col}});
  return tokens;
}

}  // namespace fhec
