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

#ifndef FHEC_LEXER_HPP_
#define FHEC_LEXER_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fhec/diagnostics.hpp"

namespace fhec {

enum class TokKind {
  kEnd,
  kIdent,
  kIntLit,
  kKeyword,  // struct if else for return true false
  kPunct,    // operators and delimiters, text in Token::text
  kError,    // lexically invalid input
};

struct Token {
  TokKind kind = TokKind::kEnd;
  std::string text;
  uint64_t int_value = 0;
  bool overflow = false;  // integer literal did not fit in 64 bits
  SourceSpan span;
};

// Tokenizes the whole input. The final token is always kEnd. Comments
// ("//" and "/* */") and whitespace are skipped; an unterminated block
// comment or a bad character yields a kError token.
std::vector<Token> Lex(std::string_view source);

}  // namespace fhec

#endif  // FHEC_LEXER_HPP_
