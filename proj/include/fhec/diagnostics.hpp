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

#ifndef FHEC_DIAGNOSTICS_HPP_
#define FHEC_DIAGNOSTICS_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace fhec {

// 1-based source position; {0, 0} means "no position" (e.g. end of input or
// whole-program diagnostics).
struct SourceSpan {
  int line = 0;
  int col = 0;

  bool operator==(const SourceSpan&) const = default;
};

enum class Severity { kError, kWarning };

// Stable diagnostic codes. Restriction codes are the contract surface for the
// frontend: each rejected program names exactly one violated restriction.
namespace diag {
inline constexpr std::string_view kSyntax = "SYNTAX";
inline constexpr std::string_view kType = "TYPE";
inline constexpr std::string_view kUnknownSymbol = "UNKNOWN_SYMBOL";
inline constexpr std::string_view kDuplicateSymbol = "DUPLICATE_SYMBOL";
inline constexpr std::string_view kMissingReturn = "MISSING_RETURN";
inline constexpr std::string_view kPointer = "POINTER";
inline constexpr std::string_view kVariableLoopBound = "VARIABLE_LOOP_BOUND";
inline constexpr std::string_view kRecursion = "RECURSION";
inline constexpr std::string_view kVariableLengthArray = "VARIABLE_LENGTH_ARRAY";
inline constexpr std::string_view kNonConstantShift = "NON_CONSTANT_SHIFT";
inline constexpr std::string_view kDynamicIndex = "DYNAMIC_INDEX";
inline constexpr std::string_view kEntryNotFound = "ENTRY_NOT_FOUND";
inline constexpr std::string_view kNodeLimit = "NODE_LIMIT";
}  // namespace diag

struct Diagnostic {
  Severity severity = Severity::kError;
  SourceSpan span;
  std::string code;
  std::string message;

  bool is_error() const { return severity == Severity::kError; }
};

// Renders "file:line:col: error[CODE]: message".
std::string FormatDiagnostic(std::string_view file, const Diagnostic& d);

bool HasErrors(const std::vector<Diagnostic>& diags);

}  // namespace fhec

#endif  // FHEC_DIAGNOSTICS_HPP_
