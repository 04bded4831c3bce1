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

#ifndef FHEC_FRONTEND_INTERNAL_HPP_
#define FHEC_FRONTEND_INTERNAL_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fhec/ast.hpp"
#include "fhec/diagnostics.hpp"

namespace fhec {

// A loop whose trip count is known at compile time. `values` holds the
// (width-masked) value of the induction variable for each iteration, in
// order; `exit_value` is the value that made the condition fail.
struct LoopPlan {
  std::string var;
  Type var_type;
  bool declares_var = false;  // init was a declaration, not an assignment
  std::vector<uint64_t> values;
  uint64_t exit_value = 0;
};

// Proves a `for` statement has a fixed trip count by simulating its
// induction variable, or explains why it cannot. Requires a type-checked
// AST. The iteration cap guards against loops that are technically constant
// but would never finish unrolling.
std::variant<LoopPlan, Diagnostic> AnalyzeLoop(const ForStmt& loop,
                                               const SourceSpan& span,
                                               uint64_t max_trip_count);

inline constexpr uint64_t kDefaultMaxTripCount = 1u << 20;

// True if every path through `stmt` executes a `return`. Conservative for
// loops (treated as possibly zero-trip).
bool DefinitelyReturns(const Stmt& stmt);

// Function names called (directly) from `func`, in first-call order,
// including calls in nested expressions. Unknown callees are included.
std::vector<std::string> DirectCallees(const FuncDecl& func);

}  // namespace fhec

#endif  // FHEC_FRONTEND_INTERNAL_HPP_
