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
// Frontend pipeline: parse + type-check, reject programs the circuit model
// cannot express, and lower an entry function to the dataflow IR. Lowering
// erases all control flow: loops are unrolled over their compile-time trip
// counts, both branches of every `if` are evaluated and merged with selects,
// calls are inlined, and early returns become a select chain in source order.

#ifndef FHEC_FRONTEND_HPP_
#define FHEC_FRONTEND_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "fhec/ast.hpp"
#include "fhec/diagnostics.hpp"
#include "fhec/ir.hpp"

namespace fhec {

struct ParseResult {
  // Set iff `diagnostics` contains no errors (warnings are fine).
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;
};

// Parses and type-checks a whole translation unit. On success every Expr in
// the returned AST carries a resolved type, integer literals have adopted
// the width of their context, and every function definitely returns.
ParseResult Parse(std::string_view source);

// Checks the data-independence restrictions a parsed program must satisfy
// before lowering: every loop must have a compile-time trip count and no
// call cycles may exist. Returns one error per violation; empty means ok.
std::vector<Diagnostic> CheckRestrictions(const Program& program);

struct LowerOptions {
  // Lowering aborts with a diagnostic once the IR would exceed this many
  // nodes (unrolling and inlining can explode quickly).
  size_t node_limit = 1000000;
};

struct LowerResult {
  // Set iff `diagnostics` is empty.
  std::optional<IrFunction> func;
  std::vector<Diagnostic> diagnostics;
};

// Lowers `entry` to a single IR dataflow function. Aggregate parameters
// become one IR input per scalar leaf, named by access path ("xs[0]",
// "p.x"), in layout order; aggregate returns become one IR output per leaf.
// Pre: `program` came from a successful Parse and CheckRestrictions passed.
LowerResult LowerToIr(const Program& program, std::string_view entry,
                      const LowerOptions& options = {});

}  // namespace fhec

#endif  // FHEC_FRONTEND_HPP_
