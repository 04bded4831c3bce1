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
// IR-level optimization passes. Every pass is a pure function from one
// valid IrFunction to another with identical input/output signature and
// identical Evaluate results; shrinking the node count (and node widths)
// here directly shrinks the gate circuit later.

#ifndef FHEC_OPTIMIZER_HPP_
#define FHEC_OPTIMIZER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "fhec/ir.hpp"

namespace fhec {

// Folds constant subgraphs and algebraic identities (x+0, x*1, x^x,
// select on a known condition, slice of extend, ...). Never increases the
// number of non-literal nodes.
IrFunction ConstantFold(const IrFunction& f);

// Removes nodes that cannot reach any output. Inputs always stay.
IrFunction DeadNodeElimination(const IrFunction& f);

// Shrinks node widths using two complementary analyses: demanded bits
// (which low bits consumers actually read) and possible width (which high
// bits are provably zero). Rewritten nodes are stitched back with
// SLICE/ZEXT repairs, which later fold/dce iterations clean up.
IrFunction WidthNarrowing(const IrFunction& f);

// An ordered list of passes by name ("fold", "dce", "narrow"), applied
// repeatedly until the IR stops changing or `fixpoint_cap` rounds elapse.
class PassPipeline {
 public:
  // Throws std::invalid_argument for an unknown pass name or cap < 1.
  explicit PassPipeline(std::vector<std::string> names, int fixpoint_cap = 10);

  // fold, dce, narrow.
  static PassPipeline Default();

  // Comma-separated names; empty string means no passes.
  static PassPipeline FromCommaList(std::string_view list,
                                    int fixpoint_cap = 10);

  const std::vector<std::string>& passes() const { return names_; }
  int fixpoint_cap() const { return fixpoint_cap_; }

 private:
  std::vector<std::string> names_;
  int fixpoint_cap_;
};

struct PassReport {
  struct Entry {
    std::string pass;
    int round = 0;
    size_t nodes_before = 0;
    size_t nodes_after = 0;
  };
  std::vector<Entry> entries;
  int rounds = 0;
  bool reached_fixpoint = false;

  std::string ToText() const;          // aligned human-readable table
  std::string ToKeyValueText() const;  // stable key=value lines
};

struct PipelineResult {
  IrFunction func;
  PassReport report;
};

PipelineResult RunPipeline(const IrFunction& f, const PassPipeline& pipeline);

}  // namespace fhec

#endif  // FHEC_OPTIMIZER_HPP_
