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
// Checks the properties a program must have so that its control flow can be
// erased: every loop runs a compile-time number of iterations and the call
// graph is acyclic. Pointer use and variable-length arrays never reach this
// stage; the parser rejects them.

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fhec/frontend.hpp"
#include "frontend_internal.hpp"

namespace fhec {
namespace {

void CheckLoopsInStmt(const Stmt& stmt, std::vector<Diagnostic>* diags) {
  struct Visitor {
    const Stmt& stmt;
    std::vector<Diagnostic>* diags;
    void operator()(const BlockStmt& s) const {
      for (const StmtPtr& p : s.stmts) CheckLoopsInStmt(*p, diags);
    }
    void operator()(const DeclStmt&) const {}
    void operator()(const AssignStmt&) const {}
    void operator()(const IfStmt& s) const {
      CheckLoopsInStmt(*s.then_stmt, diags);
      if (s.else_stmt) CheckLoopsInStmt(*s.else_stmt, diags);
    }
    void operator()(const ForStmt& s) const {
      auto result = AnalyzeLoop(s, stmt.span, kDefaultMaxTripCount);
      if (auto* d = std::get_if<Diagnostic>(&result)) diags->push_back(*d);
      CheckLoopsInStmt(*s.body, diags);
    }
    void operator()(const ReturnStmt&) const {}
  };
  std::visit(Visitor{stmt, diags}, stmt.node);
}

// Depth-first cycle search over the call graph. Reports one diagnostic per
// back edge, spelling out the cycle path.
class CycleFinder {
 public:
  CycleFinder(const Program& program, std::vector<Diagnostic>* diags)
      : program_(program), diags_(diags) {
    for (const FuncDecl& fn : program.functions) {
      callees_[fn.name] = DirectCallees(fn);
    }
  }

  void Run() {
    for (const FuncDecl& fn : program_.functions) Visit(fn.name);
  }

 private:
  void Visit(const std::string& name) {
    if (done_.count(name) > 0 || callees_.count(name) == 0) return;
    if (on_stack_.count(name) > 0) {
      ReportCycle(name);
      return;
    }
    on_stack_.insert(name);
    stack_.push_back(name);
    for (const std::string& callee : callees_[name]) Visit(callee);
    stack_.pop_back();
    on_stack_.erase(name);
    done_.insert(name);
  }

  void ReportCycle(const std::string& name) {
    std::string path = name;
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      path = *it + " -> " + path;
      if (*it == name) break;
    }
    const FuncDecl* fn = program_.FindFunction(name);
    diags_->push_back({Severity::kError,
                       fn != nullptr ? fn->span : SourceSpan{},
                       std::string(diag::kRecursion),
                       "recursion is not supported: " + path});
  }

  const Program& program_;
  std::vector<Diagnostic>* diags_;
  std::unordered_map<std::string, std::vector<std::string>> callees_;
  std::unordered_set<std::string> on_stack_, done_;
  std::vector<std::string> stack_;
};

}  // namespace

std::vector<Diagnostic> CheckRestrictions(const Program& program) {
  std::vector<Diagnostic> diags;
  for (const FuncDecl& fn : program.functions) {
    CheckLoopsInStmt(*fn.body, &diags);
  }
  CycleFinder(program, &diags).Run();
  return diags;
}

}  // namespace fhec
