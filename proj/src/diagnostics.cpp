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

#include "fhec/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace fhec {

std::string FormatDiagnostic(std::string_view file, const Diagnostic& d) {
  std::ostringstream os;
  os << file << ':' << d.span.line << ':' << d.span.col << ": "
     << (d.severity == Severity::kError ? "error" : "warning") << '[' << d.code
     << "]: " << d.message;
  return os.str();
}

bool HasErrors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.is_error(); });
}

}  // namespace fhec
