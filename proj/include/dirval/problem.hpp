// Copyright 2026 the dirval authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIRVAL_PROBLEM_HPP
#define DIRVAL_PROBLEM_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirval/program.hpp"

namespace dirval {

// One finding from problem-file validation: which field is wrong and why.
// `where` is a JSON-pointer-like path ("C[2].type", "ybox.lo"); `line` is
// the 1-based source line for syntax errors and 0 when the problem is
// semantic rather than textual.
struct Diagnostic {
  std::string where;
  std::string message;
  int line = 0;
};

// Carries every diagnostic collected before loading gave up. what() is the
// first message.
class ProblemError : public std::runtime_error {
 public:
  explicit ProblemError(std::vector<Diagnostic> diags)
      : std::runtime_error(diags.empty() ? "invalid problem file"
                                         : diags.front().where + ": " +
                                               diags.front().message),
        diagnostics(std::move(diags)) {}
  std::vector<Diagnostic> diagnostics;
};

// A problem description as stored on disk: the program pieces as text plus
// the base parameter, the default direction, and optional hand-computed
// reference values used by validation reports.
struct ProblemFile {
  std::string name;
  int n = 0;
  int m = 0;
  std::string objective;
  std::vector<std::string> constraints;
  BlockSet C;
  Eigen::VectorXd xbar;
  Eigen::VectorXd direction;
  Eigen::VectorXd ybox_lo;
  Eigen::VectorXd ybox_hi;
  Tolerances tol;

  bool has_reference_value = false;
  double reference_value = 0.0;
  bool has_reference_derivative = false;
  double reference_derivative = 0.0;

  std::string source_path;
};

// Parses and fully validates a problem file (JSON). Collects as many
// diagnostics as it can before throwing ProblemError; a syntactically
// broken file yields a single diagnostic with the line position. I/O
// failures surface as a diagnostic on the path itself.
ProblemFile load_problem(const std::string& path);

// The same validation applied to an in-memory document, for callers that
// assemble problems programmatically.
ProblemFile parse_problem(const std::string& text, const std::string& origin);

// Builds the executable program: expression parsing, differentiation, and
// the shape audit of make_program, with the file's tolerance overrides
// applied. Throws ProblemError when an expression fails to parse or the
// dimensions disagree (make_program diagnostics are wrapped with the
// owning field).
ParametricProgram instantiate(const ProblemFile& pf);

}  // namespace dirval

#endif  // DIRVAL_PROBLEM_HPP
