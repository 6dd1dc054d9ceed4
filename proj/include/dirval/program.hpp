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

#ifndef DIRVAL_PROGRAM_HPP
#define DIRVAL_PROGRAM_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirval/blocks.hpp"
#include "dirval/expr.hpp"

namespace dirval {

struct Tolerances {
  double feas = 1e-8;         // reported points must be this close to C
  double opt_cluster = 1e-6;  // report every minimizer within this of the best
  double polish = 1e-10;      // objective convergence for the local polish
};

// A parametric program min_y f(x, y) subject to P(x, y) in C, with x the
// parameter vector (size n) and y the decision vector (size m). The ybox
// bounds the search region; it is not part of the constraint system, so a
// minimizer pinned to the ybox boundary means the search region was too
// small and the result is flagged rather than trusted.
struct ParametricProgram {
  int n = 0;
  int m = 0;
  int p = 0;  // rows of P; equals C.dim()

  ExprPtr f;
  std::vector<ExprPtr> P;

  std::vector<ExprPtr> f_dx;               // n entries
  std::vector<ExprPtr> f_dy;               // m entries
  std::vector<std::vector<ExprPtr>> P_dx;  // p rows of n entries
  std::vector<std::vector<ExprPtr>> P_dy;  // p rows of m entries

  BlockSet C;
  Eigen::VectorXd ybox_lo;
  Eigen::VectorXd ybox_hi;
  Tolerances tol;
};

// Parses the objective and constraint rows, differentiates them against
// both variable groups, and validates shapes (C.dim() must match the row
// count, ybox must be bounded with lo <= hi, and m <= 3 because the grid
// solver is the only stage that certifies its output). Throws
// std::invalid_argument on any violation; ParseError passes through.
ParametricProgram make_program(int n, int m, const std::string& objective,
                               const std::vector<std::string>& constraint_rows,
                               BlockSet C, Eigen::VectorXd ybox_lo,
                               Eigen::VectorXd ybox_hi);

double objective_value(const ParametricProgram& prog, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y);
Eigen::VectorXd constraint_value(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y);
Eigen::VectorXd objective_grad_x(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y);
Eigen::VectorXd objective_grad_y(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y);
Eigen::MatrixXd constraint_jac_x(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y);  // p by n
Eigen::MatrixXd constraint_jac_y(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y);  // p by m

struct FeasibilityCheck {
  bool feasible = false;
  double residual = 0.0;  // Euclidean distance from P(x, y) to C
};

// Expression domain errors (log of a nonpositive value and the like)
// propagate to the caller.
FeasibilityCheck is_feasible(const ParametricProgram& prog,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y);

struct SolutionPoint {
  Eigen::VectorXd y;
  double value = 0.0;
  double feas_residual = 0.0;
  // Worst first-order descent rate found by stepping 1e-6 along any
  // +-coordinate direction that stays feasible and inside the ybox;
  // zero when no such step improves the objective.
  double stationarity_residual = 0.0;
};

enum class SolveStatus { Solved, Infeasible };

struct ValueSolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double value = 0.0;
  std::vector<SolutionPoint> points;  // cluster representatives, best first
  int cluster_count = 0;
  double max_cluster_diameter = 0.0;
  // True when a reported point sits within 1e-6 of the ybox boundary, in
  // which case the box may have clipped the true solution set.
  bool touches_ybox = false;
};

// Certified grid search plus local polish. Stage 1 evaluates a uniform
// lattice over the ybox (2001 points per axis for m=1, 301 for m=2, 61 for
// m=3, each scaled by grid_scale) and keeps points within 1e-6 of C.
// Stage 2 polishes every near-optimal candidate by golden-section line
// search (cyclic over coordinates for m >= 2) restricted to the feasible
// indicator, with the feasibility tolerance shrinking to 1e-8; a polished
// point replaces its start only when it improves the objective, so exactly
// optimal lattice points survive unmoved. Stage 3 merges minimizers closer
// than 1e-4 and reports every cluster within opt_cluster of the best.
// Returns Infeasible when stage 1 finds no point within 1e-6 of C.
// Grid points where an expression throws are skipped, not propagated.
ValueSolveResult solve_value(const ParametricProgram& prog,
                             const Eigen::VectorXd& x, int grid_scale = 1);

// Max |V_hat(x) - reference(x)| over the samples; a sample whose solve
// comes back Infeasible contributes +infinity.
double value_accuracy_probe(
    const ParametricProgram& prog, const std::vector<Eigen::VectorXd>& xs,
    const std::function<double(const Eigen::VectorXd&)>& reference,
    int grid_scale = 1);

}  // namespace dirval

#endif  // DIRVAL_PROGRAM_HPP
