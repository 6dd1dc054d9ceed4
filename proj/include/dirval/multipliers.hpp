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

#ifndef DIRVAL_MULTIPLIERS_HPP
#define DIRVAL_MULTIPLIERS_HPP

#include <vector>

#include <Eigen/Core>

#include "dirval/cone.hpp"
#include "dirval/program.hpp"

namespace dirval {

// Multiplier sets at a feasible base point (x, y):
//   { lambda in N_C(P(x, y)) : grad_y f + jac_y P^T lambda = 0 }
// with N_C either the Clarke normal cone (one convex polyhedron) or the
// limiting normal cone (a finite union of convex polyhedra, one per
// piece). Each piece is carried in H-rep and queried by LP.

enum class MultiplierKind { Clarke, Limiting };

struct MultiplierPiece {
  PolyCone normal;  // the normal-cone piece this polyhedron lives in
  bool empty = true;
  bool bounded = true;        // meaningful only when nonempty
  Eigen::VectorXd witness;    // some multiplier in the piece when nonempty
  Eigen::VectorXd coord_min;  // per-coordinate range when bounded
  Eigen::VectorXd coord_max;
};

struct MultiplierSet {
  MultiplierKind kind = MultiplierKind::Clarke;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;  // P(x, y) snapped onto C

  // Base-point data the extremizer needs; frozen here so extremize calls
  // cannot drift from the set they extremize over.
  Eigen::VectorXd grad_x;  // objective x-gradient
  Eigen::VectorXd grad_y;
  Eigen::MatrixXd jac_x;  // constraint Jacobians, p by n and p by m
  Eigen::MatrixXd jac_y;

  std::vector<MultiplierPiece> pieces;
  bool empty = true;
  bool bounded = true;  // every nonempty piece bounded
  bool singleton = false;
  Eigen::VectorXd point;  // the unique multiplier when singleton
};

// Throws std::invalid_argument when y is farther than the feasibility
// tolerance from the constraint set at x.
MultiplierSet multiplier_set(const ParametricProgram& prog,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             MultiplierKind kind);

// Extremes of lambda -> grad_x f . u + (jac_x P . u)^T lambda over the set,
// i.e. of the Lagrangian x-gradient paired with direction u. Unbounded
// sides report +-infinity together with a certifying recession direction
// instead of an argument point. Throws std::invalid_argument on an empty
// set.
struct ExtremizeResult {
  double min_value = 0.0;
  double max_value = 0.0;
  Eigen::VectorXd argmin;  // empty when the min side is unbounded
  Eigen::VectorXd argmax;
  Eigen::VectorXd min_ray;  // recession certificate when unbounded
  Eigen::VectorXd max_ray;
};

ExtremizeResult extremize_xgrad(const MultiplierSet& ms,
                                const Eigen::VectorXd& u);

// Constraint-qualification verdicts. Robinson's CQ asks that no nonzero
// lambda in the Clarke normal cone at P(x, y) annihilates jac_y P^T; the
// same decision is re-derived through the interiority battery on
// jac_y P . R^m + regular tangent cone, and both answers are reported so
// disagreement is visible. The no-nonzero-abnormal-multiplier variant
// quantifies over every piece of the limiting normal cone instead.
struct CqVerdict {
  bool holds = false;
  Eigen::VectorXd witness;  // nonzero abnormal multiplier on failure
  bool interior_holds = false;  // robinson_cq only; mirrors `holds`
};

CqVerdict robinson_cq(const ParametricProgram& prog, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y);
CqVerdict nnamcq(const ParametricProgram& prog, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y);

// True when every block of C is ZERO or NONPOS, i.e. the program is a
// classic NLP with equality rows (free multiplier) and inequality rows
// g <= 0 (multiplier >= 0, complementary to g). Reports use this to label
// multiplier coordinates.
bool classic_nlp_structure(const BlockSet& C);

}  // namespace dirval

#endif  // DIRVAL_MULTIPLIERS_HPP
