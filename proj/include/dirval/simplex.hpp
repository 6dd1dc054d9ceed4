// Copyright 2026 the dirval authors
//
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

#ifndef DIRVAL_SIMPLEX_HPP
#define DIRVAL_SIMPLEX_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dirval/cone.hpp"

namespace dirval {

// minimize  dot(c, w)
// subject to A w <= b,  E w = e,  lower <= w <= upper.
//
// A and E may have zero rows. Empty `lower`/`upper` mean no bounds; when
// present they have size n with +-infinity marking an absent bound.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd E;
  Eigen::VectorXd e;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int num_vars() const { return static_cast<int>(c.size()); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded, Breakdown };

// For Optimal, `point` is a feasible minimizer and `value = dot(c, point)`.
// For Unbounded, `ray` is a feasible recession direction with dot(c, ray) < 0
// and `point` a feasible point it was found at. Breakdown means the pivot
// selection ran out of numerically safe choices; results carry no guarantee.
struct LPOutcome {
  LPStatus status = LPStatus::Breakdown;
  double value = 0.0;
  Eigen::VectorXd point;
  Eigen::VectorXd ray;
  int pivots = 0;
};

const char* lp_status_name(LPStatus s);

// Dense two-phase tableau simplex with Bland's rule, so it terminates on
// degenerate instances. Feasibility tolerance 1e-9, pivot tolerance 1e-12.
LPOutcome solve_lp(const LinearProgram& lp);

// A nonzero element of piece `K` intersected with the kernel of M, or
// nullopt when that intersection is {0}. M may have zero rows (kernel is
// everything). Works from the H-representation of K.
//
// Tried first: one LP over the V-representation coefficients with the
// coefficient sums normalized to 1. That normalization cannot separate a
// lineality generator from its negation, so a zero witness from it is
// inconclusive; in that case the decision falls back to per-coordinate
// probing LPs (maximize +-lambda_j capped at 1), which are exact for a
// cone: each optimum is either 1 or 0.
std::optional<Eigen::VectorXd> cone_nonzero_element(const PolyCone& K,
                                                    const Eigen::MatrixXd& M);

struct BoundednessResult {
  bool bounded = true;
  // When unbounded: a nonzero recession direction of the polyhedron.
  Eigen::VectorXd ray;
};

// Whether {w : A w <= b, E w = e} is bounded, by probing its recession
// cone {r : A r <= 0, E r = 0} coordinate by coordinate. The polyhedron is
// assumed nonempty (for an empty one the answer is vacuously "bounded").
BoundednessResult polyhedron_bounded(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                     const Eigen::MatrixXd& E, const Eigen::VectorXd& e);

}  // namespace dirval

#endif  // DIRVAL_SIMPLEX_HPP
