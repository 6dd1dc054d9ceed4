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

#ifndef DIRVAL_CONIC_HPP
#define DIRVAL_CONIC_HPP

#include <optional>

#include <Eigen/Dense>

#include "dirval/cone.hpp"
#include "dirval/simplex.hpp"

namespace dirval {

// Conic linear pair. Primal: minimize dot(alpha, x) + c subject to
// A x + b in K. The dual is derived, never entered by hand: maximize
// dot(lambda, b) + c subject to lambda in polar(K), A^T lambda + alpha = 0.
struct ConicPair {
  Eigen::VectorXd alpha;
  double c = 0.0;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  PolyCone K;  // convex
};

// Values follow the min/max orientation: an infeasible primal is +inf and
// an unbounded one -inf; an infeasible dual is -inf and an unbounded one
// +inf. gap = |primal - dual| when both are finite, +inf otherwise.
struct PairSolution {
  LPStatus primal_status = LPStatus::Breakdown;
  double primal_value = 0.0;
  Eigen::VectorXd primal_point;
  LPStatus dual_status = LPStatus::Breakdown;
  double dual_value = 0.0;
  Eigen::VectorXd dual_point;
  double gap = 0.0;
};

PairSolution solve_pair(const ConicPair& pair);

// Whether the dual optimal face {lambda in polar(K) : A^T lambda = -alpha,
// dot(b, lambda) = dual_value - c} is bounded.
BoundednessResult dual_face_bounded(const ConicPair& pair, double dual_value);

// Decision of 0 in int{ sigma*u_offset + b + M v + K } for sigma = +1 and
// sigma = -1, by 2p coordinate-direction probes: maximize r subject to
// r*(+-e_j) - sigma*u_offset - b - M v in K, r <= 1e6. The hull of the 2p
// probe points contains a ball of radius margin/sqrt(p), so the condition
// holds iff margin > 1e-9. An infeasible probe contributes margin 0.
struct InteriorResult {
  bool holds_plus = false;
  bool holds_minus = false;
  double margin_plus = 0.0;
  double margin_minus = 0.0;
};

InteriorResult interior_check(const Eigen::VectorXd& b, const Eigen::MatrixXd& M,
                              const PolyCone& K, const Eigen::VectorXd& u_offset);

// Feasibility of {v : offset + M v in rhs_cone}, with a witness.
std::optional<Eigen::VectorXd> linear_system_feasible(const Eigen::MatrixXd& M,
                                                      const PolyCone& rhs_cone,
                                                      const Eigen::VectorXd& offset);

}  // namespace dirval

#endif  // DIRVAL_CONIC_HPP
