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

#ifndef DIRVAL_CONES_HPP
#define DIRVAL_CONES_HPP

#include <vector>

#include "dirval/blocks.hpp"
#include "dirval/cone.hpp"

namespace dirval {

// Variational cones of a block set C at a point z with dist(z, C) <= 1e-8
// (z is snapped onto C first; farther points are an error). All sets are
// finite unions of convex polyhedral cones, computed blockwise: each
// block's set is locally a polyhedron (or, at the complementarity corner,
// a union of two rays), so tangent and limiting normal cones of the
// product split into per-coordinate factors, and a direction-of-approach
// argument reduces directional normals to the per-block tables used here.
// The tables themselves are cross-validated against the sampling oracle
// below rather than trusted.

// Contingent (tangent) cone T_C(z).
ConeUnion tangent_cone(const BlockSet& C, const Eigen::VectorXd& z);

// Directional limiting normal cone: normals collected along feasible
// points approaching z in direction d. d = 0 gives the limiting normal
// cone N_C(z); a direction outside T_C(z) gives the empty union.
ConeUnion dir_normal_cone(const BlockSet& C, const Eigen::VectorXd& z,
                          const Eigen::VectorXd& d);

// Closed convex hull of dir_normal_cone(C, z, d). With d = 0 this is the
// Clarke normal cone. Throws if d lies outside T_C(z).
PolyCone clarke_normal_cone(const BlockSet& C, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& d);

// Regular (Clarke) tangent cone, via polarity with the Clarke normal cone.
PolyCone regular_tangent_cone(const BlockSet& C, const Eigen::VectorXd& z);

// Stratification of T_C(z): finitely many closed cones whose relative
// interiors partition T_C(z), each paired with the constant value the
// directional normal cone takes on that stratum. representative lies in
// the cell's relative interior.
struct TangentCell {
  PolyCone cell;
  ConeUnion normal;
  Eigen::VectorXd representative;
};

std::vector<TangentCell> enumerate_cells(const BlockSet& C, const Eigen::VectorXd& z);

// Sampling cross-check for dir_normal_cone: proximal normals harvested at
// feasible points approaching z in direction d (scales 10^{-k/2},
// k = 2..10, with 64 angular perturbations per scale and an aperture that
// shrinks with the scale). Returns unit normals; each must lie in
// dir_normal_cone(C, z, d) within angular tolerance 1e-6. Deterministic
// for a fixed seed.
//
// The coarsest scale is ~0.32, so the harvest is faithful only when the
// local structure of C around z (interval endpoints, gaps between union
// pieces) is separated by more than ~0.5. Callers generating random block
// sets for this cross-check should keep endpoints at least 1 apart.
std::vector<Eigen::VectorXd> oracle_dir_normal(const BlockSet& C, const Eigen::VectorXd& z,
                                               const Eigen::VectorXd& d, unsigned seed);

}  // namespace dirval

#endif  // DIRVAL_CONES_HPP
