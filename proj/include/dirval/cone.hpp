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

#ifndef DIRVAL_CONE_HPP
#define DIRVAL_CONE_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

namespace dirval {

// Convex polyhedral cone carried in both representations:
//   V-rep: cone(generators) + span(lineality)
//   H-rep: { w : <ineq_i, w> <= 0, <eq_j, w> = 0 }
// Invariants kept by every constructor here: generators are unit vectors
// outside span(lineality), lineality is linearly independent, rows are
// unit vectors, and each V-rep vector satisfies the H-rep (checked at
// construction). Cones are assembled from audited one-dimensional pieces
// via products, rays, polars and hulls, so both representations always
// describe the same cone.
struct PolyCone {
  int dim = 0;
  std::vector<Eigen::VectorXd> generators;
  std::vector<Eigen::VectorXd> lineality;
  std::vector<Eigen::VectorXd> ineq;
  std::vector<Eigen::VectorXd> eq;

  bool is_zero_cone() const { return generators.empty() && lineality.empty(); }
  bool is_full_space() const { return ineq.empty() && eq.empty(); }
};

// A (possibly nonconvex) finite union of convex cones. An empty vector is
// the empty set, which is distinct from the zero cone {0}.
using ConeUnion = std::vector<PolyCone>;

// One-dimensional building blocks.
PolyCone cone1_zero();
PolyCone cone1_nonpos();
PolyCone cone1_nonneg();
PolyCone cone1_free();

// Ray spanned by v (v != 0) in R^p; H-rep completed with an orthogonal
// basis of v's complement.
PolyCone cone_ray(const Eigen::VectorXd& v);

// {0} and R^p in ambient dimension p.
PolyCone cone_zero(int dim);
PolyCone cone_full(int dim);

// Cartesian product; coordinates of b follow those of a.
PolyCone product(const PolyCone& a, const PolyCone& b);
ConeUnion product(const ConeUnion& a, const ConeUnion& b);

// Polar cone {g : <g, w> <= 0 for all w in K}. For polyhedral cones this
// swaps the two representations.
PolyCone polar(const PolyCone& k);

// The reflected cone -K.
PolyCone negate(const PolyCone& k);

// Membership with tolerance scaled by (1 + ||w||).
bool cone_contains(const PolyCone& k, const Eigen::VectorXd& w, double tol = 1e-9);
bool union_contains(const ConeUnion& u, const Eigen::VectorXd& w, double tol = 1e-9);

// Set inclusion / equality via V-rep membership in the other's H-rep.
bool cone_subset(const PolyCone& a, const PolyCone& b, double tol = 1e-9);
bool cone_equal(const PolyCone& a, const PolyCone& b, double tol = 1e-9);

// Closed convex hull of a union of convex cones in ambient dimension 1
// or 2 (the per-block cases; product sets take blockwise hulls and then
// products, since the union of normals across blocks is a full cartesian
// product of the per-block unions). Higher ambient dimensions throw.
PolyCone convex_hull(const ConeUnion& u);

std::string describe(const PolyCone& k);

}  // namespace dirval

#endif  // DIRVAL_CONE_HPP
