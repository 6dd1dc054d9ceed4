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

#include "dirval/cone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dirval {

namespace {

Eigen::VectorXd unit1(double v) {
  Eigen::VectorXd e(1);
  e[0] = v;
  return e;
}

void check_vrep_against_hrep(const PolyCone& k) {
  const double tol = 1e-12;
  auto check = [&](const Eigen::VectorXd& v, bool both_signs) {
    for (const auto& a : k.ineq) {
      if (a.dot(v) > tol || (both_signs && a.dot(-v) > tol))
        throw std::logic_error("cone representations disagree (ineq)");
    }
    for (const auto& e : k.eq) {
      if (std::abs(e.dot(v)) > tol) throw std::logic_error("cone representations disagree (eq)");
    }
  };
  for (const auto& g : k.generators) check(g, false);
  for (const auto& l : k.lineality) check(l, true);
}

PolyCone finish(PolyCone k) {
  check_vrep_against_hrep(k);
  return k;
}

}  // namespace

PolyCone cone1_zero() {
  PolyCone k;
  k.dim = 1;
  k.eq.push_back(unit1(1.0));
  return finish(k);
}

PolyCone cone1_nonpos() {
  PolyCone k;
  k.dim = 1;
  k.generators.push_back(unit1(-1.0));
  k.ineq.push_back(unit1(1.0));
  return finish(k);
}

PolyCone cone1_nonneg() {
  PolyCone k;
  k.dim = 1;
  k.generators.push_back(unit1(1.0));
  k.ineq.push_back(unit1(-1.0));
  return finish(k);
}

PolyCone cone1_free() {
  PolyCone k;
  k.dim = 1;
  k.lineality.push_back(unit1(1.0));
  return finish(k);
}

PolyCone cone_ray(const Eigen::VectorXd& v) {
  const double n = v.norm();
  if (n == 0.0) throw std::invalid_argument("cone_ray: zero direction");
  const int p = static_cast<int>(v.size());
  PolyCone k;
  k.dim = p;
  const Eigen::VectorXd u = v / n;
  k.generators.push_back(u);
  k.ineq.push_back(-u);
  // Complete u to an orthonormal basis; the complement rows become
  // equalities pinning the ray's line.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(p, p);
  basis.col(0) = u;
  // Gram-Schmidt against u and previously accepted columns.
  std::vector<Eigen::VectorXd> ortho;
  ortho.push_back(u);
  for (int i = 0; i < p && static_cast<int>(ortho.size()) < p; ++i) {
    Eigen::VectorXd w = Eigen::VectorXd::Unit(p, i);
    for (const auto& o : ortho) w -= o.dot(w) * o;
    if (w.norm() > 1e-10) ortho.push_back(w.normalized());
  }
  for (std::size_t i = 1; i < ortho.size(); ++i) k.eq.push_back(ortho[i]);
  return finish(k);
}

PolyCone cone_zero(int dim) {
  PolyCone k;
  k.dim = dim;
  for (int i = 0; i < dim; ++i) k.eq.push_back(Eigen::VectorXd::Unit(dim, i));
  return finish(k);
}

PolyCone cone_full(int dim) {
  PolyCone k;
  k.dim = dim;
  for (int i = 0; i < dim; ++i) k.lineality.push_back(Eigen::VectorXd::Unit(dim, i));
  return finish(k);
}

namespace {

Eigen::VectorXd embed(const Eigen::VectorXd& v, int offset, int dim) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  out.segment(offset, v.size()) = v;
  return out;
}

}  // namespace

PolyCone product(const PolyCone& a, const PolyCone& b) {
  PolyCone k;
  k.dim = a.dim + b.dim;
  for (const auto& g : a.generators) k.generators.push_back(embed(g, 0, k.dim));
  for (const auto& g : b.generators) k.generators.push_back(embed(g, a.dim, k.dim));
  for (const auto& l : a.lineality) k.lineality.push_back(embed(l, 0, k.dim));
  for (const auto& l : b.lineality) k.lineality.push_back(embed(l, a.dim, k.dim));
  for (const auto& r : a.ineq) k.ineq.push_back(embed(r, 0, k.dim));
  for (const auto& r : b.ineq) k.ineq.push_back(embed(r, a.dim, k.dim));
  for (const auto& r : a.eq) k.eq.push_back(embed(r, 0, k.dim));
  for (const auto& r : b.eq) k.eq.push_back(embed(r, a.dim, k.dim));
  return finish(k);
}

ConeUnion product(const ConeUnion& a, const ConeUnion& b) {
  ConeUnion out;
  for (const auto& ka : a)
    for (const auto& kb : b) out.push_back(product(ka, kb));
  return out;
}

PolyCone polar(const PolyCone& k) {
  PolyCone p;
  p.dim = k.dim;
  p.generators = k.ineq;
  p.lineality = k.eq;
  p.ineq = k.generators;
  p.eq = k.lineality;
  return finish(p);
}

PolyCone negate(const PolyCone& k) {
  PolyCone n = k;
  for (auto& g : n.generators) g = -g;
  for (auto& a : n.ineq) a = -a;
  return finish(n);
}

bool cone_contains(const PolyCone& k, const Eigen::VectorXd& w, double tol) {
  const double s = tol * (1.0 + w.norm());
  for (const auto& a : k.ineq)
    if (a.dot(w) > s) return false;
  for (const auto& e : k.eq)
    if (std::abs(e.dot(w)) > s) return false;
  return true;
}

bool union_contains(const ConeUnion& u, const Eigen::VectorXd& w, double tol) {
  for (const auto& k : u)
    if (cone_contains(k, w, tol)) return true;
  return false;
}

bool cone_subset(const PolyCone& a, const PolyCone& b, double tol) {
  for (const auto& g : a.generators)
    if (!cone_contains(b, g, tol)) return false;
  for (const auto& l : a.lineality)
    if (!cone_contains(b, l, tol) || !cone_contains(b, Eigen::VectorXd(-l), tol)) return false;
  return true;
}

bool cone_equal(const PolyCone& a, const PolyCone& b, double tol) {
  return cone_subset(a, b, tol) && cone_subset(b, a, tol);
}

namespace {

PolyCone hull1(const ConeUnion& u) {
  bool pos = false, neg = false;
  for (const auto& k : u) {
    if (!k.lineality.empty()) pos = neg = true;
    for (const auto& g : k.generators) (g[0] > 0 ? pos : neg) = true;
  }
  if (pos && neg) return cone1_free();
  if (pos) return cone1_nonneg();
  if (neg) return cone1_nonpos();
  return cone1_zero();
}

PolyCone wedge2(const Eigen::VectorXd& v1, const Eigen::VectorXd& v2) {
  // Convex wedge between two independent rays (angle < pi).
  PolyCone k;
  k.dim = 2;
  k.generators.push_back(v1.normalized());
  k.generators.push_back(v2.normalized());
  Eigen::VectorXd n1(2), n2(2);
  n1 << -v1[1], v1[0];
  if (n1.dot(v2) > 0) n1 = -n1;  // outward at the v1 edge
  n2 << -v2[1], v2[0];
  if (n2.dot(v1) > 0) n2 = -n2;
  k.ineq.push_back(n1.normalized());
  k.ineq.push_back(n2.normalized());
  return k;
}

PolyCone halfplane2(const Eigen::VectorXd& line_dir, const Eigen::VectorXd& side) {
  PolyCone k;
  k.dim = 2;
  k.lineality.push_back(line_dir.normalized());
  Eigen::VectorXd n(2);
  n << -line_dir[1], line_dir[0];
  if (n.dot(side) > 0) n = -n;
  k.ineq.push_back(n.normalized());
  k.generators.push_back(side.normalized());
  return k;
}

PolyCone line2(const Eigen::VectorXd& v) {
  PolyCone k;
  k.dim = 2;
  k.lineality.push_back(v.normalized());
  Eigen::VectorXd n(2);
  n << -v[1], v[0];
  k.eq.push_back(n.normalized());
  return k;
}

PolyCone hull2(const ConeUnion& u) {
  // Gather all extreme directions (lineality contributes both signs).
  std::vector<Eigen::VectorXd> dirs;
  for (const auto& k : u) {
    for (const auto& g : k.generators) dirs.push_back(g.normalized());
    for (const auto& l : k.lineality) {
      dirs.push_back(l.normalized());
      dirs.push_back(-l.normalized());
    }
  }
  if (dirs.empty()) return cone_zero(2);
  if (dirs.size() == 1) return cone_ray(dirs[0]);

  std::vector<double> angles;
  angles.reserve(dirs.size());
  for (const auto& d : dirs) angles.push_back(std::atan2(d[1], d[0]));
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               angles.end());
  if (angles.size() == 1) {
    Eigen::VectorXd v(2);
    v << std::cos(angles[0]), std::sin(angles[0]);
    return cone_ray(v);
  }

  // Largest gap between consecutive directions on the circle. If every
  // gap is below pi the directions surround the origin and the hull is
  // the whole plane.
  const double two_pi = 2.0 * M_PI;
  double best_gap = -1.0;
  std::size_t best_at = 0;  // gap runs from angles[best_at] to the next angle
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double a = angles[i];
    const double b = i + 1 < angles.size() ? angles[i + 1] : angles[0] + two_pi;
    const double gap = b - a;
    if (gap > best_gap) {
      best_gap = gap;
      best_at = i;
    }
  }
  if (best_gap < M_PI - 1e-12) return cone_full(2);

  // Hull spans from the direction after the gap around to the one before
  // it; the spanned angle is 2*pi - best_gap.
  const double span = two_pi - best_gap;
  const double start = best_at + 1 < angles.size() ? angles[best_at + 1] : angles[0];
  Eigen::VectorXd v1(2), v2(2);
  v1 << std::cos(start), std::sin(start);
  v2 << std::cos(start + span), std::sin(start + span);
  if (span < 1e-12) return cone_ray(v1);
  if (std::abs(span - M_PI) <= 1e-12) {
    if (angles.size() == 2) return finish(line2(v1));
    // Pick any interior direction as the side witness.
    Eigen::VectorXd side(2);
    side << std::cos(start + span / 2), std::sin(start + span / 2);
    return finish(halfplane2(v1, side));
  }
  if (span > M_PI) {
    // More than a halfplane but not the full plane cannot occur for a
    // closed convex cone unless directions surround the origin, handled
    // above; guard anyway.
    return cone_full(2);
  }
  return finish(wedge2(v1, v2));
}

}  // namespace

PolyCone convex_hull(const ConeUnion& u) {
  if (u.empty()) throw std::invalid_argument("convex_hull of an empty union");
  const int dim = u.front().dim;
  for (const auto& k : u)
    if (k.dim != dim) throw std::invalid_argument("convex_hull: mixed dimensions");
  if (dim == 1) return hull1(u);
  if (dim == 2) return hull2(u);
  throw std::invalid_argument("convex_hull supports ambient dimension <= 2");
}

std::string describe(const PolyCone& k) {
  std::ostringstream os;
  os << "cone(dim=" << k.dim;
  os << ", gens={";
  for (std::size_t i = 0; i < k.generators.size(); ++i) {
    if (i) os << "; ";
    os << k.generators[i].transpose();
  }
  os << "}, lin={";
  for (std::size_t i = 0; i < k.lineality.size(); ++i) {
    if (i) os << "; ";
    os << k.lineality[i].transpose();
  }
  os << "})";
  return os.str();
}

}  // namespace dirval
