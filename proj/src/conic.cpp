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

#include "dirval/conic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dirval {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarginCap = 1e6;
constexpr double kInteriorTol = 1e-9;

LinearProgram primal_lp(const ConicPair& pair) {
  const int nx = static_cast<int>(pair.alpha.size());
  const int ni = static_cast<int>(pair.K.ineq.size());
  const int ne = static_cast<int>(pair.K.eq.size());

  LinearProgram lp;
  lp.c = pair.alpha;
  lp.A.resize(ni, nx);
  lp.b.resize(ni);
  for (int i = 0; i < ni; ++i) {
    lp.A.row(i) = pair.K.ineq[i].transpose() * pair.A;
    lp.b[i] = -pair.K.ineq[i].dot(pair.b);
  }
  lp.E.resize(ne, nx);
  lp.e.resize(ne);
  for (int i = 0; i < ne; ++i) {
    lp.E.row(i) = pair.K.eq[i].transpose() * pair.A;
    lp.e[i] = -pair.K.eq[i].dot(pair.b);
  }
  return lp;
}

// The dual lives in the polar cone, whose inequality rows are exactly the
// generators of K and whose equalities are its lineality directions.
LinearProgram dual_lp(const ConicPair& pair) {
  const int p = pair.K.dim;
  const int nx = static_cast<int>(pair.alpha.size());
  const int ni = static_cast<int>(pair.K.generators.size());
  const int ne = static_cast<int>(pair.K.lineality.size());

  LinearProgram lp;
  lp.c = -pair.b;  // maximize dot(b, lambda)
  lp.A.resize(ni, p);
  lp.b.resize(ni);
  for (int i = 0; i < ni; ++i) {
    lp.A.row(i) = pair.K.generators[i].transpose();
    lp.b[i] = 0.0;
  }
  lp.E.resize(ne + nx, p);
  lp.e.resize(ne + nx);
  for (int i = 0; i < ne; ++i) {
    lp.E.row(i) = pair.K.lineality[i].transpose();
    lp.e[i] = 0.0;
  }
  lp.E.bottomRows(nx) = pair.A.transpose();
  lp.e.tail(nx) = -pair.alpha;
  return lp;
}

}  // namespace

PairSolution solve_pair(const ConicPair& pair) {
  if (pair.A.rows() != pair.K.dim || pair.A.rows() != pair.b.size())
    throw std::invalid_argument("conic pair dimensions do not match");
  if (pair.A.cols() != pair.alpha.size())
    throw std::invalid_argument("conic pair cost length does not match A");

  PairSolution sol;

  const LPOutcome prim = solve_lp(primal_lp(pair));
  sol.primal_status = prim.status;
  sol.primal_point = prim.point;
  switch (prim.status) {
    case LPStatus::Optimal: sol.primal_value = prim.value + pair.c; break;
    case LPStatus::Infeasible: sol.primal_value = kInf; break;
    case LPStatus::Unbounded: sol.primal_value = -kInf; break;
    case LPStatus::Breakdown: sol.primal_value = 0.0; break;
  }

  const LPOutcome du = solve_lp(dual_lp(pair));
  sol.dual_status = du.status;
  sol.dual_point = du.point;
  switch (du.status) {
    case LPStatus::Optimal: sol.dual_value = -du.value + pair.c; break;
    case LPStatus::Infeasible: sol.dual_value = -kInf; break;
    case LPStatus::Unbounded: sol.dual_value = kInf; break;
    case LPStatus::Breakdown: sol.dual_value = 0.0; break;
  }

  sol.gap = sol.primal_status == LPStatus::Optimal && sol.dual_status == LPStatus::Optimal
                ? std::abs(sol.primal_value - sol.dual_value)
                : kInf;
  return sol;
}

BoundednessResult dual_face_bounded(const ConicPair& pair, double dual_value) {
  const int p = pair.K.dim;
  const int nx = static_cast<int>(pair.alpha.size());
  const int ni = static_cast<int>(pair.K.generators.size());
  const int ne = static_cast<int>(pair.K.lineality.size());

  Eigen::MatrixXd A(ni, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ni);
  for (int i = 0; i < ni; ++i) A.row(i) = pair.K.generators[i].transpose();

  Eigen::MatrixXd E(ne + nx + 1, p);
  Eigen::VectorXd e(ne + nx + 1);
  for (int i = 0; i < ne; ++i) {
    E.row(i) = pair.K.lineality[i].transpose();
    e[i] = 0.0;
  }
  E.middleRows(ne, nx) = pair.A.transpose();
  e.segment(ne, nx) = -pair.alpha;
  E.row(ne + nx) = pair.b.transpose();
  e[ne + nx] = dual_value - pair.c;

  return polyhedron_bounded(A, b, E, e);
}

InteriorResult interior_check(const Eigen::VectorXd& b, const Eigen::MatrixXd& M,
                              const PolyCone& K, const Eigen::VectorXd& u_offset) {
  const int p = K.dim;
  if (b.size() != p || u_offset.size() != p)
    throw std::invalid_argument("interior_check offset dimension mismatch");
  const int m = static_cast<int>(M.cols());
  if (M.rows() > 0 && M.rows() != p) throw std::invalid_argument("interior_check matrix mismatch");

  const int ni = static_cast<int>(K.ineq.size());
  const int ne = static_cast<int>(K.eq.size());

  InteriorResult res;
  for (const double sigma : {1.0, -1.0}) {
    const Eigen::VectorXd shift = b + sigma * u_offset;
    double margin = kMarginCap;
    for (int j = 0; j < p && margin > 0.0; ++j) {
      for (const double tau : {1.0, -1.0}) {
        // Variables (r, v): maximize r with r*tau*e_j - shift - M v in K.
        LinearProgram lp;
        lp.c = Eigen::VectorXd::Zero(1 + m);
        lp.c[0] = -1.0;
        lp.A.resize(ni + 1, 1 + m);
        lp.b.resize(ni + 1);
        for (int i = 0; i < ni; ++i) {
          const auto& g = K.ineq[i];
          lp.A(i, 0) = tau * g[j];
          if (m > 0) lp.A.row(i).tail(m) = -(g.transpose() * M);
          lp.b[i] = g.dot(shift);
        }
        lp.A.row(ni).setZero();
        lp.A(ni, 0) = 1.0;
        lp.b[ni] = kMarginCap;
        lp.E.resize(ne, 1 + m);
        lp.e.resize(ne);
        for (int i = 0; i < ne; ++i) {
          const auto& q = K.eq[i];
          lp.E(i, 0) = tau * q[j];
          if (m > 0) lp.E.row(i).tail(m) = -(q.transpose() * M);
          lp.e[i] = q.dot(shift);
        }

        const LPOutcome out = solve_lp(lp);
        const double r = out.status == LPStatus::Optimal ? out.point[0] : 0.0;
        margin = std::min(margin, r);
        if (margin <= 0.0) break;
      }
    }
    if (sigma > 0) {
      res.margin_plus = margin;
      res.holds_plus = margin > kInteriorTol;
    } else {
      res.margin_minus = margin;
      res.holds_minus = margin > kInteriorTol;
    }
  }
  return res;
}

std::optional<Eigen::VectorXd> linear_system_feasible(const Eigen::MatrixXd& M,
                                                      const PolyCone& rhs_cone,
                                                      const Eigen::VectorXd& offset) {
  const int p = rhs_cone.dim;
  if (offset.size() != p) throw std::invalid_argument("offset dimension mismatch");
  const int m = static_cast<int>(M.cols());
  if (M.rows() > 0 && M.rows() != p) throw std::invalid_argument("matrix dimension mismatch");

  const int ni = static_cast<int>(rhs_cone.ineq.size());
  const int ne = static_cast<int>(rhs_cone.eq.size());

  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(m);
  lp.A.resize(ni, m);
  lp.b.resize(ni);
  for (int i = 0; i < ni; ++i) {
    const auto& g = rhs_cone.ineq[i];
    lp.A.row(i) = m > 0 ? (g.transpose() * M).eval() : Eigen::RowVectorXd(0);
    lp.b[i] = -g.dot(offset);
  }
  lp.E.resize(ne, m);
  lp.e.resize(ne);
  for (int i = 0; i < ne; ++i) {
    const auto& q = rhs_cone.eq[i];
    lp.E.row(i) = m > 0 ? (q.transpose() * M).eval() : Eigen::RowVectorXd(0);
    lp.e[i] = -q.dot(offset);
  }

  const LPOutcome out = solve_lp(lp);
  if (out.status != LPStatus::Optimal) return std::nullopt;
  return out.point;
}

}  // namespace dirval
