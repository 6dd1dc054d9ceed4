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

#include "dirval/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dirval {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kPivotTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared tableau layout: rows 0..m-1 are constraints, row m is the reduced
// cost row; the last column holds the right-hand side (and, in the cost
// row, minus the current objective).
void pivot(Eigen::MatrixXd& T, int r, int j) {
  T.row(r) /= T(r, j);
  for (int rr = 0; rr < T.rows(); ++rr) {
    if (rr == r) continue;
    const double g = T(rr, j);
    if (g != 0.0) {
      T.row(rr) -= g * T.row(r);
      T(rr, j) = 0.0;
    }
  }
}

enum class StepResult { Optimal, Unbounded, Breakdown };

// Bland's rule: enter the lowest-index improving column, leave by the
// lowest basic index among the minimum-ratio rows. Columns at index
// >= enter_limit (the artificials) never enter.
StepResult run_simplex(Eigen::MatrixXd& T, std::vector<int>& basic, int enter_limit,
                       int* pivots, int* unbounded_col) {
  const int m = static_cast<int>(T.rows()) - 1;
  const int rhs = static_cast<int>(T.cols()) - 1;
  const int cap = 20000 + 100 * (m + rhs);

  while (true) {
    int j = -1;
    for (int col = 0; col < enter_limit; ++col) {
      if (T(m, col) < -kFeasTol) {
        j = col;
        break;
      }
    }
    if (j < 0) return StepResult::Optimal;

    int best_r = -1;
    double best_ratio = kInf;
    bool tiny_positive = false;
    for (int r = 0; r < m; ++r) {
      const double g = T(r, j);
      if (g > kPivotTol) {
        const double ratio = T(r, rhs) / g;
        if (best_r < 0 || ratio < best_ratio - kPivotTol ||
            (ratio <= best_ratio + kPivotTol && basic[r] < basic[best_r])) {
          best_ratio = ratio;
          best_r = r;
        }
      } else if (g > 0.0) {
        tiny_positive = true;
      }
    }
    if (best_r < 0) {
      if (tiny_positive) return StepResult::Breakdown;
      if (unbounded_col) *unbounded_col = j;
      return StepResult::Unbounded;
    }

    pivot(T, best_r, j);
    basic[best_r] = j;
    if (++*pivots > cap) return StepResult::Breakdown;
  }
}

}  // namespace

const char* lp_status_name(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::Breakdown: return "breakdown";
  }
  return "unknown";
}

LPOutcome solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars();
  if (lp.A.rows() > 0 && lp.A.cols() != n) throw std::invalid_argument("A column count mismatch");
  if (lp.E.rows() > 0 && lp.E.cols() != n) throw std::invalid_argument("E column count mismatch");
  if (lp.A.rows() != lp.b.size()) throw std::invalid_argument("A/b row count mismatch");
  if (lp.E.rows() != lp.e.size()) throw std::invalid_argument("E/e row count mismatch");
  if (lp.lower.size() != 0 && lp.lower.size() != n) throw std::invalid_argument("lower bound size mismatch");
  if (lp.upper.size() != 0 && lp.upper.size() != n) throw std::invalid_argument("upper bound size mismatch");

  LPOutcome out;
  out.pivots = 0;

  if (n == 0) {
    const bool ok = (lp.b.size() == 0 || lp.b.minCoeff() >= -kFeasTol) &&
                    (lp.e.size() == 0 || lp.e.cwiseAbs().maxCoeff() <= kFeasTol);
    out.status = ok ? LPStatus::Optimal : LPStatus::Infeasible;
    out.value = 0.0;
    out.point = Eigen::VectorXd(0);
    return out;
  }

  // Inequality rows: A, then finite lower bounds (-w_i <= -lo), then finite
  // upper bounds (w_i <= up). Free variables are split as w = wp - wm.
  std::vector<Eigen::VectorXd> ineq_rows;
  std::vector<double> ineq_rhs;
  for (int r = 0; r < lp.A.rows(); ++r) {
    ineq_rows.push_back(lp.A.row(r).transpose());
    ineq_rhs.push_back(lp.b[r]);
  }
  for (int i = 0; i < n && lp.lower.size() == n; ++i) {
    if (lp.lower[i] > -kInf) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      row[i] = -1.0;
      ineq_rows.push_back(row);
      ineq_rhs.push_back(-lp.lower[i]);
    }
  }
  for (int i = 0; i < n && lp.upper.size() == n; ++i) {
    if (lp.upper[i] < kInf) {
      Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
      row[i] = 1.0;
      ineq_rows.push_back(row);
      ineq_rhs.push_back(lp.upper[i]);
    }
  }

  const int mi = static_cast<int>(ineq_rows.size());
  const int me = static_cast<int>(lp.E.rows());
  const int m = mi + me;
  const int ns = 2 * n + mi;  // split variables then slacks

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, ns);
  Eigen::VectorXd h(m);
  for (int r = 0; r < mi; ++r) {
    G.row(r).segment(0, n) = ineq_rows[r].transpose();
    G.row(r).segment(n, n) = -ineq_rows[r].transpose();
    G(r, 2 * n + r) = 1.0;
    h[r] = ineq_rhs[r];
  }
  for (int r = 0; r < me; ++r) {
    G.row(mi + r).segment(0, n) = lp.E.row(r);
    G.row(mi + r).segment(n, n) = -lp.E.row(r);
    h[mi + r] = lp.e[r];
  }
  for (int r = 0; r < m; ++r) {
    if (h[r] < 0.0) {
      G.row(r) = -G.row(r);
      h[r] = -h[r];
    }
  }

  // Rows whose slack still has coefficient +1 start with the slack basic;
  // the rest get an artificial.
  std::vector<int> basic(m, -1);
  std::vector<int> art_rows;
  for (int r = 0; r < m; ++r) {
    if (r < mi && G(r, 2 * n + r) > 0.5) {
      basic[r] = 2 * n + r;
    } else {
      art_rows.push_back(r);
    }
  }
  const int na = static_cast<int>(art_rows.size());
  const int ncols = ns + na;

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, ncols + 1);
  T.block(0, 0, m, ns) = G;
  T.col(ncols).head(m) = h;
  for (int k = 0; k < na; ++k) {
    T(art_rows[k], ns + k) = 1.0;
    basic[art_rows[k]] = ns + k;
  }

  // Phase 1: minimize the artificial sum.
  for (int k = 0; k < na; ++k) T(m, ns + k) = 1.0;
  for (int k = 0; k < na; ++k) T.row(m) -= T.row(art_rows[k]);

  StepResult res = run_simplex(T, basic, ns, &out.pivots, nullptr);
  if (res == StepResult::Breakdown || res == StepResult::Unbounded) {
    out.status = LPStatus::Breakdown;
    return out;
  }

  double art_sum = 0.0;
  for (int r = 0; r < m; ++r) {
    if (basic[r] >= ns) art_sum += T(r, ncols);
  }
  if (art_sum > kFeasTol) {
    out.status = LPStatus::Infeasible;
    return out;
  }

  // Drive leftover artificials out of the basis; rows where no structural
  // pivot exists are redundant and get dropped.
  std::vector<bool> keep(m, true);
  for (int r = 0; r < m; ++r) {
    if (basic[r] < ns) continue;
    int jbest = -1;
    double gbest = kPivotTol;
    for (int j = 0; j < ns; ++j) {
      if (std::abs(T(r, j)) > gbest) {
        gbest = std::abs(T(r, j));
        jbest = j;
      }
    }
    if (jbest >= 0) {
      pivot(T, r, jbest);
      basic[r] = jbest;
    } else {
      keep[r] = false;
    }
  }

  int m2 = 0;
  for (int r = 0; r < m; ++r) m2 += keep[r] ? 1 : 0;
  Eigen::MatrixXd T2 = Eigen::MatrixXd::Zero(m2 + 1, ns + 1);
  std::vector<int> basic2;
  basic2.reserve(m2);
  {
    int rr = 0;
    for (int r = 0; r < m; ++r) {
      if (!keep[r]) continue;
      T2.row(rr).segment(0, ns) = T.row(r).segment(0, ns);
      T2(rr, ns) = std::max(T(r, ncols), 0.0);
      basic2.push_back(basic[r]);
      ++rr;
    }
  }

  // Phase 2 with the real costs.
  for (int i = 0; i < n; ++i) {
    T2(m2, i) = lp.c[i];
    T2(m2, n + i) = -lp.c[i];
  }
  for (int r = 0; r < m2; ++r) {
    const double coef = T2(m2, basic2[r]);
    if (coef != 0.0) T2.row(m2) -= coef * T2.row(r);
  }

  int unb_col = -1;
  res = run_simplex(T2, basic2, ns, &out.pivots, &unb_col);

  auto extract_w = [&]() {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(ns);
    for (int r = 0; r < m2; ++r) z[basic2[r]] = T2(r, ns);
    return Eigen::VectorXd(z.head(n) - z.segment(n, n));
  };

  if (res == StepResult::Breakdown) {
    out.status = LPStatus::Breakdown;
    return out;
  }
  if (res == StepResult::Unbounded) {
    Eigen::VectorXd rz = Eigen::VectorXd::Zero(ns);
    rz[unb_col] = 1.0;
    for (int r = 0; r < m2; ++r) rz[basic2[r]] = -T2(r, unb_col);
    out.status = LPStatus::Unbounded;
    out.value = -kInf;
    out.point = extract_w();
    out.ray = rz.head(n) - rz.segment(n, n);
    return out;
  }

  out.point = extract_w();
  out.value = lp.c.dot(out.point);

  // Sanity residual check on the reconstructed point.
  double viol = 0.0;
  if (lp.A.rows() > 0) viol = std::max(viol, (lp.A * out.point - lp.b).maxCoeff());
  if (lp.E.rows() > 0) viol = std::max(viol, (lp.E * out.point - lp.e).cwiseAbs().maxCoeff());
  for (int i = 0; i < n && lp.lower.size() == n; ++i) {
    if (lp.lower[i] > -kInf) viol = std::max(viol, lp.lower[i] - out.point[i]);
  }
  for (int i = 0; i < n && lp.upper.size() == n; ++i) {
    if (lp.upper[i] < kInf) viol = std::max(viol, out.point[i] - lp.upper[i]);
  }
  const double scale = 1.0 + out.point.cwiseAbs().maxCoeff();
  out.status = viol <= 1e-7 * scale ? LPStatus::Optimal : LPStatus::Breakdown;
  return out;
}

namespace {

// H-representation rows of K plus the kernel of M, as equality/inequality
// blocks over a free lambda variable.
void cone_membership_rows(const PolyCone& K, const Eigen::MatrixXd& M, Eigen::MatrixXd* A,
                          Eigen::VectorXd* b, Eigen::MatrixXd* E, Eigen::VectorXd* e) {
  const int p = K.dim;
  const int ni = static_cast<int>(K.ineq.size());
  const int ne = static_cast<int>(K.eq.size());
  const int nm = static_cast<int>(M.rows());
  A->resize(ni, p);
  b->setZero(ni);
  for (int i = 0; i < ni; ++i) A->row(i) = K.ineq[i].transpose();
  E->resize(ne + nm, p);
  e->setZero(ne + nm);
  for (int i = 0; i < ne; ++i) E->row(i) = K.eq[i].transpose();
  if (nm > 0) E->bottomRows(nm) = M;
}

}  // namespace

std::optional<Eigen::VectorXd> cone_nonzero_element(const PolyCone& K, const Eigen::MatrixXd& M) {
  const int p = K.dim;
  if (M.rows() > 0 && M.cols() != p) throw std::invalid_argument("kernel matrix width mismatch");
  const int g = static_cast<int>(K.generators.size());
  const int l = static_cast<int>(K.lineality.size());
  if (g + l == 0) return std::nullopt;

  // One shot over the V-representation coefficients, coefficient sum 1.
  {
    const int nv = g + 2 * l;
    Eigen::MatrixXd span(p, nv);
    for (int i = 0; i < g; ++i) span.col(i) = K.generators[i];
    for (int i = 0; i < l; ++i) {
      span.col(g + i) = K.lineality[i];
      span.col(g + l + i) = -K.lineality[i];
    }

    LinearProgram lp;
    lp.c = Eigen::VectorXd::Zero(nv);
    const int nm = static_cast<int>(M.rows());
    lp.E.resize(nm + 1, nv);
    lp.e.resize(nm + 1);
    if (nm > 0) {
      lp.E.topRows(nm) = M * span;
      lp.e.head(nm).setZero();
    }
    lp.E.row(nm).setOnes();
    lp.e[nm] = 1.0;
    lp.A.resize(0, nv);
    lp.b.resize(0);
    lp.lower = Eigen::VectorXd::Zero(nv);
    lp.upper = Eigen::VectorXd::Constant(nv, kInf);

    const LPOutcome sol = solve_lp(lp);
    if (sol.status == LPStatus::Infeasible) return std::nullopt;
    if (sol.status == LPStatus::Optimal) {
      Eigen::VectorXd lambda = span * sol.point;
      if (lambda.cwiseAbs().maxCoeff() > 1e-9) return lambda;
      // A zero witness can still mask a lineality direction (nu+ and nu-
      // cancel); fall through to the probing pass.
    }
  }

  Eigen::MatrixXd A, E;
  Eigen::VectorXd b, e;
  cone_membership_rows(K, M, &A, &b, &E, &e);
  for (int j = 0; j < p; ++j) {
    for (const double sign : {1.0, -1.0}) {
      LinearProgram lp;
      lp.c = Eigen::VectorXd::Zero(p);
      lp.c[j] = -sign;
      lp.A.resize(A.rows() + 1, p);
      lp.b.resize(A.rows() + 1);
      lp.A.topRows(A.rows()) = A;
      lp.b.head(A.rows()) = b;
      lp.A.row(A.rows()).setZero();
      lp.A(A.rows(), j) = sign;
      lp.b[A.rows()] = 1.0;
      lp.E = E;
      lp.e = e;

      const LPOutcome sol = solve_lp(lp);
      if (sol.status == LPStatus::Optimal && sol.value <= -0.5) return sol.point;
    }
  }
  return std::nullopt;
}

BoundednessResult polyhedron_bounded(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                     const Eigen::MatrixXd& E, const Eigen::VectorXd& e) {
  (void)b;
  (void)e;
  const int nA = A.rows() > 0 ? static_cast<int>(A.cols()) : 0;
  const int nE = E.rows() > 0 ? static_cast<int>(E.cols()) : 0;
  const int nn = std::max(nA, nE);
  if (A.rows() > 0 && E.rows() > 0 && nA != nE) throw std::invalid_argument("A/E width mismatch");

  BoundednessResult res;
  for (int j = 0; j < nn; ++j) {
    for (const double sign : {1.0, -1.0}) {
      LinearProgram lp;
      lp.c = Eigen::VectorXd::Zero(nn);
      lp.c[j] = -sign;
      lp.A.resize(A.rows() + 1, nn);
      lp.b.setZero(A.rows() + 1);
      if (A.rows() > 0) lp.A.topRows(A.rows()) = A;
      lp.A.row(A.rows()).setZero();
      lp.A(A.rows(), j) = sign;
      lp.b[A.rows()] = 1.0;
      if (E.rows() > 0) {
        lp.E = E;
        lp.e = Eigen::VectorXd::Zero(E.rows());
      } else {
        lp.E.resize(0, nn);
        lp.e.resize(0);
      }

      const LPOutcome sol = solve_lp(lp);
      if (sol.status == LPStatus::Optimal && sol.value <= -0.5) {
        res.bounded = false;
        res.ray = sol.point;
        return res;
      }
    }
  }
  return res;
}

}  // namespace dirval
