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

#include "dirval/program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace dirval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridFeasTol = 1e-6;      // stage-1 keep tolerance
constexpr double kCandidateWindow = 1e-2;  // objective window for polish starts
constexpr double kClusterTol = 1e-4;
constexpr double kImproveTol = 1e-13;  // polish must beat this to move a point
constexpr double kBoxEdgeTol = 1e-6;
constexpr int kMaxPolishStarts = 4000;

int base_intervals(int m) { return m == 1 ? 2000 : m == 2 ? 300 : 60; }

void check_dims(const ParametricProgram& prog, const Eigen::VectorXd& x,
                const Eigen::VectorXd& y) {
  if (x.size() != prog.n || y.size() != prog.m)
    throw std::invalid_argument("parametric program: point has wrong size");
}

// Objective with the feasible-indicator attached. Expression domain errors
// count as infeasible so one bad lattice point cannot abort a solve. The
// best point seen at the reporting tolerance is tracked across calls; ties
// keep the earlier point so an already optimal start never drifts.
struct ProbeEval {
  const ParametricProgram& prog;
  const Eigen::VectorXd& x;
  double best_value = kInf;
  double best_residual = 0.0;
  Eigen::VectorXd best_y;

  double operator()(const Eigen::VectorXd& y, double tol) {
    double r, v;
    try {
      r = distance(prog.C, constraint_value(prog, x, y));
      v = objective_value(prog, x, y);
    } catch (const EvalError&) {
      return kInf;
    }
    if (!std::isfinite(v)) return kInf;
    if (r <= prog.tol.feas && v < best_value) {
      best_value = v;
      best_residual = r;
      best_y = y;
    }
    return r <= tol ? v : kInf;
  }
};

// Golden-section descent of the indicator-restricted objective along
// coordinate j, bracketed one grid spacing either side of the start and
// clipped to the ybox. The indicator tolerance starts at the stage-1 keep
// tolerance and shrinks to the reporting tolerance as the bracket closes,
// so the search may enter the loosely feasible band early but settles on
// points that certify at 1e-8. Both probes are re-evaluated every round
// because the tolerance moves under them.
void polish_line(ProbeEval& eval, const Eigen::VectorXd& z, int j,
                 double spacing, const ParametricProgram& prog) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::max(prog.ybox_lo[j], z[j] - spacing);
  double b = std::min(prog.ybox_hi[j], z[j] + spacing);
  Eigen::VectorXd probe = z;
  double tol = kGridFeasTol;
  const double width_stop = prog.tol.polish * (1.0 + std::abs(z[j]));
  for (int iter = 0; iter < 90 && b - a > width_stop; ++iter) {
    tol = std::max(prog.tol.feas, tol * 0.7);
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    probe[j] = c;
    const double fc = eval(probe, tol);
    probe[j] = d;
    const double fd = eval(probe, tol);
    // Both probes off the feasible island: no direction signal, stop and
    // rely on the best certified point seen so far.
    if (fc == kInf && fd == kInf) break;
    if (fc <= fd)
      b = d;
    else
      a = c;
  }
}

struct Polished {
  Eigen::VectorXd y;
  double value = 0.0;
  double residual = 0.0;
  bool ok = false;
};

Polished polish_candidate(const ParametricProgram& prog,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& y0,
                          double value0, double residual0,
                          const std::vector<double>& spacing) {
  ProbeEval eval{prog, x};
  const bool start_ok = residual0 <= prog.tol.feas;
  if (start_ok) {
    eval.best_value = value0;
    eval.best_residual = residual0;
    eval.best_y = y0;
  }

  if (prog.m == 1) {
    polish_line(eval, y0, 0, spacing[0], prog);
  } else {
    Eigen::VectorXd z = y0;
    double current = value0;
    for (int cycle = 0; cycle < 30; ++cycle) {
      const double before = eval.best_value;
      for (int j = 0; j < prog.m; ++j) {
        polish_line(eval, z, j, spacing[j], prog);
        if (eval.best_y.size() > 0 && eval.best_value < current - kImproveTol) {
          z = eval.best_y;
          current = eval.best_value;
        }
      }
      if (before - eval.best_value <= prog.tol.polish) break;
    }
  }

  Polished out;
  const bool improved =
      eval.best_y.size() > 0 && eval.best_value < value0 - kImproveTol;
  if (improved || (!start_ok && eval.best_y.size() > 0)) {
    out.y = eval.best_y;
    out.value = eval.best_value;
    out.residual = eval.best_residual;
    out.ok = true;
  } else if (start_ok) {
    out.y = y0;
    out.value = value0;
    out.residual = residual0;
    out.ok = true;
  }
  return out;
}

double stationarity_residual(const ParametricProgram& prog,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             double value) {
  const double h = 1e-6;
  double worst = 0.0;
  Eigen::VectorXd probe = y;
  for (int j = 0; j < prog.m; ++j) {
    for (double sgn : {1.0, -1.0}) {
      const double yj = y[j] + sgn * h;
      if (yj < prog.ybox_lo[j] || yj > prog.ybox_hi[j]) continue;
      probe[j] = yj;
      try {
        if (distance(prog.C, constraint_value(prog, x, probe)) <=
            prog.tol.feas) {
          const double slope = (objective_value(prog, x, probe) - value) / h;
          worst = std::max(worst, -slope);
        }
      } catch (const EvalError&) {
        // a probe outside an expression's domain is simply not a usable
        // direction
      }
    }
    probe[j] = y[j];
  }
  return worst;
}

}  // namespace

ParametricProgram make_program(int n, int m, const std::string& objective,
                               const std::vector<std::string>& constraint_rows,
                               BlockSet C, Eigen::VectorXd ybox_lo,
                               Eigen::VectorXd ybox_hi) {
  if (n < 1) throw std::invalid_argument("make_program: need n >= 1");
  if (m < 1 || m > 3)
    throw std::invalid_argument("make_program: m must be 1, 2, or 3");
  validate(C);
  if (C.dim() != static_cast<int>(constraint_rows.size()))
    throw std::invalid_argument(
        "make_program: C consumes a different number of coordinates than "
        "there are constraint rows");
  if (ybox_lo.size() != m || ybox_hi.size() != m)
    throw std::invalid_argument("make_program: ybox has wrong size");
  for (int j = 0; j < m; ++j) {
    if (!std::isfinite(ybox_lo[j]) || !std::isfinite(ybox_hi[j]) ||
        ybox_lo[j] > ybox_hi[j])
      throw std::invalid_argument(
          "make_program: ybox must be bounded with lo <= hi");
  }

  ParametricProgram prog;
  prog.n = n;
  prog.m = m;
  prog.p = static_cast<int>(constraint_rows.size());
  prog.f = parse_expression(objective, n, m);
  for (const auto& row : constraint_rows)
    prog.P.push_back(parse_expression(row, n, m));

  for (int j = 0; j < n; ++j) prog.f_dx.push_back(differentiate(prog.f, 'x', j));
  for (int j = 0; j < m; ++j) prog.f_dy.push_back(differentiate(prog.f, 'y', j));
  for (const auto& row : prog.P) {
    std::vector<ExprPtr> dx, dy;
    for (int j = 0; j < n; ++j) dx.push_back(differentiate(row, 'x', j));
    for (int j = 0; j < m; ++j) dy.push_back(differentiate(row, 'y', j));
    prog.P_dx.push_back(std::move(dx));
    prog.P_dy.push_back(std::move(dy));
  }

  prog.C = std::move(C);
  prog.ybox_lo = std::move(ybox_lo);
  prog.ybox_hi = std::move(ybox_hi);
  return prog;
}

double objective_value(const ParametricProgram& prog, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& y) {
  check_dims(prog, x, y);
  return evaluate(prog.f, x, y);
}

Eigen::VectorXd constraint_value(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) {
  check_dims(prog, x, y);
  Eigen::VectorXd out(prog.p);
  for (int i = 0; i < prog.p; ++i) out[i] = evaluate(prog.P[i], x, y);
  return out;
}

Eigen::VectorXd objective_grad_x(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) {
  check_dims(prog, x, y);
  Eigen::VectorXd out(prog.n);
  for (int j = 0; j < prog.n; ++j) out[j] = evaluate(prog.f_dx[j], x, y);
  return out;
}

Eigen::VectorXd objective_grad_y(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) {
  check_dims(prog, x, y);
  Eigen::VectorXd out(prog.m);
  for (int j = 0; j < prog.m; ++j) out[j] = evaluate(prog.f_dy[j], x, y);
  return out;
}

Eigen::MatrixXd constraint_jac_x(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) {
  check_dims(prog, x, y);
  Eigen::MatrixXd out(prog.p, prog.n);
  for (int i = 0; i < prog.p; ++i)
    for (int j = 0; j < prog.n; ++j) out(i, j) = evaluate(prog.P_dx[i][j], x, y);
  return out;
}

Eigen::MatrixXd constraint_jac_y(const ParametricProgram& prog,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& y) {
  check_dims(prog, x, y);
  Eigen::MatrixXd out(prog.p, prog.m);
  for (int i = 0; i < prog.p; ++i)
    for (int j = 0; j < prog.m; ++j) out(i, j) = evaluate(prog.P_dy[i][j], x, y);
  return out;
}

FeasibilityCheck is_feasible(const ParametricProgram& prog,
                             const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y) {
  FeasibilityCheck out;
  out.residual = distance(prog.C, constraint_value(prog, x, y));
  out.feasible = out.residual <= prog.tol.feas;
  return out;
}

ValueSolveResult solve_value(const ParametricProgram& prog,
                             const Eigen::VectorXd& x, int grid_scale) {
  if (x.size() != prog.n)
    throw std::invalid_argument("solve_value: x has wrong size");
  if (!x.allFinite())
    throw std::invalid_argument("solve_value: x must be finite");
  if (grid_scale < 1)
    throw std::invalid_argument("solve_value: grid_scale must be >= 1");

  const int m = prog.m;
  const int intervals = base_intervals(m) * grid_scale;
  std::vector<double> spacing(m);
  for (int j = 0; j < m; ++j)
    spacing[j] = (prog.ybox_hi[j] - prog.ybox_lo[j]) / intervals;

  // Stage 1: lattice sweep. Grid coordinates are computed as a convex mix
  // of the box ends so doubling grid_scale reproduces the coarse lattice
  // exactly and refinement stays monotone.
  struct GridPoint {
    Eigen::VectorXd y;
    double value;
    double residual;
  };
  std::vector<GridPoint> feas;
  double best_grid = kInf;

  std::vector<int> idx(m, 0);
  Eigen::VectorXd y(m);
  while (true) {
    for (int j = 0; j < m; ++j) {
      const double t = static_cast<double>(idx[j]) / intervals;
      y[j] = prog.ybox_lo[j] + (prog.ybox_hi[j] - prog.ybox_lo[j]) * t;
    }
    try {
      const double r = distance(prog.C, constraint_value(prog, x, y));
      if (r <= kGridFeasTol) {
        const double v = objective_value(prog, x, y);
        if (std::isfinite(v)) {
          feas.push_back({y, v, r});
          best_grid = std::min(best_grid, v);
        }
      }
    } catch (const EvalError&) {
      // skip lattice points outside an expression's domain
    }
    int j = 0;
    while (j < m && ++idx[j] > intervals) {
      idx[j] = 0;
      ++j;
    }
    if (j == m) break;
  }

  ValueSolveResult out;
  if (feas.empty()) return out;

  // Stage 2: polish every near-optimal lattice point. When a flat
  // objective makes too many candidates, thin by stride so the kept set
  // still covers the whole optimal region.
  const double window = std::max(kCandidateWindow, 10.0 * prog.tol.opt_cluster);
  std::vector<const GridPoint*> cand;
  for (const auto& g : feas)
    if (g.value <= best_grid + window) cand.push_back(&g);
  std::stable_sort(cand.begin(), cand.end(),
                   [](const GridPoint* a, const GridPoint* b) {
                     return a->value < b->value;
                   });
  if (static_cast<int>(cand.size()) > kMaxPolishStarts) {
    std::vector<const GridPoint*> kept;
    const double stride =
        static_cast<double>(cand.size()) / kMaxPolishStarts;
    for (int i = 0; i < kMaxPolishStarts; ++i)
      kept.push_back(cand[static_cast<std::size_t>(i * stride)]);
    cand = std::move(kept);
  }

  std::vector<Polished> polished;
  for (const GridPoint* g : cand) {
    Polished res =
        polish_candidate(prog, x, g->y, g->value, g->residual, spacing);
    if (res.ok) polished.push_back(std::move(res));
  }
  if (polished.empty()) return out;

  double best = kInf;
  for (const auto& p : polished) best = std::min(best, p.value);

  // Stage 3: cluster the report window and attach per-point diagnostics.
  std::vector<Polished> rep;
  for (auto& p : polished)
    if (p.value <= best + prog.tol.opt_cluster) rep.push_back(std::move(p));
  std::stable_sort(rep.begin(), rep.end(),
                   [](const Polished& a, const Polished& b) {
                     return a.value < b.value;
                   });

  std::vector<char> used(rep.size(), 0);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    std::vector<std::size_t> members{i};
    for (std::size_t k = i + 1; k < rep.size(); ++k) {
      if (!used[k] && (rep[k].y - rep[i].y).norm() <= kClusterTol) {
        used[k] = 1;
        members.push_back(k);
      }
    }
    double diam = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        diam = std::max(diam, (rep[members[a]].y - rep[members[b]].y).norm());
    out.max_cluster_diameter = std::max(out.max_cluster_diameter, diam);

    SolutionPoint sp;
    sp.y = rep[i].y;
    sp.value = rep[i].value;
    sp.feas_residual = rep[i].residual;
    sp.stationarity_residual =
        stationarity_residual(prog, x, rep[i].y, rep[i].value);
    out.points.push_back(std::move(sp));
  }

  out.status = SolveStatus::Solved;
  out.value = best;
  out.cluster_count = static_cast<int>(out.points.size());
  for (const auto& sp : out.points)
    for (int j = 0; j < m; ++j)
      if (sp.y[j] - prog.ybox_lo[j] <= kBoxEdgeTol ||
          prog.ybox_hi[j] - sp.y[j] <= kBoxEdgeTol)
        out.touches_ybox = true;
  return out;
}

double value_accuracy_probe(
    const ParametricProgram& prog, const std::vector<Eigen::VectorXd>& xs,
    const std::function<double(const Eigen::VectorXd&)>& reference,
    int grid_scale) {
  double worst = 0.0;
  for (const auto& x : xs) {
    const ValueSolveResult res = solve_value(prog, x, grid_scale);
    if (res.status != SolveStatus::Solved) return kInf;
    worst = std::max(worst, std::abs(res.value - reference(x)));
  }
  return worst;
}

}  // namespace dirval
