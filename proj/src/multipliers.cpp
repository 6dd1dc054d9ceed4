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

#include "dirval/multipliers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "dirval/cones.hpp"
#include "dirval/conic.hpp"
#include "dirval/simplex.hpp"

namespace dirval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPointTol = 1e-9;

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& rows, int dim) {
  Eigen::MatrixXd out(static_cast<int>(rows.size()), dim);
  for (int i = 0; i < out.rows(); ++i) out.row(i) = rows[i].transpose();
  return out;
}

// H-rep of one multiplier polyhedron:
//   { lambda : lambda in piece, jac_y^T lambda = -grad_y }.
struct PieceSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd E;
  Eigen::VectorXd e;
};

PieceSystem piece_system(const PolyCone& normal, const Eigen::MatrixXd& jac_y,
                         const Eigen::VectorXd& grad_y) {
  const int p = normal.dim;
  const int m = static_cast<int>(jac_y.cols());
  PieceSystem sys;
  sys.A = stack_rows(normal.ineq, p);
  sys.b = Eigen::VectorXd::Zero(sys.A.rows());
  sys.E.resize(static_cast<int>(normal.eq.size()) + m, p);
  sys.e.resize(sys.E.rows());
  for (std::size_t i = 0; i < normal.eq.size(); ++i) {
    sys.E.row(static_cast<int>(i)) = normal.eq[i].transpose();
    sys.e[static_cast<int>(i)] = 0.0;
  }
  sys.E.bottomRows(m) = jac_y.transpose();
  sys.e.tail(m) = -grad_y;
  return sys;
}

LPOutcome solve_piece_lp(const PieceSystem& sys, const Eigen::VectorXd& cost) {
  LinearProgram lp;
  lp.c = cost;
  lp.A = sys.A;
  lp.b = sys.b;
  lp.E = sys.E;
  lp.e = sys.e;
  return solve_lp(lp);
}

ConeUnion normal_pieces(const ParametricProgram& prog, const Eigen::VectorXd& z,
                        MultiplierKind kind) {
  const Eigen::VectorXd zero_d = Eigen::VectorXd::Zero(prog.p);
  if (kind == MultiplierKind::Clarke)
    return {clarke_normal_cone(prog.C, z, zero_d)};
  return dir_normal_cone(prog.C, z, zero_d);
}

void require_feasible(const ParametricProgram& prog, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y, const char* who) {
  if (!is_feasible(prog, x, y).feasible)
    throw std::invalid_argument(std::string(who) +
                                ": y is not feasible at x within tolerance");
}

}  // namespace

MultiplierSet multiplier_set(const ParametricProgram& prog,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             MultiplierKind kind) {
  require_feasible(prog, x, y, "multiplier_set");

  MultiplierSet ms;
  ms.kind = kind;
  ms.x = x;
  ms.y = y;
  ms.z = project(prog.C, constraint_value(prog, x, y)).point;
  ms.grad_x = objective_grad_x(prog, x, y);
  ms.grad_y = objective_grad_y(prog, x, y);
  ms.jac_x = constraint_jac_x(prog, x, y);
  ms.jac_y = constraint_jac_y(prog, x, y);

  bool any_nonempty = false;
  bool all_bounded = true;
  bool all_singleton = true;
  Eigen::VectorXd common_point;

  for (const PolyCone& normal : normal_pieces(prog, ms.z, kind)) {
    MultiplierPiece piece;
    piece.normal = normal;
    const PieceSystem sys = piece_system(normal, ms.jac_y, ms.grad_y);

    const LPOutcome feas =
        solve_piece_lp(sys, Eigen::VectorXd::Zero(prog.p));
    if (feas.status == LPStatus::Optimal) {
      piece.empty = false;
      piece.witness = feas.point;
      any_nonempty = true;

      piece.bounded = polyhedron_bounded(sys.A, sys.b, sys.E, sys.e).bounded;
      if (piece.bounded) {
        piece.coord_min.resize(prog.p);
        piece.coord_max.resize(prog.p);
        for (int j = 0; j < prog.p; ++j) {
          Eigen::VectorXd cost = Eigen::VectorXd::Zero(prog.p);
          cost[j] = 1.0;
          const LPOutcome lo = solve_piece_lp(sys, cost);
          cost[j] = -1.0;
          const LPOutcome hi = solve_piece_lp(sys, cost);
          if (lo.status != LPStatus::Optimal || hi.status != LPStatus::Optimal)
            throw std::runtime_error(
                "multiplier_set: range LP failed on a bounded piece");
          piece.coord_min[j] = lo.value;
          piece.coord_max[j] = -hi.value;
        }
        const double width =
            (piece.coord_max - piece.coord_min).lpNorm<Eigen::Infinity>();
        if (width <= kPointTol) {
          const Eigen::VectorXd pt =
              0.5 * (piece.coord_min + piece.coord_max);
          if (common_point.size() == 0)
            common_point = pt;
          else if ((common_point - pt).lpNorm<Eigen::Infinity>() > kPointTol)
            all_singleton = false;
        } else {
          all_singleton = false;
        }
      } else {
        all_bounded = false;
        all_singleton = false;
      }
    }
    ms.pieces.push_back(std::move(piece));
  }

  ms.empty = !any_nonempty;
  ms.bounded = all_bounded;
  ms.singleton = any_nonempty && all_singleton;
  if (ms.singleton) ms.point = common_point;
  return ms;
}

ExtremizeResult extremize_xgrad(const MultiplierSet& ms,
                                const Eigen::VectorXd& u) {
  if (ms.empty)
    throw std::invalid_argument("extremize_xgrad: empty multiplier set");
  if (u.size() != ms.grad_x.size())
    throw std::invalid_argument("extremize_xgrad: direction has wrong size");

  const double c0 = ms.grad_x.dot(u);
  const Eigen::VectorXd w = ms.jac_x * u;

  ExtremizeResult out;
  out.min_value = kInf;
  out.max_value = -kInf;

  for (const MultiplierPiece& piece : ms.pieces) {
    if (piece.empty) continue;
    const PieceSystem sys = piece_system(piece.normal, ms.jac_y, ms.grad_y);

    const LPOutcome lo = solve_piece_lp(sys, w);
    if (lo.status == LPStatus::Unbounded) {
      out.min_value = -kInf;
      out.argmin.resize(0);
      out.min_ray = lo.ray;
    } else if (lo.status == LPStatus::Optimal) {
      if (c0 + lo.value < out.min_value) {
        out.min_value = c0 + lo.value;
        out.argmin = lo.point;
      }
    } else {
      throw std::runtime_error("extremize_xgrad: LP failed on the min side");
    }

    const LPOutcome hi = solve_piece_lp(sys, -w);
    if (hi.status == LPStatus::Unbounded) {
      out.max_value = kInf;
      out.argmax.resize(0);
      out.max_ray = hi.ray;
    } else if (hi.status == LPStatus::Optimal) {
      if (c0 - hi.value > out.max_value) {
        out.max_value = c0 - hi.value;
        out.argmax = hi.point;
      }
    } else {
      throw std::runtime_error("extremize_xgrad: LP failed on the max side");
    }
  }
  return out;
}

CqVerdict robinson_cq(const ParametricProgram& prog, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y) {
  require_feasible(prog, x, y, "robinson_cq");
  const Eigen::VectorXd z =
      project(prog.C, constraint_value(prog, x, y)).point;
  const Eigen::MatrixXd jac_y = constraint_jac_y(prog, x, y);
  const Eigen::VectorXd zero_d = Eigen::VectorXd::Zero(prog.p);

  CqVerdict out;
  const PolyCone clarke = clarke_normal_cone(prog.C, z, zero_d);
  const auto abnormal =
      cone_nonzero_element(clarke, jac_y.transpose());
  out.holds = !abnormal.has_value();
  if (abnormal) out.witness = *abnormal;

  // Same question through the other characterization: the image of the
  // y-Jacobian plus the regular tangent cone must cover a neighborhood
  // of the origin.
  const Eigen::VectorXd zero_p = Eigen::VectorXd::Zero(prog.p);
  const InteriorResult ic = interior_check(
      zero_p, jac_y, regular_tangent_cone(prog.C, z), zero_p);
  out.interior_holds = ic.holds_plus;
  return out;
}

CqVerdict nnamcq(const ParametricProgram& prog, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& y) {
  require_feasible(prog, x, y, "nnamcq");
  const Eigen::VectorXd z =
      project(prog.C, constraint_value(prog, x, y)).point;
  const Eigen::MatrixXd jac_y_t = constraint_jac_y(prog, x, y).transpose();
  const Eigen::VectorXd zero_d = Eigen::VectorXd::Zero(prog.p);

  CqVerdict out;
  out.holds = true;
  for (const PolyCone& piece : dir_normal_cone(prog.C, z, zero_d)) {
    if (const auto abnormal = cone_nonzero_element(piece, jac_y_t)) {
      out.holds = false;
      out.witness = *abnormal;
      break;
    }
  }
  return out;
}

bool classic_nlp_structure(const BlockSet& C) {
  if (C.blocks.empty()) return false;
  for (const Block& b : C.blocks)
    if (b.kind != BlockKind::Zero && b.kind != BlockKind::Nonpos) return false;
  return true;
}

}  // namespace dirval
