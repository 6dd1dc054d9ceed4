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

#include "dirval/cones.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dirval {

namespace {

constexpr double kPointTol = 1e-8;   // active-boundary detection on z
constexpr double kDirTol = 1e-9;     // zero test on normalized directions

// Local shape of one block around its (snapped) coordinate(s).
enum class Pos1 { Interior, AtLower, AtUpper, AtPoint };
enum class PosC { Apex, OnAxis1, OnAxis2 };

struct LocalData {
  // Everything a block contributes, in the block's own 1- or 2-dim space.
  ConeUnion tangent;
  ConeUnion limiting;            // dir normal for d = 0
  PolyCone regular_tangent;      // Clarke-regular tangent
  struct Cell {
    PolyCone cell;
    ConeUnion normal;
    Eigen::VectorXd rep;
  };
  std::vector<Cell> cells;
  // Directional normal for a given local direction; empty optional-like
  // behavior is an empty ConeUnion with hit=false.
  // Filled by the caller walking the cells (relative interiors cover T).
};

Pos1 classify_interval(double lower, double upper, double z) {
  const bool at_lo = std::isfinite(lower) && std::abs(z - lower) <= kPointTol;
  const bool at_hi = std::isfinite(upper) && std::abs(z - upper) <= kPointTol;
  if (at_lo && at_hi) return Pos1::AtPoint;
  if (at_lo) return Pos1::AtLower;
  if (at_hi) return Pos1::AtUpper;
  return Pos1::Interior;
}

// The interval [l, u] the block looks like near z. For union blocks this
// is the piece containing z;  pieces are disjoint so it is unique.
void local_interval(const Block& b, double z, double& lower, double& upper) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (b.kind) {
    case BlockKind::Zero: lower = upper = 0.0; return;
    case BlockKind::Nonpos: lower = -inf; upper = 0.0; return;
    case BlockKind::Nonneg: lower = 0.0; upper = inf; return;
    case BlockKind::Free: lower = -inf; upper = inf; return;
    case BlockKind::Interval: lower = b.lower; upper = b.upper; return;
    case BlockKind::UnionIntervals: {
      for (const auto& [lo, hi] : b.pieces) {
        if (z >= lo - kPointTol && z <= hi + kPointTol) {
          lower = lo;
          upper = hi;
          return;
        }
      }
      throw std::logic_error("snapped point not on any union piece");
    }
    case BlockKind::Compl:
      throw std::logic_error("local_interval on a complementarity block");
  }
}

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd e(1);
  e[0] = v;
  return e;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd e(2);
  e << a, b;
  return e;
}

LocalData scalar_block_data(const Block& b, double z) {
  double lo, hi;
  local_interval(b, z, lo, hi);
  LocalData d;
  switch (classify_interval(lo, hi, z)) {
    case Pos1::Interior:
      d.tangent = {cone1_free()};
      d.limiting = {cone1_zero()};
      d.regular_tangent = cone1_free();
      d.cells.push_back({cone1_free(), {cone1_zero()}, vec1(1.0)});
      break;
    case Pos1::AtLower:
      d.tangent = {cone1_nonneg()};
      d.limiting = {cone1_nonpos()};
      d.regular_tangent = cone1_nonneg();
      d.cells.push_back({cone1_nonneg(), {cone1_zero()}, vec1(1.0)});
      d.cells.push_back({cone1_zero(), {cone1_nonpos()}, vec1(0.0)});
      break;
    case Pos1::AtUpper:
      d.tangent = {cone1_nonpos()};
      d.limiting = {cone1_nonneg()};
      d.regular_tangent = cone1_nonpos();
      d.cells.push_back({cone1_nonpos(), {cone1_zero()}, vec1(-1.0)});
      d.cells.push_back({cone1_zero(), {cone1_nonneg()}, vec1(0.0)});
      break;
    case Pos1::AtPoint:
      d.tangent = {cone1_zero()};
      d.limiting = {cone1_free()};
      d.regular_tangent = cone1_zero();
      d.cells.push_back({cone1_zero(), {cone1_free()}, vec1(0.0)});
      break;
  }
  return d;
}

PolyCone axis_line(int which) {  // line along axis `which` of R^2
  return which == 0 ? product(cone1_free(), cone1_zero())
                    : product(cone1_zero(), cone1_free());
}

PolyCone axis_ray(int which) {  // nonnegative ray along an axis of R^2
  return which == 0 ? product(cone1_nonneg(), cone1_zero())
                    : product(cone1_zero(), cone1_nonneg());
}

LocalData compl_block_data(double z1, double z2) {
  LocalData d;
  PosC pos;
  if (z1 > kPointTol)
    pos = PosC::OnAxis1;
  else if (z2 > kPointTol)
    pos = PosC::OnAxis2;
  else
    pos = PosC::Apex;

  switch (pos) {
    case PosC::OnAxis1:
      d.tangent = {axis_line(0)};
      d.limiting = {axis_line(1)};
      d.regular_tangent = axis_line(0);
      d.cells.push_back({axis_line(0), {axis_line(1)}, vec2(1.0, 0.0)});
      break;
    case PosC::OnAxis2:
      d.tangent = {axis_line(1)};
      d.limiting = {axis_line(0)};
      d.regular_tangent = axis_line(1);
      d.cells.push_back({axis_line(1), {axis_line(0)}, vec2(0.0, 1.0)});
      break;
    case PosC::Apex: {
      d.tangent = {axis_ray(0), axis_ray(1)};
      // Normals collected from the two branches and the corner itself:
      // the nonpositive quadrant plus both full axes.
      d.limiting = {product(cone1_nonpos(), cone1_nonpos()), axis_line(1), axis_line(0)};
      d.regular_tangent = cone_zero(2);
      d.cells.push_back({axis_ray(0), {axis_line(1)}, vec2(1.0, 0.0)});
      d.cells.push_back({axis_ray(1), {axis_line(0)}, vec2(0.0, 1.0)});
      d.cells.push_back({cone_zero(2), d.limiting, vec2(0.0, 0.0)});
      break;
    }
  }
  return d;
}

LocalData block_data(const Block& b, const double* z) {
  if (b.kind == BlockKind::Compl) return compl_block_data(z[0], z[1]);
  return scalar_block_data(b, z[0]);
}

// A direction lies in a cell's relative interior iff equality rows vanish
// and every inequality row is strictly negative (tolerances on the
// normalized direction).
bool in_relative_interior(const PolyCone& cell, const Eigen::VectorXd& d, double scale) {
  for (const auto& e : cell.eq)
    if (std::abs(e.dot(d)) > kDirTol * scale) return false;
  for (const auto& a : cell.ineq)
    if (a.dot(d) > -kDirTol * scale) return false;
  return true;
}

Eigen::VectorXd snap_or_throw(const BlockSet& C, const Eigen::VectorXd& z) {
  const Projection pr = project(C, z);
  if (pr.distance > kPointTol)
    throw std::invalid_argument("point is farther than 1e-8 from the block set");
  return pr.point;
}

std::vector<LocalData> all_block_data(const BlockSet& C, const Eigen::VectorXd& snapped) {
  std::vector<LocalData> data;
  data.reserve(C.blocks.size());
  int at = 0;
  for (const auto& b : C.blocks) {
    data.push_back(block_data(b, snapped.data() + at));
    at += b.width();
  }
  return data;
}

ConeUnion product_all(const std::vector<ConeUnion>& parts) {
  ConeUnion acc = {PolyCone{0, {}, {}, {}, {}}};
  for (const auto& p : parts) acc = product(acc, p);
  return acc;
}

}  // namespace

ConeUnion tangent_cone(const BlockSet& C, const Eigen::VectorXd& z) {
  const Eigen::VectorXd s = snap_or_throw(C, z);
  std::vector<ConeUnion> parts;
  for (const auto& d : all_block_data(C, s)) parts.push_back(d.tangent);
  return product_all(parts);
}

ConeUnion dir_normal_cone(const BlockSet& C, const Eigen::VectorXd& z,
                          const Eigen::VectorXd& d) {
  const Eigen::VectorXd s = snap_or_throw(C, z);
  if (d.size() != s.size()) throw std::invalid_argument("direction dimension mismatch");
  const double scale = std::max(1.0, d.norm());
  const auto data = all_block_data(C, s);

  // Per block, find the cell whose relative interior holds the direction
  // component; no cell means d leaves the tangent cone and the overall
  // union is empty.
  std::vector<ConeUnion> parts;
  int at = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int w = C.blocks[i].width();
    const Eigen::VectorXd di = d.segment(at, w);
    at += w;
    const LocalData::Cell* hit = nullptr;
    for (const auto& cell : data[i].cells) {
      if (in_relative_interior(cell.cell, di, scale)) {
        hit = &cell;
        break;
      }
    }
    if (!hit) return {};
    parts.push_back(hit->normal);
  }
  return product_all(parts);
}

PolyCone clarke_normal_cone(const BlockSet& C, const Eigen::VectorXd& z,
                            const Eigen::VectorXd& d) {
  const Eigen::VectorXd s = snap_or_throw(C, z);
  if (d.size() != s.size()) throw std::invalid_argument("direction dimension mismatch");
  const double scale = std::max(1.0, d.norm());
  const auto data = all_block_data(C, s);

  // Blockwise hulls, then the product: the union of directional normals
  // over the product set is the full cartesian product of the per-block
  // unions, and the hull of a product of unions is the product of the
  // per-coordinate hulls.
  PolyCone acc{0, {}, {}, {}, {}};
  int at = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int w = C.blocks[i].width();
    const Eigen::VectorXd di = d.segment(at, w);
    at += w;
    const LocalData::Cell* hit = nullptr;
    for (const auto& cell : data[i].cells) {
      if (in_relative_interior(cell.cell, di, scale)) {
        hit = &cell;
        break;
      }
    }
    if (!hit) throw std::invalid_argument("direction outside the tangent cone");
    acc = product(acc, convex_hull(hit->normal));
  }
  return acc;
}

PolyCone regular_tangent_cone(const BlockSet& C, const Eigen::VectorXd& z) {
  const Eigen::VectorXd s = snap_or_throw(C, z);
  const auto data = all_block_data(C, s);
  PolyCone acc{0, {}, {}, {}, {}};
  for (const auto& bd : data) acc = product(acc, bd.regular_tangent);
  return acc;
}

std::vector<TangentCell> enumerate_cells(const BlockSet& C, const Eigen::VectorXd& z) {
  const Eigen::VectorXd s = snap_or_throw(C, z);
  const auto data = all_block_data(C, s);

  std::vector<TangentCell> cells;
  cells.push_back({PolyCone{0, {}, {}, {}, {}}, {PolyCone{0, {}, {}, {}, {}}}, Eigen::VectorXd(0)});
  for (const auto& bd : data) {
    std::vector<TangentCell> next;
    for (const auto& acc : cells) {
      for (const auto& local : bd.cells) {
        TangentCell c;
        c.cell = product(acc.cell, local.cell);
        c.normal = product(acc.normal, local.normal);
        c.representative.resize(acc.representative.size() + local.rep.size());
        c.representative << acc.representative, local.rep;
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

std::vector<Eigen::VectorXd> oracle_dir_normal(const BlockSet& C, const Eigen::VectorXd& z,
                                               const Eigen::VectorXd& d, unsigned seed) {
  const Eigen::VectorXd s = snap_or_throw(C, z);
  const int p = C.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rand_unit = [&]() {
    Eigen::VectorXd v(p);
    double n = 0.0;
    do {
      for (int i = 0; i < p; ++i) v[i] = gauss(rng);
      n = v.norm();
    } while (n < 1e-12);
    return Eigen::VectorXd(v / n);
  };

  const double dn = d.norm();
  const Eigen::VectorXd dhat = dn > 0 ? Eigen::VectorXd(d / dn) : Eigen::VectorXd::Zero(p);

  std::vector<Eigen::VectorXd> samples;
  auto push_unique = [&](const Eigen::VectorXd& v) {
    for (const auto& w : samples)
      if ((w - v).norm() < 1e-8) return;
    samples.push_back(v);
  };

  for (int k = 2; k <= 10; ++k) {
    const double t = std::pow(10.0, -0.5 * k);
    const double aperture = t;  // direction spread shrinks with the scale
    for (int j = 0; j < 64; ++j) {
      Eigen::VectorXd approach = dn > 0 ? Eigen::VectorXd(dhat + aperture * rand_unit())
                                        : rand_unit();
      const Eigen::VectorXd base = project(C, s + t * approach).point;
      const double dist_base = (base - s).norm();
      if (dn > 0) {
        // Only keep base points that genuinely approach along d.
        if (dist_base < 1e-14) continue;
        if (((base - s) / dist_base - dhat).norm() > 8.0 * aperture + 1e-9) continue;
      }
      // Proximal normals at `base`: directions eta whose small push off
      // the set projects straight back to `base`.
      const double rho = t / 8.0;
      for (int r = 0; r < 2 * p + 16; ++r) {
        Eigen::VectorXd eta;
        if (r < 2 * p) {
          eta = Eigen::VectorXd::Zero(p);
          eta[r / 2] = (r % 2 == 0) ? 1.0 : -1.0;
        } else {
          eta = rand_unit();
        }
        const Eigen::VectorXd probe = base + rho * eta;
        const Projection back = project(C, probe);
        const double off = (probe - back.point).norm();
        if (off < 1e-13) continue;                       // probe still on C
        if ((back.point - base).norm() > 1e-10 * (1.0 + base.norm())) continue;
        push_unique((probe - back.point) / off);
      }
    }
  }
  return samples;
}

}  // namespace dirval
