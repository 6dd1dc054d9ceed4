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

#include "dirval/blocks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dirval {

Block make_zero_block() { return Block{BlockKind::Zero}; }
Block make_nonpos_block() { return Block{BlockKind::Nonpos}; }
Block make_nonneg_block() { return Block{BlockKind::Nonneg}; }
Block make_free_block() { return Block{BlockKind::Free}; }

Block make_interval_block(double lower, double upper) {
  Block b{BlockKind::Interval};
  b.lower = lower;
  b.upper = upper;
  return b;
}

Block make_union_intervals_block(std::vector<std::pair<double, double>> pieces) {
  Block b{BlockKind::UnionIntervals};
  b.pieces = std::move(pieces);
  return b;
}

Block make_compl_block() { return Block{BlockKind::Compl}; }

void validate(const BlockSet& C) {
  if (C.blocks.empty()) throw std::invalid_argument("block set has no blocks");
  for (const auto& b : C.blocks) {
    switch (b.kind) {
      case BlockKind::Interval:
        if (!(b.lower <= b.upper) || !std::isfinite(b.lower) || !std::isfinite(b.upper))
          throw std::invalid_argument("interval block requires finite l <= u");
        break;
      case BlockKind::UnionIntervals: {
        if (b.pieces.empty())
          throw std::invalid_argument("union_intervals block requires at least one piece");
        double prev_hi = -std::numeric_limits<double>::infinity();
        bool first = true;
        for (const auto& [lo, hi] : b.pieces) {
          if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
            throw std::invalid_argument("union_intervals piece requires finite l <= u");
          if (!first && !(lo > prev_hi))
            throw std::invalid_argument("union_intervals pieces must be sorted and disjoint");
          prev_hi = hi;
          first = false;
        }
        break;
      }
      default:
        break;
    }
  }
}

namespace {

double clamp(double z, double lo, double hi) { return std::min(std::max(z, lo), hi); }

// Nearest point of one block; w points at this block's coordinates.
void project_block(const Block& b, const double* z, double* out) {
  switch (b.kind) {
    case BlockKind::Zero: out[0] = 0.0; return;
    case BlockKind::Nonpos: out[0] = std::min(z[0], 0.0); return;
    case BlockKind::Nonneg: out[0] = std::max(z[0], 0.0); return;
    case BlockKind::Free: out[0] = z[0]; return;
    case BlockKind::Interval: out[0] = clamp(z[0], b.lower, b.upper); return;
    case BlockKind::UnionIntervals: {
      double best = clamp(z[0], b.pieces[0].first, b.pieces[0].second);
      double best_d = std::abs(z[0] - best);
      for (std::size_t i = 1; i < b.pieces.size(); ++i) {
        const double cand = clamp(z[0], b.pieces[i].first, b.pieces[i].second);
        const double d = std::abs(z[0] - cand);
        if (d < best_d) {
          best = cand;
          best_d = d;
        }
      }
      out[0] = best;
      return;
    }
    case BlockKind::Compl: {
      // Nearest point on the union of the two nonnegative axes.
      const double a1 = std::max(z[0], 0.0), b1 = 0.0;              // first axis
      const double a2 = 0.0, b2 = std::max(z[1], 0.0);              // second axis
      const double d1 = (z[0] - a1) * (z[0] - a1) + z[1] * z[1];
      const double d2 = z[0] * z[0] + (z[1] - b2) * (z[1] - b2);
      if (d1 <= d2) {
        out[0] = a1;
        out[1] = b1;
      } else {
        out[0] = a2;
        out[1] = b2;
      }
      return;
    }
  }
}

}  // namespace

Projection project(const BlockSet& C, const Eigen::VectorXd& z) {
  const int p = C.dim();
  if (z.size() != p) throw std::invalid_argument("project: point dimension mismatch");
  Projection result;
  result.point.resize(p);
  int at = 0;
  for (const auto& b : C.blocks) {
    project_block(b, z.data() + at, result.point.data() + at);
    at += b.width();
  }
  result.distance = (z - result.point).norm();
  return result;
}

bool contains(const BlockSet& C, const Eigen::VectorXd& z, double tol) {
  return project(C, z).distance <= tol;
}

std::string block_kind_name(BlockKind kind) {
  switch (kind) {
    case BlockKind::Zero: return "zero";
    case BlockKind::Nonpos: return "nonpos";
    case BlockKind::Nonneg: return "nonneg";
    case BlockKind::Free: return "free";
    case BlockKind::Interval: return "interval";
    case BlockKind::UnionIntervals: return "union_intervals";
    case BlockKind::Compl: return "compl";
  }
  return "?";
}

bool DirectionalNbhd::contains(const Eigen::VectorXd& z) const {
  const double nz = z.norm();
  if (nz == 0.0) return true;
  const double nu = u.norm();
  if (nu == 0.0) return nz < eps;
  if (nz > eps) return false;
  return (z / nz - u / nu).norm() <= delta;
}

}  // namespace dirval
