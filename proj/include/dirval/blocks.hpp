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

#ifndef DIRVAL_BLOCKS_HPP
#define DIRVAL_BLOCKS_HPP

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dirval {

// The constraint set C is a product of blocks. Scalar blocks consume one
// coordinate of the constraint image; the complementarity block consumes
// two, pairing coordinates (a, b) with a >= 0, b >= 0, a*b = 0.
enum class BlockKind { Zero, Nonpos, Nonneg, Free, Interval, UnionIntervals, Compl };

struct Block {
  BlockKind kind = BlockKind::Free;
  double lower = 0.0;  // Interval
  double upper = 0.0;
  std::vector<std::pair<double, double>> pieces;  // UnionIntervals, sorted, disjoint

  int width() const { return kind == BlockKind::Compl ? 2 : 1; }
};

Block make_zero_block();
Block make_nonpos_block();
Block make_nonneg_block();
Block make_free_block();
Block make_interval_block(double lower, double upper);
Block make_union_intervals_block(std::vector<std::pair<double, double>> pieces);
Block make_compl_block();

struct BlockSet {
  std::vector<Block> blocks;

  int dim() const {
    int d = 0;
    for (const auto& b : blocks) d += b.width();
    return d;
  }
};

// Throws std::invalid_argument on malformed data (interval with l > u,
// union pieces unsorted or overlapping, empty union).
void validate(const BlockSet& C);

struct Projection {
  Eigen::VectorXd point;
  double distance = 0.0;
};

// Euclidean nearest point of C. Blockwise exact; complementarity ties
// resolve to the first branch so results are deterministic.
Projection project(const BlockSet& C, const Eigen::VectorXd& z);

inline double distance(const BlockSet& C, const Eigen::VectorXd& z) {
  return project(C, z).distance;
}

bool contains(const BlockSet& C, const Eigen::VectorXd& z, double tol = 1e-8);

std::string block_kind_name(BlockKind kind);

// Directional neighborhood of a direction u: the origin itself plus the
// points z with ||z|| <= eps whose unit vector stays delta-close to the
// unit vector of u. For u = 0 this degenerates to the open eps-ball.
struct DirectionalNbhd {
  Eigen::VectorXd u;
  double eps = 0.0;
  double delta = 0.0;

  bool contains(const Eigen::VectorXd& z) const;
};

}  // namespace dirval

#endif  // DIRVAL_BLOCKS_HPP
