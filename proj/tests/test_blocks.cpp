#include <cmath>

#include "dirval/blocks.hpp"
#include "doctest.h"

using namespace dirval;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Projection
// ---------------------------------------------------------------------------

TEST_CASE("scalar blocks project by clamping") {
  BlockSet C;
  C.blocks = {make_nonpos_block(), make_nonneg_block(), make_interval_block(-1.0, 2.0),
              make_zero_block(), make_free_block()};
  validate(C);

  const auto pr = project(C, vec({1.5, -2.0, 3.0, 0.7, -4.2}));
  CHECK(pr.point.isApprox(vec({0.0, 0.0, 2.0, 0.0, -4.2})));
  CHECK(pr.distance == doctest::Approx(std::sqrt(1.5 * 1.5 + 4.0 + 1.0 + 0.49)));
}

TEST_CASE("union of intervals projects to the nearest piece") {
  BlockSet C;
  C.blocks = {make_union_intervals_block({{-2.0, -1.0}, {1.0, 2.0}})};
  validate(C);

  CHECK(project(C, vec({0.4})).point[0] == 1.0);
  CHECK(project(C, vec({-0.4})).point[0] == -1.0);
  CHECK(project(C, vec({1.5})).point[0] == 1.5);
  CHECK(project(C, vec({5.0})).point[0] == 2.0);
  // Equidistant from both pieces: the earlier piece wins, deterministically.
  CHECK(project(C, vec({0.0})).point[0] == -1.0);
}

TEST_CASE("complementarity block projects to the nearer axis") {
  BlockSet C;
  C.blocks = {make_compl_block()};
  validate(C);

  CHECK(project(C, vec({3.0, 1.0})).point.isApprox(vec({3.0, 0.0})));
  CHECK(project(C, vec({1.0, 3.0})).point.isApprox(vec({0.0, 3.0})));
  CHECK(project(C, vec({-1.0, -2.0})).point.isApprox(vec({0.0, 0.0})));
  CHECK(project(C, vec({4.0, 0.0})).point.isApprox(vec({4.0, 0.0})));
  // On the diagonal both axes are equidistant; the first branch wins.
  CHECK(project(C, vec({2.0, 2.0})).point.isApprox(vec({2.0, 0.0})));
  CHECK(project(C, vec({2.0, 2.0})).distance == doctest::Approx(2.0));
}

TEST_CASE("containment uses the projection distance") {
  BlockSet C;
  C.blocks = {make_compl_block(), make_interval_block(0.0, 1.0)};
  validate(C);

  CHECK(contains(C, vec({2.0, 0.0, 0.5})));
  CHECK(contains(C, vec({0.0, 3.0, 1.0})));
  CHECK_FALSE(contains(C, vec({1.0, 1.0, 0.5})));
  CHECK_FALSE(contains(C, vec({2.0, 0.0, 1.5})));
  CHECK(contains(C, vec({2.0, 1e-9, 0.5})));
}

TEST_CASE("invalid block sets are rejected") {
  BlockSet bad_interval;
  bad_interval.blocks = {make_interval_block(2.0, 1.0)};
  CHECK_THROWS_AS(validate(bad_interval), std::invalid_argument);

  BlockSet overlapping;
  overlapping.blocks = {make_union_intervals_block({{0.0, 2.0}, {1.0, 3.0}})};
  CHECK_THROWS_AS(validate(overlapping), std::invalid_argument);

  BlockSet unsorted;
  unsorted.blocks = {make_union_intervals_block({{1.0, 2.0}, {-2.0, -1.0}})};
  CHECK_THROWS_AS(validate(unsorted), std::invalid_argument);

  BlockSet empty_union;
  empty_union.blocks = {make_union_intervals_block({})};
  CHECK_THROWS_AS(validate(empty_union), std::invalid_argument);
}

TEST_CASE("block widths add up") {
  BlockSet C;
  C.blocks = {make_compl_block(), make_free_block(), make_compl_block()};
  validate(C);
  CHECK(C.dim() == 5);
}

// ---------------------------------------------------------------------------
// Directional neighborhoods
// ---------------------------------------------------------------------------

TEST_CASE("directional neighborhood narrows around the direction") {
  DirectionalNbhd nb;
  nb.u = vec({1.0, 0.0});
  nb.eps = 0.5;
  nb.delta = 0.1;

  CHECK(nb.contains(vec({0.0, 0.0})));
  CHECK(nb.contains(vec({0.3, 0.0})));
  CHECK(nb.contains(vec({0.3, 0.02})));
  CHECK_FALSE(nb.contains(vec({0.3, 0.2})));
  CHECK_FALSE(nb.contains(vec({0.6, 0.0})));
  CHECK_FALSE(nb.contains(vec({-0.3, 0.0})));
}

TEST_CASE("zero direction gives a plain ball") {
  DirectionalNbhd nb;
  nb.u = vec({0.0, 0.0});
  nb.eps = 0.5;
  nb.delta = 0.1;

  CHECK(nb.contains(vec({0.2, -0.3})));
  CHECK_FALSE(nb.contains(vec({0.5, 0.5})));
}

TEST_CASE("scaling the direction does not change the neighborhood") {
  DirectionalNbhd a, b;
  a.u = vec({1.0, 1.0});
  b.u = vec({10.0, 10.0});
  a.eps = b.eps = 1.0;
  a.delta = b.delta = 0.3;

  for (const auto& z : {vec({0.4, 0.4}), vec({0.4, 0.1}), vec({0.7, 0.69}), vec({-0.2, -0.2})}) {
    CHECK(a.contains(z) == b.contains(z));
  }
}
