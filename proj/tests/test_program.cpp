#include <cmath>
#include <vector>

#include "dirval/program.hpp"
#include "doctest.h"

using namespace dirval;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v[0] = a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v[0] = a;
  v[1] = b;
  return v;
}

// min_y x*y subject to |y| <= x^2 + 1, written as two nonpositive rows.
// The ybox ends are chosen so the stage-1 lattice hits -1, 0, and 1
// exactly, which keeps the sampled solution set aligned with the true one.
ParametricProgram example_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block(), make_nonpos_block()};
  return make_program(1, 1, "x1*y1", {"-y1 - x1^2 - 1", "y1 - x1^2 - 1"},
                      C, vec1(-1.6), vec1(1.6));
}

ParametricProgram box_program() {
  BlockSet C;
  C.blocks = {make_interval_block(-1.0, 1.0)};
  return make_program(1, 1, "x1*y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction and evaluation
// ---------------------------------------------------------------------------

TEST_CASE("make_program rejects malformed inputs") {
  BlockSet one;
  one.blocks = {make_free_block()};
  const std::vector<std::string> rows{"y1"};

  CHECK_THROWS_AS(make_program(0, 1, "y1", rows, one, vec1(-1), vec1(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_program(1, 4, "y1", rows, one, vec1(-1), vec1(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_program(1, 1, "y1", rows, one, vec1(2), vec1(-2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_program(1, 1, "y1", rows, one, vec1(-1), vec2(1, 1)),
                  std::invalid_argument);

  BlockSet wide;
  wide.blocks = {make_compl_block()};
  CHECK_THROWS_AS(make_program(1, 1, "y1", rows, wide, vec1(-1), vec1(1)),
                  std::invalid_argument);

  CHECK_THROWS_AS(make_program(1, 1, "y1 +", rows, one, vec1(-1), vec1(1)),
                  ParseError);
}

TEST_CASE("evaluators agree with hand derivatives") {
  const ParametricProgram prog = example_program();
  const Eigen::VectorXd x = vec1(0.5);
  const Eigen::VectorXd y = vec1(-1.25);

  CHECK(objective_value(prog, x, y) == doctest::Approx(-0.625));
  const Eigen::VectorXd pv = constraint_value(prog, x, y);
  CHECK(pv[0] == doctest::Approx(0.0));
  CHECK(pv[1] == doctest::Approx(-2.5));

  CHECK(objective_grad_x(prog, x, y)[0] == doctest::Approx(-1.25));
  CHECK(objective_grad_y(prog, x, y)[0] == doctest::Approx(0.5));

  const Eigen::MatrixXd jx = constraint_jac_x(prog, x, y);
  CHECK(jx(0, 0) == doctest::Approx(-1.0));
  CHECK(jx(1, 0) == doctest::Approx(-1.0));
  const Eigen::MatrixXd jy = constraint_jac_y(prog, x, y);
  CHECK(jy(0, 0) == doctest::Approx(-1.0));
  CHECK(jy(1, 0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(objective_value(prog, vec2(0, 0), y), std::invalid_argument);
}

TEST_CASE("feasibility residual is the distance to C") {
  const ParametricProgram prog = example_program();

  const auto on_edge = is_feasible(prog, vec1(0.0), vec1(-1.0));
  CHECK(on_edge.feasible);
  CHECK(on_edge.residual == doctest::Approx(0.0));

  const auto outside = is_feasible(prog, vec1(0.0), vec1(2.0));
  CHECK_FALSE(outside.feasible);
  CHECK(outside.residual == doctest::Approx(1.0));

  BlockSet loose;
  loose.blocks = {make_free_block()};
  const auto anything = make_program(1, 1, "y1", {"y1 + x1"}, loose,
                                     vec1(-1), vec1(1));
  CHECK(is_feasible(anything, vec1(40.0), vec1(0.5)).feasible);
  CHECK(is_feasible(anything, vec1(40.0), vec1(0.5)).residual == 0.0);
}

TEST_CASE("expression domain errors propagate from is_feasible") {
  BlockSet one;
  one.blocks = {make_nonpos_block()};
  const auto prog =
      make_program(1, 1, "y1", {"log(y1)"}, one, vec1(-1), vec1(1));
  CHECK_THROWS_AS(is_feasible(prog, vec1(0.0), vec1(-0.5)), EvalError);
}

// ---------------------------------------------------------------------------
// Value solves
// ---------------------------------------------------------------------------

TEST_CASE("a flat objective reports the whole feasible interval") {
  const ParametricProgram prog = example_program();
  const ValueSolveResult res = solve_value(prog, vec1(0.0));

  REQUIRE(res.status == SolveStatus::Solved);
  CHECK(std::abs(res.value) <= 1e-8);
  CHECK_FALSE(res.touches_ybox);
  CHECK(res.points.size() >= 1000);
  CHECK(res.cluster_count == static_cast<int>(res.points.size()));

  for (const auto& sp : res.points) {
    CHECK(sp.y[0] >= -1.0 - 1e-6);
    CHECK(sp.y[0] <= 1.0 + 1e-6);
    CHECK(sp.feas_residual <= 1e-8);
    CHECK(sp.stationarity_residual <= 1e-5);
  }

  // One-sided Hausdorff: every point of [-1, 1] has a reported sample
  // within 1e-3.
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = -1.0 + 2.0 * i / 400.0;
    double nearest = 1e9;
    for (const auto& sp : res.points)
      nearest = std::min(nearest, std::abs(sp.y[0] - t));
    worst = std::max(worst, nearest);
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("an active nonlinear constraint is polished to full accuracy") {
  const ParametricProgram prog = example_program();
  const ValueSolveResult res = solve_value(prog, vec1(0.5));

  REQUIRE(res.status == SolveStatus::Solved);
  CHECK(std::abs(res.value - (-0.625)) <= 1e-8);
  REQUIRE(res.cluster_count == 1);
  CHECK(std::abs(res.points[0].y[0] - (-1.25)) <= 1e-6);
  CHECK(res.points[0].feas_residual <= 1e-8);
  CHECK(res.points[0].stationarity_residual <= 1e-5);
  CHECK_FALSE(res.touches_ybox);
}

TEST_CASE("an exact lattice optimum survives polish unmoved") {
  BlockSet C;
  C.blocks = {make_interval_block(-1.0, 1.0)};
  const auto prog =
      make_program(1, 1, "y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
  const ValueSolveResult res = solve_value(prog, vec1(0.0));

  REQUIRE(res.status == SolveStatus::Solved);
  CHECK(std::abs(res.value - (-1.0)) <= 1e-8);
  REQUIRE(res.cluster_count == 1);
  CHECK(std::abs(res.points[0].y[0] - (-1.0)) <= 1e-6);
}

TEST_CASE("infeasible when no lattice point comes near C") {
  BlockSet C;
  C.blocks = {make_interval_block(5.0, 6.0)};
  const auto prog =
      make_program(1, 1, "y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
  CHECK(solve_value(prog, vec1(0.0)).status == SolveStatus::Infeasible);
}

TEST_CASE("a minimizer pinned by the ybox raises the flag") {
  BlockSet C;
  C.blocks = {make_free_block()};
  const auto prog =
      make_program(1, 1, "y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
  const ValueSolveResult res = solve_value(prog, vec1(0.0));

  REQUIRE(res.status == SolveStatus::Solved);
  CHECK(res.value == doctest::Approx(-2.0));
  CHECK(res.touches_ybox);
  // The inward probe sees pure ascent and the outward probe leaves the
  // box, so the point still counts as stationary within the region.
  CHECK(res.points[0].stationarity_residual <= 1e-5);
}

TEST_CASE("symmetric minima come back as two clusters") {
  BlockSet C;
  C.blocks = {make_free_block()};
  const auto prog = make_program(1, 1, "(y1^2 - 1)^2", {"y1"}, C, vec1(-2.0),
                                 vec1(2.0));
  const ValueSolveResult res = solve_value(prog, vec1(0.0));

  REQUIRE(res.status == SolveStatus::Solved);
  CHECK(std::abs(res.value) <= 1e-8);
  REQUIRE(res.cluster_count == 2);
  std::vector<double> ys{res.points[0].y[0], res.points[1].y[0]};
  std::sort(ys.begin(), ys.end());
  CHECK(std::abs(ys[0] - (-1.0)) <= 1e-5);
  CHECK(std::abs(ys[1] - 1.0) <= 1e-5);
}

TEST_CASE("two dimensional solve polishes an off lattice minimum") {
  BlockSet C;
  C.blocks = {make_interval_block(-1.0, 1.0), make_interval_block(-1.0, 1.0)};
  const auto prog = make_program(
      1, 2, "(y1 - 0.505)^2 + (y2 + 0.25)^2", {"y1", "y2"}, C,
      vec2(-1.5, -1.5), vec2(1.5, 1.5));
  const ValueSolveResult res = solve_value(prog, vec1(0.0));

  REQUIRE(res.status == SolveStatus::Solved);
  CHECK(std::abs(res.value) <= 1e-8);
  REQUIRE(res.cluster_count == 1);
  CHECK(std::abs(res.points[0].y[0] - 0.505) <= 1e-5);
  CHECK(std::abs(res.points[0].y[1] - (-0.25)) <= 1e-5);
  CHECK(res.points[0].stationarity_residual <= 1e-5);
}

// ---------------------------------------------------------------------------
// Accuracy against closed forms
// ---------------------------------------------------------------------------

TEST_CASE("value accuracy against the closed form solution map") {
  const ParametricProgram prog = example_program();
  std::vector<Eigen::VectorXd> xs;
  for (double t : {0.5, -0.5, 0.1, -0.1, 0.01, -0.01}) xs.push_back(vec1(t));
  const double err = value_accuracy_probe(prog, xs, [](const Eigen::VectorXd& x) {
    return -std::abs(x[0]) * (x[0] * x[0] + 1.0);
  });
  CHECK(err <= 1e-8);
}

TEST_CASE("value accuracy on the box constrained bilinear problem") {
  const ParametricProgram prog = box_program();
  std::vector<Eigen::VectorXd> xs;
  for (double t : {0.7, -0.7, 0.2, -0.2, 0.0}) xs.push_back(vec1(t));
  const double err = value_accuracy_probe(
      prog, xs, [](const Eigen::VectorXd& x) { return -std::abs(x[0]); });
  CHECK(err <= 1e-8);
}

TEST_CASE("a constant objective solves exactly") {
  BlockSet C;
  C.blocks = {make_interval_block(-1.0, 1.0)};
  const auto prog = make_program(1, 1, "3", {"y1"}, C, vec1(-2.0), vec1(2.0));
  const double err = value_accuracy_probe(
      prog, {vec1(0.0), vec1(5.0)},
      [](const Eigen::VectorXd&) { return 3.0; });
  CHECK(err == 0.0);
}

TEST_CASE("infeasible samples poison the accuracy probe") {
  BlockSet C;
  C.blocks = {make_interval_block(5.0, 6.0)};
  const auto prog = make_program(1, 1, "y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
  const double err = value_accuracy_probe(
      prog, {vec1(0.0)}, [](const Eigen::VectorXd&) { return 0.0; });
  CHECK(std::isinf(err));
}

// ---------------------------------------------------------------------------
// Refinement behavior
// ---------------------------------------------------------------------------

TEST_CASE("doubling the lattice never degrades the value") {
  const ParametricProgram ex = example_program();
  const ParametricProgram bx = box_program();
  for (double t : {0.0, 0.5, -0.3, 0.75}) {
    const double coarse = solve_value(ex, vec1(t), 1).value;
    const double fine = solve_value(ex, vec1(t), 2).value;
    CAPTURE(t);
    CHECK(fine <= coarse + 1e-9);

    const double coarse_b = solve_value(bx, vec1(t), 1).value;
    const double fine_b = solve_value(bx, vec1(t), 2).value;
    CHECK(fine_b <= coarse_b + 1e-9);
  }
}
