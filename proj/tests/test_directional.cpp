#include <cmath>
#include <limits>
#include <vector>

#include "dirval/conic.hpp"
#include "dirval/cones.hpp"
#include "dirval/directional.hpp"
#include "dirval/program.hpp"
#include "doctest.h"

using namespace dirval;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

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

// min_y x*y with |y| <= x^2 + 1. V(x) = -|x| (x^2 + 1), so V'(0; u) = -|u|
// with the directional minimizer at -sign(u).
ParametricProgram absolute_value_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block(), make_nonpos_block()};
  return make_program(1, 1, "x1*y1", {"-y1 - x1^2 - 1", "y1 - x1^2 - 1"},
                      C, vec1(-1.6), vec1(1.6));
}

// min_y y with y >= x and y >= -x. V(x) = |x| exactly.
ParametricProgram vee_program() {
  BlockSet C;
  C.blocks = {make_nonneg_block(), make_nonneg_block()};
  return make_program(1, 1, "y1", {"y1 - x1", "y1 + x1"}, C, vec1(-2.0),
                      vec1(2.0));
}

// min_y x*y over y in [-1, 1]: V(x) = -|x| with the whole interval optimal
// at x = 0.
ParametricProgram box_program() {
  BlockSet C;
  C.blocks = {make_interval_block(-1.0, 1.0)};
  return make_program(1, 1, "x1*y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
}

// Two parallel-in-y rows y <= x and y <= 2x with objective -y. V(x) =
// -min(x, 2x), and at the origin the multiplier segment {l1 + l2 = 1,
// l >= 0} spreads grad_x L . u over [-2, -1] for u = 1.
ParametricProgram two_slope_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block(), make_nonpos_block()};
  return make_program(1, 1, "-y1", {"y1 - x1", "y1 - 2*x1"}, C, vec1(-2.0),
                      vec1(2.0));
}

// Feasible set pinched to {0} at x = 0 by y <= x, y >= 0; the multiplier
// set at the origin is the unbounded ray {(t, t) : t >= 0}.
ParametricProgram pinch_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block(), make_nonpos_block()};
  return make_program(1, 1, "x1", {"y1 - x1", "-y1"}, C, vec1(-2.0),
                      vec1(2.0));
}

// Constraint x <= 0 that ignores y entirely: V(x) = ybox_lo for x <= 0 and
// the feasible set is empty for x > 0.
ParametricProgram half_line_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block()};
  return make_program(1, 1, "y1", {"x1"}, C, vec1(-2.0), vec1(2.0));
}

// Complementarity pair ((1+x) y, x - y): F(x) = {0, x} for small x >= 0.
// The x-dependent first factor keeps the y-Jacobian from being constant.
ParametricProgram compl_two_point_program() {
  BlockSet C;
  C.blocks = {make_compl_block()};
  return make_program(1, 1, "y1", {"(1 + x1)*y1", "x1 - y1"}, C, vec1(-2.0),
                      vec1(2.0));
}

// Complementarity pair ((1+x)(y-x), x-y): F(x) = {x} for small x. The
// lifted zero stratum is reachable and its normal cone meets the kernel,
// so the first-order condition cannot certify this one.
ParametricProgram compl_diagonal_program() {
  BlockSet C;
  C.blocks = {make_compl_block()};
  return make_program(1, 1, "y1", {"(1 + x1)*(y1 - x1)", "x1 - y1"}, C,
                      vec1(-2.0), vec1(2.0));
}

// y^2 <= 0 pins F(x) = {0}: dist(y, F) / dist(P, C) = 1/|y| blows up, the
// signature the stability probe must flag.
ParametricProgram squared_row_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block()};
  return make_program(1, 1, "y1", {"y1^2"}, C, vec1(-2.0), vec1(2.0));
}

// y = x^2 as an equality row: F(x) is a single point that no ybox lattice
// hits, exercising the isolated-root recovery in the probe.
ParametricProgram parabola_program() {
  BlockSet C;
  C.blocks = {make_zero_block()};
  return make_program(1, 1, "y1", {"y1 - x1^2"}, C, vec1(-2.0), vec1(2.0));
}

std::vector<Eigen::VectorXd> point_list(const DirectionalSolutionSet& s) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : s.points) out.push_back(p.y);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dini quotient fan

TEST_CASE("dini estimate recovers the one-sided derivative of -|x|(x^2+1)") {
  const auto prog = absolute_value_program();
  for (const double u : {1.0, -1.0}) {
    const DiniEstimate est = dini_estimate(prog, vec1(0.0), vec1(u));
    CHECK(est.value_at_base == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(est.lower == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(est.upper == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(est.lower <= est.upper);
    CHECK(est.uncertainty < 1e-2);
    CHECK(est.table.size() >= 13);
  }
}

TEST_CASE("dini estimate recovers the kink of |x|") {
  const auto prog = vee_program();
  const DiniEstimate plus = dini_estimate(prog, vec1(0.0), vec1(1.0));
  CHECK(plus.lower == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(plus.upper == doctest::Approx(1.0).epsilon(1e-3));
  const DiniEstimate minus = dini_estimate(prog, vec1(0.0), vec1(-1.0));
  CHECK(minus.lower == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("dini estimate scales linearly in the direction length") {
  const auto prog = absolute_value_program();
  const DiniEstimate one = dini_estimate(prog, vec1(0.0), vec1(1.0));
  const DiniEstimate two = dini_estimate(prog, vec1(0.0), vec1(2.0));
  const double tol = 2.0 * one.uncertainty + two.uncertainty + 1e-6;
  CHECK(std::abs(two.lower - 2.0 * one.lower) <= tol);
  CHECK(std::abs(two.upper - 2.0 * one.upper) <= tol);
}

TEST_CASE("dini estimate throws with the offending parameter on an infeasible fan") {
  const auto prog = half_line_program();
  try {
    dini_estimate(prog, vec1(0.0), vec1(1.0));
    FAIL("expected InfeasibleSample");
  } catch (const InfeasibleSample& bad) {
    REQUIRE(bad.x.size() == 1);
    CHECK(bad.x[0] > 0.0);
  }
}

// ---------------------------------------------------------------------------
// Directional continuity

TEST_CASE("continuity probe accepts a locally Lipschitz value function") {
  const auto prog = absolute_value_program();
  const ContinuityProbe probe = directional_continuity_probe(prog, vec1(0.0), vec1(1.0));
  CHECK(probe.continuous);
  CHECK(probe.infeasible_samples == 0);
  CHECK(probe.liminf == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(probe.limsup == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("continuity probe flags the infeasible side of a half line") {
  const auto prog = half_line_program();
  const ContinuityProbe probe = directional_continuity_probe(prog, vec1(0.0), vec1(1.0));
  CHECK(probe.value == doctest::Approx(-2.0));
  CHECK(probe.infeasible_samples > 0);
  CHECK(probe.lsc);
  CHECK_FALSE(probe.usc);
  CHECK_FALSE(probe.continuous);

  const ContinuityProbe back = directional_continuity_probe(prog, vec1(0.0), vec1(-1.0));
  CHECK(back.continuous);
}

// ---------------------------------------------------------------------------
// Directional solution set

TEST_CASE("directional minimizers pick the correct endpoint of S(0) = [-1, 1]") {
  const auto prog = absolute_value_program();

  const DirectionalSolutionSet right = directional_solution_set(prog, vec1(0.0), vec1(1.0));
  CHECK(right.continuity_ok);
  REQUIRE(right.points.size() == 1);
  CHECK(right.points[0].y[0] == doctest::Approx(-1.0).epsilon(1e-4));

  const DirectionalSolutionSet left = directional_solution_set(prog, vec1(0.0), vec1(-1.0));
  REQUIRE(left.points.size() == 1);
  CHECK(left.points[0].y[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("directional solution points satisfy the base-solution invariants") {
  const auto prog = absolute_value_program();
  const ValueSolveResult base = solve_value(prog, vec1(0.0));
  REQUIRE(base.status == SolveStatus::Solved);

  const DirectionalSolutionSet s = directional_solution_set(prog, vec1(0.0), vec1(1.0));
  REQUIRE_FALSE(s.points.empty());
  for (const auto& pt : s.points) {
    CHECK(is_feasible(prog, vec1(0.0), pt.y).feasible);
    CHECK(std::abs(pt.value - base.value) <= 1e-6);
    double nearest = kInf;
    for (const auto& bp : base.points) nearest = std::min(nearest, (bp.y - pt.y).norm());
    CHECK(nearest <= 1e-4);
  }
}

TEST_CASE("directional solution set is empty when the direction leaves the domain") {
  const auto prog = half_line_program();
  const DirectionalSolutionSet s = directional_solution_set(prog, vec1(0.0), vec1(1.0));
  CHECK(s.points.empty());
  CHECK_FALSE(s.continuity_ok);
  CHECK(s.candidates == 0);
}

TEST_CASE("box program keeps only the endpoint favored by the direction") {
  const auto prog = box_program();
  const DirectionalSolutionSet s = directional_solution_set(prog, vec1(0.0), vec1(1.0));
  REQUIRE(s.points.size() == 1);
  CHECK(s.points[0].y[0] == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(s.candidates >= 1);
}

// ---------------------------------------------------------------------------
// Image directions

TEST_CASE("image directions give the exact ray when jac_x P . u is nonzero") {
  const auto prog = vee_program();
  const ImageDirDeriv idd = image_dir_deriv(prog, vec1(0.0), vec1(0.0), vec1(1.0));
  CHECK(idd.kind == ImageKind::ExactRay);
  REQUIRE(idd.generators.size() == 1);
  // Rows y - x and y + x move like (-1, +1) per unit of x.
  CHECK(idd.generators[0][0] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(idd.generators[0][1] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("image directions fall back to sampled chords at a first-order flat point") {
  const auto prog = absolute_value_program();
  const ImageDirDeriv idd = image_dir_deriv(prog, vec1(0.0), vec1(-1.0), vec1(1.0));
  CHECK(idd.kind == ImageKind::SampledCone);
  REQUIRE(idd.generators.size() == 1);
  // Both rows drop by x^2, so the chord direction is -(1,1)/sqrt(2).
  CHECK(idd.generators[0][0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(idd.generators[0][1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("a parameter-free constraint image does not move") {
  const auto prog = box_program();
  const ImageDirDeriv idd = image_dir_deriv(prog, vec1(0.0), vec1(0.5), vec1(1.0));
  CHECK(idd.kind == ImageKind::SampledCone);
  CHECK(idd.generators.empty());
}

TEST_CASE("image directions reject an infeasible base point") {
  const auto prog = box_program();
  CHECK_THROWS_AS(image_dir_deriv(prog, vec1(0.0), vec1(1.5), vec1(1.0)),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Stability sufficient conditions

TEST_CASE("stability certified through the abnormal-multiplier check") {
  const auto prog = absolute_value_program();
  const RsVerdict v = rs_sufficient(prog, vec1(0.0), vec1(-1.0), vec1(1.0));
  CHECK(v.holds);
  CHECK(v.via == RsPath::Nnamcq);
}

TEST_CASE("stability certified through the separated affine structure") {
  const auto prog = pinch_program();
  // The abnormal ray (t, t) defeats the multiplier check, but the rows are
  // affine with constant Jacobians and the ray x = t stays feasible.
  CHECK_FALSE(nnamcq(prog, vec1(0.0), vec1(0.0)).holds);
  const RsVerdict v = rs_sufficient(prog, vec1(0.0), vec1(0.0), vec1(1.0));
  CHECK(v.holds);
  CHECK(v.via == RsPath::AffinePolyhedral);
}

TEST_CASE("stability stays unknown when the ray leaves the domain") {
  const auto prog = pinch_program();
  const RsVerdict v = rs_sufficient(prog, vec1(0.0), vec1(0.0), vec1(-1.0));
  CHECK_FALSE(v.holds);
  CHECK(v.via == RsPath::None);
}

TEST_CASE("stability certified through the directional first-order condition") {
  const auto prog = compl_two_point_program();
  CHECK_FALSE(nnamcq(prog, vec1(0.0), vec1(0.0)).holds);
  const RsVerdict v = rs_sufficient(prog, vec1(0.0), vec1(0.0), vec1(1.0));
  CHECK(v.holds);
  CHECK(v.via == RsPath::DirectionalFoscms);
}

TEST_CASE("a reachable stratum with an abnormal normal direction blocks the certificate") {
  const auto prog = compl_diagonal_program();
  const RsVerdict v = rs_sufficient(prog, vec1(0.0), vec1(0.0), vec1(1.0));
  CHECK_FALSE(v.holds);
  CHECK(v.via == RsPath::None);
}

TEST_CASE("a holding stability verdict implies the linearized system is solvable") {
  struct Case {
    ParametricProgram prog;
    Eigen::VectorXd y;
  };
  std::vector<Case> cases;
  cases.push_back({absolute_value_program(), vec1(-1.0)});
  cases.push_back({pinch_program(), vec1(0.0)});
  cases.push_back({compl_two_point_program(), vec1(0.0)});

  for (const auto& c : cases) {
    const Eigen::VectorXd x = vec1(0.0);
    const Eigen::VectorXd u = vec1(1.0);
    const RsVerdict v = rs_sufficient(c.prog, x, c.y, u);
    if (!v.holds) continue;
    const Eigen::VectorXd z = project(c.prog.C, constraint_value(c.prog, x, c.y)).point;
    const Eigen::MatrixXd jy = constraint_jac_y(c.prog, x, c.y);
    const Eigen::VectorXd du = constraint_jac_x(c.prog, x, c.y) * u;
    bool feasible = false;
    for (const auto& piece : tangent_cone(c.prog.C, z))
      if (linear_system_feasible(jy, piece, du)) feasible = true;
    CHECK(feasible);
  }
}

TEST_CASE("stability check rejects an infeasible base point") {
  const auto prog = box_program();
  CHECK_THROWS_AS(rs_sufficient(prog, vec1(0.0), vec1(1.5), vec1(1.0)),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Stability numeric probe

TEST_CASE("probe sees a bounded modulus on an equality curve") {
  const auto prog = parabola_program();
  const RsProbe probe = rs_numeric_probe(prog, vec1(0.0), vec1(0.0), vec1(1.0),
                                         DirectionalNbhd{vec1(1.0), 0.3, 0.5});
  CHECK(probe.pairs > 100);
  CHECK_FALSE(probe.violation);
  CHECK(probe.kappa_hat < 10.0);
  CHECK(probe.kappa_hat > 0.1);
}

TEST_CASE("probe flags the divergent modulus of a squared row") {
  const auto prog = squared_row_program();
  const RsProbe probe = rs_numeric_probe(prog, vec1(0.0), vec1(0.0), vec1(1.0),
                                         DirectionalNbhd{vec1(1.0), 0.3, 0.5});
  CHECK(probe.violation);
  CHECK(probe.near_max > 1e4);
}

TEST_CASE("probe stays quiet on the smooth inequality example") {
  const auto prog = absolute_value_program();
  const RsProbe probe = rs_numeric_probe(prog, vec1(0.0), vec1(-1.0), vec1(1.0),
                                         DirectionalNbhd{vec1(1.0), 0.3, 0.5});
  CHECK(probe.pairs > 100);
  CHECK_FALSE(probe.violation);
  CHECK(std::isfinite(probe.kappa_hat));
}

TEST_CASE("probe respects a two-point feasible set thinner than the grid") {
  const auto prog = compl_two_point_program();
  const RsProbe probe = rs_numeric_probe(prog, vec1(0.0), vec1(0.0), vec1(1.0),
                                         DirectionalNbhd{vec1(1.0), 0.3, 0.5});
  CHECK(probe.pairs > 100);
  CHECK_FALSE(probe.violation);
}

TEST_CASE("a certified instance never trips the probe") {
  struct Case {
    ParametricProgram prog;
    Eigen::VectorXd y;
  };
  std::vector<Case> cases;
  cases.push_back({absolute_value_program(), vec1(-1.0)});
  cases.push_back({pinch_program(), vec1(0.0)});
  cases.push_back({compl_two_point_program(), vec1(0.0)});

  for (const auto& c : cases) {
    const RsVerdict v = rs_sufficient(c.prog, vec1(0.0), c.y, vec1(1.0));
    REQUIRE(v.holds);
    const RsProbe probe = rs_numeric_probe(c.prog, vec1(0.0), c.y, vec1(1.0),
                                           DirectionalNbhd{vec1(1.0), 0.3, 0.5});
    CHECK_FALSE(probe.violation);
  }
}

// ---------------------------------------------------------------------------
// Sandwich bounds

TEST_CASE("singleton multipliers collapse the sandwich to the derivative") {
  const auto prog = absolute_value_program();
  const SandwichBounds b =
      sandwich_bounds(prog, vec1(0.0), vec1(1.0), {vec1(-1.0)});
  CHECK(b.hypotheses_verified);
  REQUIRE(b.audit.size() == 1);
  CHECK(b.audit[0].verified);
  CHECK(b.audit[0].multipliers_singleton);
  CHECK(b.L == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(b.U == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("a multiplier segment opens a genuine gap between the bounds") {
  const auto prog = two_slope_program();
  const SandwichBounds b = sandwich_bounds(prog, vec1(0.0), vec1(1.0), {vec1(0.0)});
  CHECK(b.hypotheses_verified);
  REQUIRE(b.audit.size() == 1);
  CHECK_FALSE(b.audit[0].multipliers_singleton);
  CHECK(b.L == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(b.U == doctest::Approx(-1.0).epsilon(1e-8));

  // V(x) = -min(x, 2x) gives V'(0; 1) = -1, inside the bracket.
  const DiniEstimate est = dini_estimate(prog, vec1(0.0), vec1(1.0));
  const double tol = std::max(1e-3, est.uncertainty);
  CHECK(b.L - tol <= est.lower);
  CHECK(est.upper <= b.U + tol);
}

TEST_CASE("an unbounded multiplier ray fails the interiority audit") {
  const auto prog = pinch_program();
  const SandwichBounds b = sandwich_bounds(prog, vec1(0.0), vec1(1.0), {vec1(0.0)});
  CHECK_FALSE(b.hypotheses_verified);
  REQUIRE(b.audit.size() == 1);
  CHECK(b.audit[0].multipliers_nonempty);
  CHECK_FALSE(b.audit[0].multipliers_bounded);
  CHECK_FALSE(b.audit[0].regular_plus);
  CHECK(b.L == -kInf);
  CHECK_FALSE(b.failed.empty());
}

TEST_CASE("sandwich bounds reject an empty point list") {
  const auto prog = absolute_value_program();
  CHECK_THROWS_AS(sandwich_bounds(prog, vec1(0.0), vec1(1.0), {}),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Classical bounds over the full solution set

TEST_CASE("classical bounds never exceed the directional lower bound") {
  struct Case {
    ParametricProgram prog;
  };
  std::vector<ParametricProgram> progs;
  progs.push_back(absolute_value_program());
  progs.push_back(box_program());
  progs.push_back(two_slope_program());

  for (const auto& prog : progs) {
    const Eigen::VectorXd x = vec1(0.0);
    const Eigen::VectorXd u = vec1(1.0);
    const ValueSolveResult base = solve_value(prog, x);
    REQUIRE(base.status == SolveStatus::Solved);
    std::vector<Eigen::VectorXd> full;
    for (const auto& pt : base.points) full.push_back(pt.y);

    const DirectionalSolutionSet dirsol = directional_solution_set(prog, x, u);
    REQUIRE_FALSE(dirsol.points.empty());
    const SandwichBounds b = sandwich_bounds(prog, x, u, point_list(dirsol));
    const ClassicBounds c = classic_bounds(prog, x, u, full);

    CHECK(c.used > 0);
    CHECK(c.lower <= b.L + 1e-9);
  }
}

TEST_CASE("classical lower bound is -infinity on the unbounded multiplier ray") {
  const auto prog = pinch_program();
  const ClassicBounds c = classic_bounds(prog, vec1(0.0), vec1(1.0), {vec1(0.0)});
  CHECK(c.used == 1);
  CHECK(c.lower == -kInf);
  CHECK(std::isfinite(c.upper));
}

// ---------------------------------------------------------------------------
// Verdict assembly

TEST_CASE("verdict ladder names the first missing hypothesis") {
  const DiniEstimate dini{};
  SandwichBounds bounds;
  bounds.hypotheses_verified = false;
  bounds.failed = "empty multiplier set at y = [0]";

  DiffVerdict v = differentiability_verdict(bounds, dini, false, 0, false, false);
  CHECK(v.kind == DiffKind::Inconclusive);
  CHECK(v.reason == "directional solution sample is empty");

  v = differentiability_verdict(bounds, dini, false, 1, false, true);
  CHECK(v.reason == "directional stability unverified at a solution point");

  v = differentiability_verdict(bounds, dini, false, 1, true, false);
  CHECK(v.reason ==
        "restricted inf-compactness unverified: minimizers touch the search box");

  v = differentiability_verdict(bounds, dini, false, 1, true, true);
  CHECK(v.kind == DiffKind::Inconclusive);
  CHECK(v.reason == bounds.failed);
}

TEST_CASE("verdict distinguishes the singleton and segment cases") {
  const auto prog = absolute_value_program();
  const DiniEstimate dini = dini_estimate(prog, vec1(0.0), vec1(1.0));
  const SandwichBounds single =
      sandwich_bounds(prog, vec1(0.0), vec1(1.0), {vec1(-1.0)});
  const DiffVerdict v = differentiability_verdict(single, dini, true, 1, true, true);
  CHECK(v.kind == DiffKind::Differentiable);
  CHECK(v.value == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(v.crosscheck_ok);

  const auto slopes = two_slope_program();
  const DiniEstimate dini2 = dini_estimate(slopes, vec1(0.0), vec1(1.0));
  const SandwichBounds seg = sandwich_bounds(slopes, vec1(0.0), vec1(1.0), {vec1(0.0)});
  const DiffVerdict w = differentiability_verdict(seg, dini2, true, 1, true, true);
  CHECK(w.kind == DiffKind::Sandwich);
  CHECK(w.L == doctest::Approx(-2.0));
  CHECK(w.U == doctest::Approx(-1.0));
}

// ---------------------------------------------------------------------------
// Full analysis

TEST_CASE("analysis of the absolute-value example is differentiable end to end") {
  const auto prog = absolute_value_program();
  const SensitivityReport rep = analyze(prog, vec1(0.0), vec1(1.0));

  CHECK(rep.base_solved);
  CHECK(rep.value == doctest::Approx(0.0).epsilon(1e-8));
  CHECK_FALSE(rep.omega_boundary_touched);

  REQUIRE(rep.dirsol.points.size() == 1);
  CHECK(rep.dirsol.points[0].y[0] == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(rep.dini_ok);

  REQUIRE(rep.solutions.size() == 1);
  CHECK(rep.solutions[0].rs.holds);
  CHECK(rep.solutions[0].robinson.holds);
  CHECK(rep.solutions[0].clarke.singleton);

  CHECK(rep.probe_ran);
  CHECK_FALSE(rep.probe.violation);

  REQUIRE(rep.bounds_ok);
  CHECK(rep.bounds.L == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(rep.bounds.U == doctest::Approx(-1.0).epsilon(1e-8));

  REQUIRE(rep.classic_ok);
  CHECK(rep.classic.lower <= rep.bounds.L + 1e-9);

  CHECK(rep.verdict.kind == DiffKind::Differentiable);
  CHECK(rep.verdict.value == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(rep.verdict.crosscheck_ok);

  const double tol = std::max(1e-3, rep.dini.uncertainty);
  CHECK(rep.bounds.L - tol <= rep.dini.lower);
  CHECK(rep.dini.upper <= rep.bounds.U + tol);
}

TEST_CASE("analysis reports the sandwich when multipliers are a segment") {
  const auto prog = two_slope_program();
  const SensitivityReport rep = analyze(prog, vec1(0.0), vec1(1.0));
  CHECK(rep.base_solved);
  CHECK(rep.verdict.kind == DiffKind::Sandwich);
  CHECK(rep.verdict.L == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(rep.verdict.U == doctest::Approx(-1.0).epsilon(1e-8));
  const double tol = std::max(1e-3, rep.dini.uncertainty);
  CHECK(rep.verdict.L - tol <= rep.dini.lower);
  CHECK(rep.dini.upper <= rep.verdict.U + tol);
}

TEST_CASE("analysis of an infeasible direction stays inconclusive with notes") {
  const auto prog = half_line_program();
  const SensitivityReport rep = analyze(prog, vec1(0.0), vec1(1.0));
  CHECK(rep.base_solved);
  CHECK_FALSE(rep.dini_ok);
  CHECK(rep.dirsol.points.empty());
  CHECK_FALSE(rep.bounds_ok);
  CHECK(rep.verdict.kind == DiffKind::Inconclusive);
  CHECK_FALSE(rep.notes.empty());
  // The ybox minimizer pins the box, which the report must surface.
  CHECK(rep.omega_boundary_touched);
}

TEST_CASE("analysis at an infeasible base parameter reports and stops") {
  BlockSet C;
  C.blocks = {make_nonpos_block()};
  const auto prog = make_program(1, 1, "y1", {"x1 + 1"}, C, vec1(-2.0), vec1(2.0));
  const SensitivityReport rep = analyze(prog, vec1(0.0), vec1(1.0));
  CHECK_FALSE(rep.base_solved);
  CHECK(rep.value == kInf);
  CHECK(rep.verdict.kind == DiffKind::Inconclusive);
  CHECK_FALSE(rep.notes.empty());
}
