#include <cmath>
#include <limits>
#include <vector>

#include "dirval/conic.hpp"
#include "dirval/cones.hpp"
#include "dirval/multipliers.hpp"
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

// min_y x*y with |y| <= x^2 + 1 as two nonpositive rows.
ParametricProgram example_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block(), make_nonpos_block()};
  return make_program(1, 1, "x1*y1", {"-y1 - x1^2 - 1", "y1 - x1^2 - 1"},
                      C, vec1(-1.6), vec1(1.6));
}

// Constraints y - x <= 0 and -y <= 0 with an objective that ignores y;
// at the origin both rows are active and the multiplier set is the ray
// {(t, t) : t >= 0}.
ParametricProgram ray_program() {
  BlockSet C;
  C.blocks = {make_nonpos_block(), make_nonpos_block()};
  return make_program(1, 1, "x1", {"y1 - x1", "-y1"}, C, vec1(-2.0),
                      vec1(2.0));
}

ParametricProgram interval_program() {
  BlockSet C;
  C.blocks = {make_interval_block(-1.0, 1.0)};
  return make_program(1, 1, "x1*y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
}

// Complementarity pair (y, -y + x); at the origin the kernel of the
// y-Jacobian transpose is the diagonal.
ParametricProgram compl_program(const std::string& objective,
                                const std::string& second_row) {
  BlockSet C;
  C.blocks = {make_compl_block()};
  return make_program(1, 1, objective, {"y1", second_row}, C, vec1(-2.0),
                      vec1(2.0));
}

// The conic program whose dual ranges over the Clarke multiplier set: the
// negated direction and decision enter the data, so its dual value is the
// negated minimum of the Lagrangian x-gradient over the multipliers.
ConicPair inner_pair(const ParametricProgram& prog, const MultiplierSet& ms,
                     const Eigen::VectorXd& u) {
  ConicPair pair;
  pair.alpha = -ms.grad_y;
  pair.c = -ms.grad_x.dot(u);
  pair.A = -ms.jac_y;
  pair.b = -(ms.jac_x * u);
  pair.K = regular_tangent_cone(prog.C, ms.z);
  return pair;
}

}  // namespace

// ---------------------------------------------------------------------------
// Multiplier set assembly
// ---------------------------------------------------------------------------

TEST_CASE("active pair with independent rows gives the zero singleton") {
  const ParametricProgram prog = example_program();
  for (MultiplierKind kind : {MultiplierKind::Clarke, MultiplierKind::Limiting}) {
    const MultiplierSet ms = multiplier_set(prog, vec1(0.0), vec1(-1.0), kind);
    CHECK_FALSE(ms.empty);
    CHECK(ms.bounded);
    REQUIRE(ms.singleton);
    CHECK(ms.point.norm() <= 1e-9);
  }
}

TEST_CASE("inactive constraints force the zero multiplier") {
  const ParametricProgram prog = example_program();
  const MultiplierSet ms =
      multiplier_set(prog, vec1(0.0), vec1(0.3), MultiplierKind::Limiting);
  REQUIRE(ms.singleton);
  CHECK(ms.point.norm() <= 1e-9);
}

TEST_CASE("dependent active rows give an unbounded multiplier ray") {
  const ParametricProgram prog = ray_program();
  const MultiplierSet ms =
      multiplier_set(prog, vec1(0.0), vec1(0.0), MultiplierKind::Clarke);
  CHECK_FALSE(ms.empty);
  CHECK_FALSE(ms.bounded);
  CHECK_FALSE(ms.singleton);
  REQUIRE(ms.pieces.size() == 1);
  const Eigen::VectorXd w = ms.pieces[0].witness;
  CHECK(w[0] == doctest::Approx(w[1]).epsilon(1e-9));
  CHECK(w[0] >= -1e-9);
}

TEST_CASE("an interval boundary point carries its signed multiplier") {
  const ParametricProgram prog = interval_program();
  const MultiplierSet ms =
      multiplier_set(prog, vec1(0.7), vec1(-1.0), MultiplierKind::Clarke);
  REQUIRE(ms.singleton);
  CHECK(ms.point[0] == doctest::Approx(-0.7));
}

TEST_CASE("a non stationary point has no multipliers") {
  const ParametricProgram prog = example_program();
  const MultiplierSet ms =
      multiplier_set(prog, vec1(0.5), vec1(0.0), MultiplierKind::Clarke);
  CHECK(ms.empty);
  CHECK_THROWS_AS(extremize_xgrad(ms, vec1(1.0)), std::invalid_argument);
}

TEST_CASE("infeasible base points are rejected") {
  const ParametricProgram prog = example_program();
  CHECK_THROWS_AS(
      multiplier_set(prog, vec1(0.0), vec1(2.0), MultiplierKind::Clarke),
      std::invalid_argument);
  CHECK_THROWS_AS(robinson_cq(prog, vec1(0.0), vec1(2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(nnamcq(prog, vec1(0.0), vec1(2.0)), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Extremization
// ---------------------------------------------------------------------------

TEST_CASE("a singleton set pins both extremes") {
  const ParametricProgram prog = example_program();
  const MultiplierSet ms =
      multiplier_set(prog, vec1(0.0), vec1(-1.0), MultiplierKind::Clarke);
  const ExtremizeResult ext = extremize_xgrad(ms, vec1(1.0));
  CHECK(ext.min_value == doctest::Approx(-1.0));
  CHECK(ext.max_value == doctest::Approx(-1.0));
  CHECK(ext.argmin.norm() <= 1e-9);
  CHECK(ext.argmax.norm() <= 1e-9);
}

TEST_CASE("an unbounded ray makes one side infinite with a certificate") {
  const ParametricProgram prog = ray_program();
  const MultiplierSet ms =
      multiplier_set(prog, vec1(0.0), vec1(0.0), MultiplierKind::Clarke);
  const ExtremizeResult ext = extremize_xgrad(ms, vec1(1.0));

  CHECK(ext.min_value == -kInf);
  REQUIRE(ext.min_ray.size() == 2);
  // The certificate is a recession direction of the multiplier ray along
  // which the objective decreases.
  CHECK(ext.min_ray[0] == doctest::Approx(ext.min_ray[1]).epsilon(1e-9));
  const Eigen::VectorXd w = ms.jac_x * vec1(1.0);
  CHECK(w.dot(ext.min_ray) < -1e-9);

  CHECK(ext.max_value == doctest::Approx(1.0));
  CHECK(ext.argmax.norm() <= 1e-9);
}

// ---------------------------------------------------------------------------
// Constraint qualifications
// ---------------------------------------------------------------------------

TEST_CASE("independent active rows satisfy both qualifications") {
  const ParametricProgram prog = example_program();
  const CqVerdict r = robinson_cq(prog, vec1(0.0), vec1(-1.0));
  CHECK(r.holds);
  CHECK(r.interior_holds);
  CHECK(nnamcq(prog, vec1(0.0), vec1(-1.0)).holds);
}

TEST_CASE("identity constraint rows can have no abnormal multiplier") {
  BlockSet C;
  C.blocks = {make_nonpos_block()};
  const auto prog = make_program(1, 1, "y1", {"y1"}, C, vec1(-2.0), vec1(2.0));
  const CqVerdict r = robinson_cq(prog, vec1(0.0), vec1(0.0));
  CHECK(r.holds);
  CHECK(r.interior_holds);
}

TEST_CASE("complementarity corner breaks robinson along the diagonal") {
  const ParametricProgram prog = compl_program("y1", "-y1 + x1");
  const CqVerdict r = robinson_cq(prog, vec1(0.0), vec1(0.0));
  CHECK_FALSE(r.holds);
  CHECK_FALSE(r.interior_holds);
  REQUIRE(r.witness.size() == 2);
  CHECK(r.witness.norm() > 1e-9);
  CHECK(std::abs(r.witness[0] - r.witness[1]) <= 1e-9);

  const CqVerdict n = nnamcq(prog, vec1(0.0), vec1(0.0));
  CHECK_FALSE(n.holds);
  REQUIRE(n.witness.size() == 2);
  // The limiting pieces only meet the diagonal in its negative half.
  CHECK(n.witness[0] == doctest::Approx(n.witness[1]).epsilon(1e-9));
  CHECK(n.witness[0] < -1e-9);
  const Eigen::VectorXd z0 = Eigen::VectorXd::Zero(2);
  CHECK(union_contains(dir_normal_cone(prog.C, z0, z0), n.witness));
}

TEST_CASE("zero jacobian rows break the abnormal multiplier condition") {
  BlockSet C;
  C.blocks = {make_nonpos_block()};
  const auto prog =
      make_program(1, 1, "y1", {"y1^2"}, C, vec1(-2.0), vec1(2.0));
  const CqVerdict n = nnamcq(prog, vec1(0.0), vec1(0.0));
  CHECK_FALSE(n.holds);
  CHECK(n.witness[0] == doctest::Approx(1.0));
  CHECK_FALSE(robinson_cq(prog, vec1(0.0), vec1(0.0)).holds);
}

TEST_CASE("the anti diagonal kernel separates the two qualifications") {
  // Kernel of the transposed y-Jacobian is spanned by (1, -1), which
  // misses every limiting piece at the complementarity corner but lives
  // in its convex hull.
  const ParametricProgram prog = compl_program("x1", "y1 + x1");
  CHECK(nnamcq(prog, vec1(0.0), vec1(0.0)).holds);
  const CqVerdict r = robinson_cq(prog, vec1(0.0), vec1(0.0));
  CHECK_FALSE(r.holds);
  CHECK_FALSE(r.interior_holds);
}

// ---------------------------------------------------------------------------
// Consistency properties
// ---------------------------------------------------------------------------

namespace {

struct Instance {
  ParametricProgram prog;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

std::vector<Instance> battery() {
  std::vector<Instance> out;
  out.push_back({example_program(), vec1(0.0), vec1(-1.0)});
  out.push_back({example_program(), vec1(0.0), vec1(0.3)});
  out.push_back({example_program(), vec1(0.5), vec1(-1.25)});
  out.push_back({ray_program(), vec1(0.0), vec1(0.0)});
  out.push_back({interval_program(), vec1(0.7), vec1(-1.0)});
  out.push_back({compl_program("y1", "-y1 + x1"), vec1(0.0), vec1(0.0)});
  out.push_back({compl_program("x1", "y1 + x1"), vec1(0.0), vec1(0.0)});
  return out;
}

}  // namespace

TEST_CASE("limiting multipliers satisfy the clarke constraints") {
  for (const Instance& inst : battery()) {
    const MultiplierSet lim =
        multiplier_set(inst.prog, inst.x, inst.y, MultiplierKind::Limiting);
    const MultiplierSet cla =
        multiplier_set(inst.prog, inst.x, inst.y, MultiplierKind::Clarke);
    REQUIRE(cla.pieces.size() == 1);
    for (const MultiplierPiece& piece : lim.pieces) {
      if (piece.empty) continue;
      CHECK(cone_contains(cla.pieces[0].normal, piece.witness));
      CHECK((lim.jac_y.transpose() * piece.witness + lim.grad_y).norm() <=
            1e-9 * (1.0 + piece.witness.norm()));
    }
  }
}

TEST_CASE("robinson agrees with nonempty plus bounded at stationary points") {
  for (const Instance& inst : battery()) {
    const MultiplierSet cla =
        multiplier_set(inst.prog, inst.x, inst.y, MultiplierKind::Clarke);
    if (cla.empty) continue;  // not a stationary point
    const CqVerdict r = robinson_cq(inst.prog, inst.x, inst.y);
    CAPTURE(inst.x[0]);
    CAPTURE(inst.y[0]);
    CHECK(r.holds == (!cla.empty && cla.bounded));
    CHECK(r.holds == r.interior_holds);
  }
}

TEST_CASE("a failed abnormal multiplier test always fails robinson") {
  for (const Instance& inst : battery()) {
    const CqVerdict n = nnamcq(inst.prog, inst.x, inst.y);
    if (!n.holds) CHECK_FALSE(robinson_cq(inst.prog, inst.x, inst.y).holds);
  }
}

TEST_CASE("extremes match the dual values of the inner conic programs") {
  for (const Instance& inst : battery()) {
    const CqVerdict r = robinson_cq(inst.prog, inst.x, inst.y);
    if (!r.holds) continue;
    const MultiplierSet ms =
        multiplier_set(inst.prog, inst.x, inst.y, MultiplierKind::Clarke);
    if (ms.empty) continue;
    for (double dir : {1.0, -1.0}) {
      const Eigen::VectorXd u = vec1(dir);
      const ExtremizeResult ext = extremize_xgrad(ms, u);
      const PairSolution fwd = solve_pair(inner_pair(inst.prog, ms, u));
      const PairSolution bwd = solve_pair(inner_pair(inst.prog, ms, -u));
      CAPTURE(inst.y[0]);
      CAPTURE(dir);
      REQUIRE(fwd.dual_status == LPStatus::Optimal);
      REQUIRE(bwd.dual_status == LPStatus::Optimal);
      CHECK(std::abs(-fwd.dual_value - ext.min_value) <= 1e-8);
      CHECK(std::abs(bwd.dual_value - ext.max_value) <= 1e-8);
      CHECK(fwd.gap <= 1e-8);
    }
  }
}

TEST_CASE("the inner conic pair of the worked example solves to one") {
  const ParametricProgram prog = example_program();
  const MultiplierSet ms =
      multiplier_set(prog, vec1(0.0), vec1(-1.0), MultiplierKind::Clarke);
  const PairSolution sol = solve_pair(inner_pair(prog, ms, vec1(1.0)));
  REQUIRE(sol.primal_status == LPStatus::Optimal);
  CHECK(sol.primal_value == doctest::Approx(1.0));
  CHECK(sol.dual_value == doctest::Approx(1.0));
  CHECK(sol.dual_point.norm() <= 1e-9);
}

TEST_CASE("classic nlp structure detection") {
  BlockSet nlp;
  nlp.blocks = {make_zero_block(), make_nonpos_block()};
  CHECK(classic_nlp_structure(nlp));

  BlockSet mixed;
  mixed.blocks = {make_nonpos_block(), make_interval_block(0.0, 1.0)};
  CHECK_FALSE(classic_nlp_structure(mixed));

  BlockSet empty;
  CHECK_FALSE(classic_nlp_structure(empty));
}
