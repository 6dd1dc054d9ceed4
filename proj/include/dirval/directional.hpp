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

#ifndef DIRVAL_DIRECTIONAL_HPP
#define DIRVAL_DIRECTIONAL_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirval/multipliers.hpp"
#include "dirval/program.hpp"

namespace dirval {

// Directional analysis of the value function V(x) = min{ f(x,y) : P(x,y)
// in C } around a base parameter in a direction u. The objects of
// interest (Dini derivatives, directional solution sets, stability
// moduli) are limits, so everything here estimates them from finite
// sampling fans and reports the evidence alongside the number: estimates
// carry uncertainty radii, verdicts carry which check produced them.

// Thrown when a sampling fan lands on a parameter with an empty feasible
// set; `x` is the offending parameter.
struct InfeasibleSample : std::runtime_error {
  Eigen::VectorXd x;
  explicit InfeasibleSample(Eigen::VectorXd bad_x);
};

// Directions in which the constraint image P(. , y) can move as the
// parameter leaves x along u. When jac_x P . u is nonzero the cone is
// exactly the ray that vector spans. Otherwise unit chords
// (P(x + t u', y) - P(x, y)) / ||.|| are collected over the scale ladder
// t = 10^{-k/2}, k = 2..10, with the direction aperture shrinking like t,
// and the chords surviving at the three finest scales are kept,
// deduplicated at angular tolerance 1e-4. Chords below 1e-13 are treated
// as no movement; an empty generator list is the zero cone.
enum class ImageKind { ExactRay, SampledCone };

struct ImageDirDeriv {
  ImageKind kind = ImageKind::SampledCone;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd u;
  std::vector<Eigen::VectorXd> generators;  // unit vectors, possibly empty
};

// Throws std::invalid_argument when y is infeasible at x.
ImageDirDeriv image_dir_deriv(const ParametricProgram& prog,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& u);

// One sampled difference quotient (V(x + t u') - V(x)) / t.
struct DiniSample {
  int scale = 0;  // k in t = 0.1 * 2^{-k}
  double t = 0.0;
  Eigen::VectorXd dir;  // the perturbed direction u'
  double value = 0.0;   // V(x + t * dir)
  double quotient = 0.0;
};

// Dini derivative estimates taken in the Hadamard sense: quotients are
// sampled along perturbed directions u' = u + t w over a fan of up to
// eight unit vectors w, so the aperture shrinks linearly and every fan
// realization converges to u. `upper` and `lower` are the max and min
// over the fan of the order-1 Richardson extrapolation of the two finest
// scales (t halves between scales, so 2 q(t/2) - q(t) cancels the linear
// error term). `uncertainty` is the per-realization quotient spread over
// the three finest scales plus 2 * feas_tol / t_min, the value noise a
// quotient at the finest scale can pick up from the solver's feasibility
// band.
struct DiniEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double uncertainty = 0.0;
  double value_at_base = 0.0;
  std::vector<DiniSample> table;
};

// Throws InfeasibleSample when the base point or any fan sample has an
// empty feasible set.
DiniEstimate dini_estimate(const ParametricProgram& prog, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u);

// Directional semicontinuity of V at x in direction u, decided from the
// same fan as dini_estimate: each realization's value sequence is
// extrapolated to t = 0 (+infinity when its tail is infeasible), and the
// smallest and largest limits are compared against V(x) at tolerance
// 1e-6. Infeasible samples are evidence here, not errors.
struct ContinuityProbe {
  double value = 0.0;  // V(x); +infinity when x itself is infeasible
  double liminf = 0.0;
  double limsup = 0.0;
  bool lsc = false;
  bool usc = false;
  bool continuous = false;
  int infeasible_samples = 0;
};

ContinuityProbe directional_continuity_probe(const ParametricProgram& prog,
                                             const Eigen::VectorXd& x,
                                             const Eigen::VectorXd& u);

// Sampled estimate of the directional solution set: minimizers collected
// at x + t_k u'_k with u'_k -> u, kept when they persist to the finest
// scale and land within 1e-4 of a minimizer of the base problem (when V
// is directionally continuous, every accumulation point of directional
// minimizers is a base minimizer, so anything farther is sampling
// noise). Each kept point is reported as its matched base minimizer,
// which is feasible at x itself and carries the base objective value.
// A finite sample can only under-approximate the true set.
struct DirectionalSolutionSet {
  std::vector<SolutionPoint> points;  // representatives from the base solve
  ContinuityProbe continuity;
  bool continuity_ok = false;  // the verdict the estimate is conditioned on
  int candidates = 0;          // fine-scale minimizers before filtering
  int dropped = 0;             // removed by persistence or the base match
};

DirectionalSolutionSet directional_solution_set(const ParametricProgram& prog,
                                                const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& u);

// Sufficient conditions for directional stability of the feasible map at
// (x, y) in direction u: whether dist(y', F(x')) stays bounded by a
// multiple of the constraint violation dist(P(x', y'), C) over a
// directional neighborhood. Tried in order:
//   (a) no nonzero abnormal multiplier at (x, y), which is sufficient in
//       every direction;
//   (b) separated structure P(x, y) = a(x) + B y + c (detected by
//       sampling the Jacobians) with C polyhedral and the feasible set
//       nonempty at sampled parameters along the ray, which makes the
//       feasible map polyhedral in y with an x-independent modulus;
//   (c) the directional first-order condition: every image direction d
//       admits v with d + jac_y P v in the tangent cone, and on every
//       stratum of the tangent cone reachable by such a pair (d, v) != 0
//       the kernel of jac_y P^T meets the stratum's directional normal
//       cone only at zero. Reachability is tested against closed strata,
//       which can only add checks, so a Holds verdict stays sound.
// A holding verdict is a certificate. Everything else is Unknown: these
// are sufficient conditions, so nothing here ever proves failure.
enum class RsPath { None, Nnamcq, AffinePolyhedral, DirectionalFoscms };

struct RsVerdict {
  bool holds = false;
  RsPath via = RsPath::None;
  std::string detail;
};

// Throws std::invalid_argument when y is infeasible at x.
RsVerdict rs_sufficient(const ParametricProgram& prog, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& u);

const char* rs_path_name(RsPath via);

// Monte-Carlo stress test of the stability inequality dist(y', F(x')) <=
// kappa * dist(P(x', y'), C): pairs (x', y') are sampled over the
// directional neighborhood of x (radii log-spaced down to eps * 1e-3 in
// x and eps * 1e-5 in y, directions within the neighborhood's aperture),
// and the distance ratio is collected for each pair where either side
// exceeds 1e-12. dist(y', F(x')) is measured against the feasibility
// region traced on a fine ybox grid, with boundaries refined by
// bisection and isolated roots polished, both at residual tolerance
// 1e-12, so near-feasible samples do not fake divergence. kappa_hat is
// the largest ratio seen; `violation` fires when the pairs nearest the
// base point produce a ratio above 1e4, the signature of an unbounded
// modulus. The neighborhood's u is taken from the argument; eps and
// delta come from `nbhd`. All sampling is drawn from one generator
// seeded with `seed`, so equal seeds give identical probes.
struct RsProbe {
  double kappa_hat = 0.0;
  bool violation = false;
  int pairs = 0;          // ratios collected
  double near_max = 0.0;  // largest ratio over the nearest quartile
  double far_max = 0.0;   // largest ratio over the farthest quartile
};

RsProbe rs_numeric_probe(const ParametricProgram& prog, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                         const DirectionalNbhd& nbhd, unsigned seed = 42);

// Hypothesis audit for one directional solution y: feasibility of
// jac P (sigma u, v) in the regular tangent cone for both signs, the
// matching interiority condition 0 in int{sigma jac_x P u + jac_y P R^m
// + regular tangent cone}, and the Clarke multiplier set at (x, y).
struct PointAudit {
  Eigen::VectorXd y;
  bool feasible_plus = false;
  bool feasible_minus = false;
  bool regular_plus = false;
  bool regular_minus = false;
  bool multipliers_nonempty = false;
  bool multipliers_bounded = false;
  bool multipliers_singleton = false;
  double lo = 0.0;  // range of grad_x L . u over the multiplier set
  double hi = 0.0;
  bool verified = false;  // everything above except boundedness
  std::string failed;     // first failed hypothesis, empty when verified
};

// Two-sided bounds on the Dini derivatives from the directional solution
// set: L is the smallest multiplier minimum of grad_x L . u across the
// points, U the smallest multiplier maximum. When every hypothesis
// verifies, L <= V'-(x;u) <= V'+(x;u) <= U. Either side may be infinite
// when a multiplier set is unbounded; a point with an empty multiplier
// set contributes nothing and marks the bounds unverified. Because both
// L and U are minima over the points, running them on a sampled subset
// of the true directional solution set can only raise them, so U stays a
// valid upper bound; L is trusted only when the sample is believed
// complete, which is why the audit travels with the numbers.
struct SandwichBounds {
  double L = 0.0;
  double U = 0.0;
  std::vector<PointAudit> audit;
  bool hypotheses_verified = false;
  std::string failed;  // first failure across the audit
};

// Throws std::invalid_argument when dirsol is empty.
SandwichBounds sandwich_bounds(const ParametricProgram& prog, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& u,
                               const std::vector<Eigen::VectorXd>& dirsol);

// The same extremization over the full solution set, the classical bound
// that ignores the direction when picking solutions. Uses the limiting
// multiplier set when C has classic NLP structure (its pieces encode the
// usual sign and complementarity conditions), the Clarke set otherwise.
// Points whose multiplier set is empty are skipped and counted; `lower`
// may be -infinity when a multiplier set is unbounded below.
struct ClassicBounds {
  double lower = 0.0;
  double upper = 0.0;
  MultiplierKind kind = MultiplierKind::Clarke;
  int used = 0;
  int skipped = 0;
};

// Throws std::invalid_argument when fullsol is empty.
ClassicBounds classic_bounds(const ParametricProgram& prog, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& u,
                             const std::vector<Eigen::VectorXd>& fullsol);

// Final verdict. Differentiable needs a nonempty directional solution
// sample, directional stability established at each of its points,
// restricted inf-compactness evidence (no ybox pin), every sandwich
// hypothesis verified, and a singleton multiplier set at every point;
// the derivative is then V' = L = U, cross-checked against the numeric
// Dini midpoint at tolerance max(1e-3, dini uncertainty). Verified
// hypotheses with a non-singleton multiplier set give Sandwich; anything
// else is Inconclusive with the first failed hypothesis named.
enum class DiffKind { Differentiable, Sandwich, Inconclusive };

struct DiffVerdict {
  DiffKind kind = DiffKind::Inconclusive;
  double value = 0.0;  // V'(x;u), meaningful when Differentiable
  double L = 0.0;
  double U = 0.0;
  bool crosscheck_ok = false;  // Differentiable only; false when dini failed
  std::string reason;          // failed hypothesis when Inconclusive
};

DiffVerdict differentiability_verdict(const SandwichBounds& bounds,
                                      const DiniEstimate& dini, bool dini_ok,
                                      int dirsol_count, bool rs_verified,
                                      bool infcompact_ok);

const char* diff_kind_name(DiffKind k);

// Per-solution diagnostics assembled for the report: the Clarke
// multiplier set, both constraint-qualification verdicts, and the
// directional stability verdict at that point.
struct PointDiagnostics {
  Eigen::VectorXd y;
  MultiplierSet clarke;
  CqVerdict robinson;
  CqVerdict abnormal;
  RsVerdict rs;
};

struct AnalyzeOptions {
  double probe_eps = 0.3;
  double probe_delta = 0.5;
  bool run_probe = true;  // the stability stress test is the slowest stage
  unsigned seed = 42;     // drives every stochastic sample in the analysis
};

// Everything one directional query produces. Stages that could not run
// (infeasible base, empty directional solution set) leave their flag
// false and their reason in `notes`; no field is silently absent.
struct SensitivityReport {
  Eigen::VectorXd x;
  Eigen::VectorXd u;

  bool base_solved = false;
  double value = 0.0;  // V(x)
  ValueSolveResult base;

  DirectionalSolutionSet dirsol;
  bool dini_ok = false;
  DiniEstimate dini;
  std::vector<PointDiagnostics> solutions;  // per directional solution
  bool probe_ran = false;
  RsProbe probe;  // at the first directional solution point
  bool bounds_ok = false;
  SandwichBounds bounds;
  bool classic_ok = false;
  ClassicBounds classic;
  DiffVerdict verdict;

  bool omega_boundary_touched = false;  // a minimizer pinned at the ybox edge
  std::vector<std::string> notes;       // assumption audit trail
};

SensitivityReport analyze(const ParametricProgram& prog, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u, const AnalyzeOptions& opts = {});

}  // namespace dirval

#endif  // DIRVAL_DIRECTIONAL_HPP
