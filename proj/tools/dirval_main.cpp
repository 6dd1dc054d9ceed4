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

// Command line front end. Exit codes follow one contract across the
// subcommands: 0 when the requested verdict was produced with nothing
// flagged, 2 when the stage ran but a hypothesis or check failed
// (inconclusive analysis, infeasible parameter, failing CQ, duality gap),
// 1 on hard errors (unreadable or invalid files, bad flags, infeasible
// points handed to point-wise stages). validate exits 0 for a valid file
// and 1 with diagnostics otherwise.

#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dirval/directional.hpp"
#include "dirval/problem.hpp"
#include "dirval/report.hpp"

namespace {

using namespace dirval;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

struct Flags {
  std::string file;
  std::vector<double> dir;
  std::vector<double> at_x;
  std::vector<double> at_y;
  unsigned seed = 42;
  std::string format = "table";
  std::string out;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("file", f.file, "problem file")->required();
  sub->add_option("--seed", f.seed, "seed for every stochastic sample");
  sub->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"table", "machine"}));
  sub->add_option("--out", f.out, "write the report to this path instead of stdout");
}

void add_point_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--dir", f.dir, "direction u, comma separated")->delimiter(',');
  sub->add_option("--at-x", f.at_x, "parameter point, comma separated")->delimiter(',');
  sub->add_option("--at-y", f.at_y, "decision point, comma separated")->delimiter(',');
}

int emit(const ReportDocument& doc, const Flags& f) {
  const std::string& text = f.format == "machine" ? doc.machine : doc.table;
  if (f.out.empty()) {
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  std::ofstream os(f.out, std::ios::binary);
  if (!os) {
    std::fprintf(stderr, "dirval: cannot write %s\n", f.out.c_str());
    return 1;
  }
  os << text;
  return 0;
}

Eigen::VectorXd resolve_x(const Flags& f, const ProblemFile& pf) {
  if (f.at_x.empty()) return pf.xbar;
  if (static_cast<int>(f.at_x.size()) != pf.n)
    throw std::invalid_argument("--at-x needs " + std::to_string(pf.n) +
                                " coordinate(s)");
  return to_eigen(f.at_x);
}

Eigen::VectorXd resolve_u(const Flags& f, const ProblemFile& pf) {
  if (f.dir.empty()) return pf.direction;
  if (static_cast<int>(f.dir.size()) != pf.n)
    throw std::invalid_argument("--dir needs " + std::to_string(pf.n) +
                                " coordinate(s)");
  return to_eigen(f.dir);
}

// Point-wise stages need a y; without --at-y the best minimizer at x is
// used, so the flag is only required off the solution set.
Eigen::VectorXd resolve_y(const Flags& f, const ProblemFile& pf,
                          const ParametricProgram& prog, const Eigen::VectorXd& x) {
  if (!f.at_y.empty()) {
    if (static_cast<int>(f.at_y.size()) != pf.m)
      throw std::invalid_argument("--at-y needs " + std::to_string(pf.m) +
                                  " coordinate(s)");
    return to_eigen(f.at_y);
  }
  const ValueSolveResult r = solve_value(prog, x);
  if (r.status != SolveStatus::Solved)
    throw std::runtime_error("no feasible point at x, so --at-y is required");
  return r.points.front().y;
}

int run_analyze(const Flags& f) {
  const ProblemFile pf = load_problem(f.file);
  const ParametricProgram prog = instantiate(pf);
  AnalyzeOptions opts;
  opts.seed = f.seed;
  const SensitivityReport rep = analyze(prog, resolve_x(f, pf), resolve_u(f, pf), opts);
  if (int rc = emit(report_analyze(make_provenance(pf, f.seed), rep), f)) return rc;
  if (rep.verdict.kind == DiffKind::Inconclusive) return 2;
  if (rep.verdict.kind == DiffKind::Differentiable && !rep.verdict.crosscheck_ok)
    return 2;
  return 0;
}

int run_value(const Flags& f) {
  const ProblemFile pf = load_problem(f.file);
  const ParametricProgram prog = instantiate(pf);
  const Eigen::VectorXd x = resolve_x(f, pf);
  const ValueSolveResult r = solve_value(prog, x);
  if (int rc = emit(report_value(make_provenance(pf, f.seed), x, r), f)) return rc;
  return r.status == SolveStatus::Solved ? 0 : 2;
}

int run_multipliers(const Flags& f) {
  const ProblemFile pf = load_problem(f.file);
  const ParametricProgram prog = instantiate(pf);
  const Eigen::VectorXd x = resolve_x(f, pf);
  const Eigen::VectorXd y = resolve_y(f, pf, prog, x);
  const Eigen::VectorXd u = resolve_u(f, pf);
  const MultiplierSet clarke = multiplier_set(prog, x, y, MultiplierKind::Clarke);
  const MultiplierSet limiting = multiplier_set(prog, x, y, MultiplierKind::Limiting);
  ExtremizeResult range;
  if (!clarke.empty) {
    range = extremize_xgrad(clarke, u);
  } else {
    range.min_value = std::numeric_limits<double>::infinity();
    range.max_value = -range.min_value;
  }
  if (int rc = emit(report_multipliers(make_provenance(pf, f.seed), x, y, u, clarke,
                                       limiting, range),
                    f))
    return rc;
  return clarke.empty ? 2 : 0;
}

int run_cq(const Flags& f) {
  const ProblemFile pf = load_problem(f.file);
  const ParametricProgram prog = instantiate(pf);
  const Eigen::VectorXd x = resolve_x(f, pf);
  const Eigen::VectorXd y = resolve_y(f, pf, prog, x);
  const CqVerdict robinson = robinson_cq(prog, x, y);
  const CqVerdict abnormal = nnamcq(prog, x, y);
  if (int rc = emit(report_cq(make_provenance(pf, f.seed), x, y, robinson, abnormal), f))
    return rc;
  return robinson.holds && abnormal.holds ? 0 : 2;
}

int run_rs(const Flags& f) {
  const ProblemFile pf = load_problem(f.file);
  const ParametricProgram prog = instantiate(pf);
  const Eigen::VectorXd x = resolve_x(f, pf);
  const Eigen::VectorXd y = resolve_y(f, pf, prog, x);
  const Eigen::VectorXd u = resolve_u(f, pf);
  const RsVerdict verdict = rs_sufficient(prog, x, y, u);
  const AnalyzeOptions defaults;
  const RsProbe probe = rs_numeric_probe(
      prog, x, y, u, DirectionalNbhd{u, defaults.probe_eps, defaults.probe_delta},
      f.seed);
  if (int rc = emit(report_rs(make_provenance(pf, f.seed), x, y, u, verdict, probe), f))
    return rc;
  return verdict.holds && !probe.violation ? 0 : 2;
}

int run_cones(const Flags& f) {
  const ProblemFile pf = load_problem(f.file);
  const ParametricProgram prog = instantiate(pf);
  const Eigen::VectorXd x = resolve_x(f, pf);
  const Eigen::VectorXd y = resolve_y(f, pf, prog, x);
  const ConeSurvey survey = survey_cones(prog, x, y, resolve_u(f, pf));
  return emit(report_cones(make_provenance(pf, f.seed), survey), f);
}

int run_duality(const Flags& f) {
  const ProblemFile pf = load_problem(f.file);
  const ParametricProgram prog = instantiate(pf);
  const Eigen::VectorXd x = resolve_x(f, pf);
  const Eigen::VectorXd y = resolve_y(f, pf, prog, x);
  const DualitySurvey survey = survey_duality(prog, x, y, resolve_u(f, pf));
  if (int rc = emit(report_duality(make_provenance(pf, f.seed), survey), f)) return rc;
  const bool clean = survey.solution.primal_status == LPStatus::Optimal &&
                     survey.solution.dual_status == LPStatus::Optimal &&
                     survey.solution.gap <= 1e-8;
  return clean ? 0 : 2;
}

int run_validate(const Flags& f) {
  try {
    const ProblemFile pf = load_problem(f.file);
    if (int rc = emit(report_validate(f.file, true, pf, {}), f)) return rc;
    return 0;
  } catch (const ProblemError& e) {
    if (int rc = emit(report_validate(f.file, false, ProblemFile{}, e.diagnostics), f))
      return rc;
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"directional sensitivity analysis of parametric set-constrained programs"};
  app.set_version_flag("--version", "dirval 0.1.0");
  app.require_subcommand(1);

  Flags f;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "full directional analysis of the value function");
  add_point_flags(analyze_cmd, f);
  add_common(analyze_cmd, f);

  CLI::App* value_cmd = app.add_subcommand("value", "solve the inner problem at x");
  add_point_flags(value_cmd, f);
  add_common(value_cmd, f);

  CLI::App* mult_cmd =
      app.add_subcommand("multipliers", "multiplier sets and their x-gradient range");
  add_point_flags(mult_cmd, f);
  add_common(mult_cmd, f);

  CLI::App* cq_cmd =
      app.add_subcommand("cq", "constraint qualifications at a point");
  add_point_flags(cq_cmd, f);
  add_common(cq_cmd, f);

  CLI::App* rs_cmd =
      app.add_subcommand("rs", "directional stability certificate and numeric probe");
  add_point_flags(rs_cmd, f);
  add_common(rs_cmd, f);

  CLI::App* cones_cmd =
      app.add_subcommand("cones", "tangent and normal cones at the constraint image");
  add_point_flags(cones_cmd, f);
  add_common(cones_cmd, f);

  CLI::App* duality_cmd =
      app.add_subcommand("duality", "linearized conic pair and its duality gap");
  add_point_flags(duality_cmd, f);
  add_common(duality_cmd, f);

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a problem file");
  add_common(validate_cmd, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analyze_cmd->parsed()) return run_analyze(f);
    if (value_cmd->parsed()) return run_value(f);
    if (mult_cmd->parsed()) return run_multipliers(f);
    if (cq_cmd->parsed()) return run_cq(f);
    if (rs_cmd->parsed()) return run_rs(f);
    if (cones_cmd->parsed()) return run_cones(f);
    if (duality_cmd->parsed()) return run_duality(f);
    if (validate_cmd->parsed()) return run_validate(f);
  } catch (const ProblemError& e) {
    for (const auto& d : e.diagnostics) {
      if (d.line > 0)
        std::fprintf(stderr, "dirval: %s (line %d): %s\n", d.where.c_str(), d.line,
                     d.message.c_str());
      else
        std::fprintf(stderr, "dirval: %s: %s\n", d.where.c_str(), d.message.c_str());
    }
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dirval: %s\n", e.what());
    return 1;
  }
  return 1;
}
