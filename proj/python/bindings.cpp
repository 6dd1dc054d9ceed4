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

// Python face of the library. Every analysis entry point returns the
// machine report as a JSON string, so the schema is defined in exactly
// one place and the python wrapper only parses it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dirval/directional.hpp"
#include "dirval/expr.hpp"
#include "dirval/problem.hpp"
#include "dirval/report.hpp"

namespace py = pybind11;

namespace {

using namespace dirval;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

struct Loaded {
  ProblemFile pf;
  ParametricProgram prog;
};

Loaded load(const std::string& path) {
  ProblemFile pf = load_problem(path);
  ParametricProgram prog = instantiate(pf);
  return {std::move(pf), std::move(prog)};
}

Eigen::VectorXd pick(const std::vector<double>& given, const Eigen::VectorXd& fallback,
                     int want, const char* flag) {
  if (given.empty()) return fallback;
  if (static_cast<int>(given.size()) != want)
    throw std::invalid_argument(std::string(flag) + " needs " +
                                std::to_string(want) + " coordinate(s)");
  return to_eigen(given);
}

Eigen::VectorXd pick_y(const Loaded& l, const std::vector<double>& given,
                       const Eigen::VectorXd& x) {
  if (!given.empty()) return pick(given, {}, l.pf.m, "y");
  const ValueSolveResult r = solve_value(l.prog, x);
  if (r.status != SolveStatus::Solved)
    throw std::runtime_error("no feasible point at x, pass y explicitly");
  return r.points.front().y;
}

std::string analyze_report_py(const std::string& path, const std::vector<double>& x,
                              const std::vector<double>& direction, unsigned seed) {
  const Loaded l = load(path);
  AnalyzeOptions opts;
  opts.seed = seed;
  const SensitivityReport rep =
      analyze(l.prog, pick(x, l.pf.xbar, l.pf.n, "x"),
              pick(direction, l.pf.direction, l.pf.n, "direction"), opts);
  return report_analyze(make_provenance(l.pf, seed), rep).machine;
}

std::string value_report_py(const std::string& path, const std::vector<double>& x,
                            unsigned seed) {
  const Loaded l = load(path);
  const Eigen::VectorXd at = pick(x, l.pf.xbar, l.pf.n, "x");
  return report_value(make_provenance(l.pf, seed), at, solve_value(l.prog, at))
      .machine;
}

std::string multipliers_report_py(const std::string& path, const std::vector<double>& x,
                                  const std::vector<double>& y,
                                  const std::vector<double>& direction, unsigned seed) {
  const Loaded l = load(path);
  const Eigen::VectorXd at_x = pick(x, l.pf.xbar, l.pf.n, "x");
  const Eigen::VectorXd at_y = pick_y(l, y, at_x);
  const Eigen::VectorXd u = pick(direction, l.pf.direction, l.pf.n, "direction");
  const MultiplierSet clarke = multiplier_set(l.prog, at_x, at_y, MultiplierKind::Clarke);
  const MultiplierSet limiting =
      multiplier_set(l.prog, at_x, at_y, MultiplierKind::Limiting);
  ExtremizeResult range;
  if (!clarke.empty) {
    range = extremize_xgrad(clarke, u);
  } else {
    range.min_value = std::numeric_limits<double>::infinity();
    range.max_value = -range.min_value;
  }
  return report_multipliers(make_provenance(l.pf, seed), at_x, at_y, u, clarke,
                            limiting, range)
      .machine;
}

std::string cq_report_py(const std::string& path, const std::vector<double>& x,
                         const std::vector<double>& y, unsigned seed) {
  const Loaded l = load(path);
  const Eigen::VectorXd at_x = pick(x, l.pf.xbar, l.pf.n, "x");
  const Eigen::VectorXd at_y = pick_y(l, y, at_x);
  return report_cq(make_provenance(l.pf, seed), at_x, at_y,
                   robinson_cq(l.prog, at_x, at_y), nnamcq(l.prog, at_x, at_y))
      .machine;
}

std::string rs_report_py(const std::string& path, const std::vector<double>& x,
                         const std::vector<double>& y,
                         const std::vector<double>& direction, unsigned seed) {
  const Loaded l = load(path);
  const Eigen::VectorXd at_x = pick(x, l.pf.xbar, l.pf.n, "x");
  const Eigen::VectorXd at_y = pick_y(l, y, at_x);
  const Eigen::VectorXd u = pick(direction, l.pf.direction, l.pf.n, "direction");
  const RsVerdict verdict = rs_sufficient(l.prog, at_x, at_y, u);
  const AnalyzeOptions defaults;
  const RsProbe probe = rs_numeric_probe(
      l.prog, at_x, at_y, u, DirectionalNbhd{u, defaults.probe_eps, defaults.probe_delta},
      seed);
  return report_rs(make_provenance(l.pf, seed), at_x, at_y, u, verdict, probe).machine;
}

std::string validate_report_py(const std::string& path) {
  try {
    const ProblemFile pf = load_problem(path);
    return report_validate(path, true, pf, {}).machine;
  } catch (const ProblemError& e) {
    return report_validate(path, false, ProblemFile{}, e.diagnostics).machine;
  }
}

double evaluate_expression_py(const std::string& text, const std::vector<double>& x,
                              const std::vector<double>& y) {
  const ExprPtr e = parse_expression(text, static_cast<int>(x.size()),
                                     static_cast<int>(y.size()));
  return evaluate(e, to_eigen(x), to_eigen(y));
}

std::string print_expression_py(const std::string& text, int n, int m) {
  return print_expression(parse_expression(text, n, m));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Directional sensitivity analysis of parametric set-constrained "
      "programs. Report functions return the machine report (JSON text), "
      "identical to `dirval --format machine`.";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ProblemError>(m, "ProblemFileError");

  m.def("analyze_report", &analyze_report_py, py::arg("path"),
        py::arg("x") = std::vector<double>{},
        py::arg("direction") = std::vector<double>{}, py::arg("seed") = 42u,
        "Full directional analysis; empty x or direction fall back to the file.");
  m.def("value_report", &value_report_py, py::arg("path"),
        py::arg("x") = std::vector<double>{}, py::arg("seed") = 42u,
        "Solve the inner problem at x (default: the file's base point).");
  m.def("multipliers_report", &multipliers_report_py, py::arg("path"),
        py::arg("x") = std::vector<double>{}, py::arg("y") = std::vector<double>{},
        py::arg("direction") = std::vector<double>{}, py::arg("seed") = 42u,
        "Clarke and limiting multiplier sets at (x, y); empty y means the "
        "best minimizer at x.");
  m.def("cq_report", &cq_report_py, py::arg("path"),
        py::arg("x") = std::vector<double>{}, py::arg("y") = std::vector<double>{},
        py::arg("seed") = 42u, "Constraint qualifications at (x, y).");
  m.def("rs_report", &rs_report_py, py::arg("path"),
        py::arg("x") = std::vector<double>{}, py::arg("y") = std::vector<double>{},
        py::arg("direction") = std::vector<double>{}, py::arg("seed") = 42u,
        "Directional stability certificate and numeric probe at (x, y).");
  m.def("validate_report", &validate_report_py, py::arg("path"),
        "Validate a problem file; the report carries the diagnostics.");
  m.def("evaluate_expression", &evaluate_expression_py, py::arg("text"), py::arg("x"),
        py::arg("y"), "Evaluate an expression over parameters x and decisions y.");
  m.def("print_expression", &print_expression_py, py::arg("text"), py::arg("n"),
        py::arg("m"), "Parse and print the canonical form of an expression.");
}
