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

#ifndef DIRVAL_REPORT_HPP
#define DIRVAL_REPORT_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "dirval/conic.hpp"
#include "dirval/cones.hpp"
#include "dirval/directional.hpp"
#include "dirval/multipliers.hpp"
#include "dirval/problem.hpp"

namespace dirval {

// Identifies the run that produced a report. Everything stochastic in
// the analysis flows from `seed`, so two documents with equal problem,
// flags, and seed are byte-identical.
struct Provenance {
  std::string tool = "dirval";
  std::string version = "0.1.0";
  std::string problem;  // problem-file name
  std::string source;   // path the file was loaded from
  unsigned seed = 42;
  Tolerances tol;
};

Provenance make_provenance(const ProblemFile& pf, unsigned seed);

// One emitted report. `machine` is a single key/value tree (JSON, UTF-8,
// keys sorted, non-finite numbers spelled "inf"/"-inf"/"nan") that parses
// back to the same tree. `table` renders the same numbers for reading.
// Standalone stage documents reuse the fragment shapes of the full
// analysis document, so the `solve` subtree of a value report has exactly
// the schema of the `base` subtree of an analyze report.
struct ReportDocument {
  std::string kind;  // the stage that produced the document
  std::string machine;
  std::string table;
};

ReportDocument report_analyze(const Provenance& prov, const SensitivityReport& rep);

ReportDocument report_value(const Provenance& prov, const Eigen::VectorXd& x,
                            const ValueSolveResult& result);

ReportDocument report_multipliers(const Provenance& prov, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                                  const MultiplierSet& clarke,
                                  const MultiplierSet& limiting,
                                  const ExtremizeResult& range);

ReportDocument report_cq(const Provenance& prov, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const CqVerdict& robinson,
                         const CqVerdict& abnormal);

ReportDocument report_rs(const Provenance& prov, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                         const RsVerdict& verdict, const RsProbe& probe);

// Everything the cones stage reports at one feasible point: the
// constraint image snapped onto C, both tangent-side cones, both
// normal-side cones, the tangent stratification, and the directional
// normal cone along every sampled image direction.
struct ConeSurvey {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd z;  // P(x, y) snapped onto C
  ConeUnion tangent;
  PolyCone regular_tangent;
  PolyCone clarke_normal;
  ConeUnion limiting_normal;
  std::vector<TangentCell> cells;
  ImageDirDeriv image;
  std::vector<ConeUnion> dir_normals;  // per image generator
};

// Throws std::invalid_argument when y is infeasible at x.
ConeSurvey survey_cones(const ParametricProgram& prog, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& u);

ReportDocument report_cones(const Provenance& prov, const ConeSurvey& survey);

// The conic linear pair obtained by linearizing the program at (x, y) in
// direction u: minimize <-grad_y f, v> - <grad_x f, u> over v with
// -jac_y P v - jac_x P u in the regular tangent cone at P(x, y). The
// derived dual runs over the multiplier side, so the gap and the dual
// face feed the sandwich machinery.
struct DualitySurvey {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd u;
  ConicPair pair;
  PairSolution solution;
  InteriorResult slater;        // interiority of the pair's conic system
  bool dual_face_computed = false;
  BoundednessResult dual_face;  // boundedness of the dual optimal face
};

// Throws std::invalid_argument when y is infeasible at x.
DualitySurvey survey_duality(const ParametricProgram& prog, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, const Eigen::VectorXd& u);

ReportDocument report_duality(const Provenance& prov, const DualitySurvey& survey);

// Validation outcome for a problem file. Carries the parsed summary when
// valid and the collected diagnostics when not; both renderings keep the
// same keys either way.
ReportDocument report_validate(const std::string& source, bool valid,
                               const ProblemFile& pf,
                               const std::vector<Diagnostic>& diagnostics);

}  // namespace dirval

#endif  // DIRVAL_REPORT_HPP
