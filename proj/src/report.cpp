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

#include "dirval/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace dirval {

namespace {

using nlohmann::json;

// JSON has no spelling for non-finite numbers (the serializer would emit
// null), so they travel as the strings "inf", "-inf", "nan".
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

json mat(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) rows.push_back(vec(M.row(i).transpose()));
  return rows;
}

json vecs(const std::vector<Eigen::VectorXd>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec(v));
  return a;
}

const char* multiplier_kind_name(MultiplierKind k) {
  return k == MultiplierKind::Clarke ? "clarke" : "limiting";
}

// ---------------------------------------------------------------------------
// Machine fragments. Subcommand documents are assembled from the same
// builders as the full analysis document, which is what keeps their
// schemas identical.
// ---------------------------------------------------------------------------

json cone_fragment(const PolyCone& k) {
  json j;
  j["dim"] = k.dim;
  j["generators"] = vecs(k.generators);
  j["lineality"] = vecs(k.lineality);
  j["ineq"] = vecs(k.ineq);
  j["eq"] = vecs(k.eq);
  return j;
}

json union_fragment(const ConeUnion& u) {
  json a = json::array();
  for (const auto& k : u) a.push_back(cone_fragment(k));
  return a;
}

json point_fragment(const SolutionPoint& p) {
  json j;
  j["y"] = vec(p.y);
  j["value"] = num(p.value);
  j["feas_residual"] = num(p.feas_residual);
  j["stationarity_residual"] = num(p.stationarity_residual);
  return j;
}

json solve_fragment(const ValueSolveResult& r) {
  json j;
  j["status"] = r.status == SolveStatus::Solved ? "solved" : "infeasible";
  j["value"] = num(r.value);
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back(point_fragment(p));
  j["points"] = pts;
  j["cluster_count"] = r.cluster_count;
  j["max_cluster_diameter"] = num(r.max_cluster_diameter);
  j["touches_ybox"] = r.touches_ybox;
  return j;
}

json multiplier_fragment(const MultiplierSet& ms) {
  json j;
  j["kind"] = multiplier_kind_name(ms.kind);
  j["empty"] = ms.empty;
  j["bounded"] = ms.bounded;
  j["singleton"] = ms.singleton;
  j["point"] = vec(ms.singleton ? ms.point : Eigen::VectorXd());
  json pieces = json::array();
  for (const auto& p : ms.pieces) {
    json pj;
    pj["empty"] = p.empty;
    pj["bounded"] = p.bounded;
    pj["witness"] = vec(p.witness);
    pj["coord_min"] = vec(p.coord_min);
    pj["coord_max"] = vec(p.coord_max);
    pieces.push_back(pj);
  }
  j["pieces"] = pieces;
  return j;
}

json cq_fragment(const CqVerdict& v, bool with_interior) {
  json j;
  j["holds"] = v.holds;
  j["witness"] = vec(v.witness);
  if (with_interior) j["interior_holds"] = v.interior_holds;
  return j;
}

json rs_fragment(const RsVerdict& v) {
  json j;
  j["holds"] = v.holds;
  j["path"] = rs_path_name(v.via);
  j["detail"] = v.detail;
  return j;
}

json probe_fragment(const RsProbe& p) {
  json j;
  j["kappa_hat"] = num(p.kappa_hat);
  j["violation"] = p.violation;
  j["pairs"] = p.pairs;
  j["near_max"] = num(p.near_max);
  j["far_max"] = num(p.far_max);
  return j;
}

json continuity_fragment(const ContinuityProbe& c) {
  json j;
  j["value"] = num(c.value);
  j["liminf"] = num(c.liminf);
  j["limsup"] = num(c.limsup);
  j["lsc"] = c.lsc;
  j["usc"] = c.usc;
  j["continuous"] = c.continuous;
  j["infeasible_samples"] = c.infeasible_samples;
  return j;
}

json dirsol_fragment(const DirectionalSolutionSet& s) {
  json j;
  json pts = json::array();
  for (const auto& p : s.points) pts.push_back(point_fragment(p));
  j["points"] = pts;
  j["continuity"] = continuity_fragment(s.continuity);
  j["continuity_ok"] = s.continuity_ok;
  j["candidates"] = s.candidates;
  j["dropped"] = s.dropped;
  return j;
}

json dini_fragment(const DiniEstimate& d) {
  json j;
  j["lower"] = num(d.lower);
  j["upper"] = num(d.upper);
  j["uncertainty"] = num(d.uncertainty);
  j["value_at_base"] = num(d.value_at_base);
  json rows = json::array();
  for (const auto& s : d.table) {
    json r;
    r["scale"] = s.scale;
    r["t"] = num(s.t);
    r["dir"] = vec(s.dir);
    r["value"] = num(s.value);
    r["quotient"] = num(s.quotient);
    rows.push_back(r);
  }
  j["samples"] = rows;
  return j;
}

json audit_fragment(const PointAudit& a) {
  json j;
  j["y"] = vec(a.y);
  j["feasible_plus"] = a.feasible_plus;
  j["feasible_minus"] = a.feasible_minus;
  j["regular_plus"] = a.regular_plus;
  j["regular_minus"] = a.regular_minus;
  j["multipliers_nonempty"] = a.multipliers_nonempty;
  j["multipliers_bounded"] = a.multipliers_bounded;
  j["multipliers_singleton"] = a.multipliers_singleton;
  j["lo"] = num(a.lo);
  j["hi"] = num(a.hi);
  j["verified"] = a.verified;
  j["failed"] = a.failed;
  return j;
}

json bounds_fragment(const SandwichBounds& b) {
  json j;
  j["L"] = num(b.L);
  j["U"] = num(b.U);
  json audits = json::array();
  for (const auto& a : b.audit) audits.push_back(audit_fragment(a));
  j["audit"] = audits;
  j["hypotheses_verified"] = b.hypotheses_verified;
  j["failed"] = b.failed;
  return j;
}

json classic_fragment(const ClassicBounds& c) {
  json j;
  j["lower"] = num(c.lower);
  j["upper"] = num(c.upper);
  j["kind"] = multiplier_kind_name(c.kind);
  j["used"] = c.used;
  j["skipped"] = c.skipped;
  return j;
}

json verdict_fragment(const DiffVerdict& v) {
  json j;
  j["kind"] = diff_kind_name(v.kind);
  j["value"] = num(v.value);
  j["L"] = num(v.L);
  j["U"] = num(v.U);
  j["crosscheck_ok"] = v.crosscheck_ok;
  j["reason"] = v.reason;
  return j;
}

json image_fragment(const ImageDirDeriv& im) {
  json j;
  j["kind"] = im.kind == ImageKind::ExactRay ? "exact_ray" : "sampled_cone";
  j["generators"] = vecs(im.generators);
  return j;
}

json diagnostics_fragment(const PointDiagnostics& d) {
  json j;
  j["y"] = vec(d.y);
  j["clarke"] = multiplier_fragment(d.clarke);
  j["robinson"] = cq_fragment(d.robinson, true);
  j["abnormal"] = cq_fragment(d.abnormal, false);
  j["rs"] = rs_fragment(d.rs);
  return j;
}

json provenance_fragment(const Provenance& p) {
  json j;
  j["tool"] = p.tool;
  j["version"] = p.version;
  j["problem"] = p.problem;
  j["source"] = p.source;
  j["seed"] = p.seed;
  json t;
  t["feas"] = num(p.tol.feas);
  t["opt_cluster"] = num(p.tol.opt_cluster);
  t["polish"] = num(p.tol.polish);
  j["tolerances"] = t;
  return j;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s + "]";
}

const char* yn(bool b) { return b ? "yes" : "no"; }

class Table {
 public:
  explicit Table(const std::string& heading) { lines_.push_back(heading); }

  void section(const std::string& name) {
    lines_.push_back("");
    lines_.push_back(name);
  }

  void row(const std::string& label, const std::string& value) {
    std::string line = "  " + label;
    if (line.size() < 24)
      line.resize(24, ' ');
    else
      line += "  ";
    line += value;
    lines_.push_back(line);
  }

  void item(const std::string& text) { lines_.push_back("  " + text); }

  std::string str() const {
    std::string out;
    for (const auto& l : lines_) {
      out += l;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

std::string heading(const Provenance& prov, const std::string& kind) {
  std::string h = "dirval " + kind + ": " + prov.problem;
  if (!prov.source.empty()) h += " (" + prov.source + ")";
  return h;
}

void provenance_rows(Table& t, const Provenance& prov) {
  t.row("seed", std::to_string(prov.seed));
  t.row("tolerances", "feas " + fmt(prov.tol.feas) + ", cluster " +
                          fmt(prov.tol.opt_cluster) + ", polish " +
                          fmt(prov.tol.polish));
}

// Long minimizer lists (a whole interval of optima, say) are elided in
// the table; the machine document always carries every point.
constexpr size_t kTablePoints = 8;

void solve_rows(Table& t, const ValueSolveResult& r) {
  t.row("status", r.status == SolveStatus::Solved ? "solved" : "infeasible");
  t.row("value", fmt(r.value));
  t.row("clusters", std::to_string(r.cluster_count) + " (max diameter " +
                        fmt(r.max_cluster_diameter) + ")");
  t.row("touches ybox", yn(r.touches_ybox));
  for (size_t i = 0; i < r.points.size() && i < kTablePoints; ++i) {
    const SolutionPoint& p = r.points[i];
    t.item("  y = " + fmt(p.y) + "  f = " + fmt(p.value) + "  feas " +
           fmt(p.feas_residual) + "  stat " + fmt(p.stationarity_residual));
  }
  if (r.points.size() > kTablePoints)
    t.item("  and " + std::to_string(r.points.size() - kTablePoints) +
           " more minimizer(s)");
}

std::string multiplier_summary(const MultiplierSet& ms) {
  if (ms.empty) return "empty";
  if (ms.singleton) return "singleton " + fmt(ms.point);
  std::string s = ms.bounded ? "bounded" : "unbounded";
  s += ", " + std::to_string(ms.pieces.size()) + " piece(s)";
  for (const auto& p : ms.pieces)
    if (!p.empty) {
      s += ", witness " + fmt(p.witness);
      break;
    }
  return s;
}

std::string cq_summary(const CqVerdict& v, bool with_interior) {
  std::string s = v.holds ? "holds" : "fails";
  if (with_interior)
    s += std::string(", interior battery ") + (v.interior_holds ? "agrees" : "disagrees");
  if (!v.holds && v.witness.size() > 0) s += ", abnormal multiplier " + fmt(v.witness);
  return s;
}

std::string rs_summary(const RsVerdict& v) {
  if (v.holds) return std::string("holds via ") + rs_path_name(v.via);
  std::string s = "unknown";
  if (!v.detail.empty()) s += " (" + v.detail + ")";
  return s;
}

std::string cone_summary(const PolyCone& k) {
  if (k.is_zero_cone()) return "{0}";
  if (k.is_full_space()) return "full space";
  std::string s = std::to_string(k.generators.size()) + " generator(s)";
  if (!k.lineality.empty())
    s += ", lineality dim " + std::to_string(k.lineality.size());
  for (const auto& g : k.generators) s += " " + fmt(g);
  for (const auto& l : k.lineality) s += " span" + fmt(l);
  return s;
}

std::string union_summary(const ConeUnion& u) {
  if (u.empty()) return "empty";
  std::string s = std::to_string(u.size()) + " piece(s): ";
  for (size_t i = 0; i < u.size(); ++i) {
    if (i) s += " | ";
    s += cone_summary(u[i]);
  }
  return s;
}

}  // namespace

Provenance make_provenance(const ProblemFile& pf, unsigned seed) {
  Provenance p;
  p.problem = pf.name;
  p.source = pf.source_path;
  p.seed = seed;
  p.tol = pf.tol;
  return p;
}

ReportDocument report_analyze(const Provenance& prov, const SensitivityReport& rep) {
  json doc;
  doc["report"] = "analyze";
  doc["provenance"] = provenance_fragment(prov);
  doc["x"] = vec(rep.x);
  doc["direction"] = vec(rep.u);
  doc["base_solved"] = rep.base_solved;
  doc["value"] = num(rep.value);
  doc["base"] = solve_fragment(rep.base);
  doc["dirsol"] = dirsol_fragment(rep.dirsol);
  doc["dini_computed"] = rep.dini_ok;
  doc["dini"] = dini_fragment(rep.dini);
  json sols = json::array();
  for (const auto& s : rep.solutions) sols.push_back(diagnostics_fragment(s));
  doc["solutions"] = sols;
  doc["probe_computed"] = rep.probe_ran;
  doc["probe"] = probe_fragment(rep.probe);
  doc["bounds_computed"] = rep.bounds_ok;
  doc["bounds"] = bounds_fragment(rep.bounds);
  doc["classic_computed"] = rep.classic_ok;
  doc["classic"] = classic_fragment(rep.classic);
  doc["verdict"] = verdict_fragment(rep.verdict);
  doc["omega_boundary_touched"] = rep.omega_boundary_touched;
  doc["notes"] = rep.notes;

  Table t(heading(prov, "analyze"));
  t.section("problem");
  t.row("x", fmt(rep.x));
  t.row("direction", fmt(rep.u));
  provenance_rows(t, prov);

  t.section("value function");
  solve_rows(t, rep.base);

  t.section("directional solutions");
  const ContinuityProbe& c = rep.dirsol.continuity;
  t.row("continuity", std::string(c.continuous ? "continuous" : "discontinuous") +
                          " (lsc " + yn(c.lsc) + ", usc " + yn(c.usc) + ")");
  t.row("kept", std::to_string(rep.dirsol.points.size()) + " of " +
                    std::to_string(rep.dirsol.candidates) + " candidate(s)");
  for (const auto& p : rep.dirsol.points)
    t.item("  y = " + fmt(p.y) + "  f = " + fmt(p.value));

  t.section("dini derivative");
  if (rep.dini_ok) {
    t.row("lower", fmt(rep.dini.lower));
    t.row("upper", fmt(rep.dini.upper));
    t.row("uncertainty", fmt(rep.dini.uncertainty));
    t.row("samples", std::to_string(rep.dini.table.size()));
  } else {
    t.row("computed", "no");
  }

  t.section("solution diagnostics");
  for (const auto& s : rep.solutions) {
    t.item("y = " + fmt(s.y));
    t.row("  clarke set", multiplier_summary(s.clarke));
    t.row("  robinson cq", cq_summary(s.robinson, true));
    t.row("  nnamcq", cq_summary(s.abnormal, false));
    t.row("  stability", rs_summary(s.rs));
  }

  t.section("stability probe");
  if (rep.probe_ran) {
    t.row("kappa_hat", fmt(rep.probe.kappa_hat));
    t.row("pairs", std::to_string(rep.probe.pairs));
    t.row("near max", fmt(rep.probe.near_max));
    t.row("violation", yn(rep.probe.violation));
  } else {
    t.row("computed", "no");
  }

  t.section("derivative bounds");
  if (rep.bounds_ok) {
    t.row("sandwich L", fmt(rep.bounds.L));
    t.row("sandwich U", fmt(rep.bounds.U));
    t.row("hypotheses", rep.bounds.hypotheses_verified
                            ? "verified"
                            : "failed: " + rep.bounds.failed);
  } else {
    t.row("sandwich", "not computed");
  }
  if (rep.classic_ok) {
    t.row("classic lower", fmt(rep.classic.lower));
    t.row("classic upper", fmt(rep.classic.upper));
    t.row("classic kind", multiplier_kind_name(rep.classic.kind));
  }

  t.section("verdict");
  t.row("kind", diff_kind_name(rep.verdict.kind));
  if (rep.verdict.kind == DiffKind::Differentiable) {
    t.row("V'(x; u)", fmt(rep.verdict.value));
    t.row("cross-check", rep.verdict.crosscheck_ok ? "ok" : "FAILED");
  } else if (rep.verdict.kind == DiffKind::Sandwich) {
    t.row("L", fmt(rep.verdict.L));
    t.row("U", fmt(rep.verdict.U));
  } else {
    t.row("reason", rep.verdict.reason);
  }

  if (!rep.notes.empty()) {
    t.section("notes");
    for (const auto& n : rep.notes) t.item("- " + n);
  }

  return {"analyze", dump(doc), t.str()};
}

ReportDocument report_value(const Provenance& prov, const Eigen::VectorXd& x,
                            const ValueSolveResult& result) {
  json doc;
  doc["report"] = "value";
  doc["provenance"] = provenance_fragment(prov);
  doc["x"] = vec(x);
  doc["solve"] = solve_fragment(result);

  Table t(heading(prov, "value"));
  t.section("problem");
  t.row("x", fmt(x));
  provenance_rows(t, prov);
  t.section("value function");
  solve_rows(t, result);
  return {"value", dump(doc), t.str()};
}

ReportDocument report_multipliers(const Provenance& prov, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                                  const MultiplierSet& clarke,
                                  const MultiplierSet& limiting,
                                  const ExtremizeResult& range) {
  json doc;
  doc["report"] = "multipliers";
  doc["provenance"] = provenance_fragment(prov);
  doc["x"] = vec(x);
  doc["y"] = vec(y);
  doc["direction"] = vec(u);
  doc["clarke"] = multiplier_fragment(clarke);
  doc["limiting"] = multiplier_fragment(limiting);
  json rj;
  rj["min"] = num(range.min_value);
  rj["max"] = num(range.max_value);
  rj["argmin"] = vec(range.argmin);
  rj["argmax"] = vec(range.argmax);
  rj["min_ray"] = vec(range.min_ray);
  rj["max_ray"] = vec(range.max_ray);
  doc["xgrad_range"] = rj;
  doc["grad_x"] = vec(clarke.grad_x);
  doc["grad_y"] = vec(clarke.grad_y);
  doc["jac_x"] = mat(clarke.jac_x);
  doc["jac_y"] = mat(clarke.jac_y);

  Table t(heading(prov, "multipliers"));
  t.section("point");
  t.row("x", fmt(x));
  t.row("y", fmt(y));
  t.row("direction", fmt(u));
  provenance_rows(t, prov);
  t.section("multiplier sets");
  t.row("clarke", multiplier_summary(clarke));
  t.row("limiting", multiplier_summary(limiting));
  t.section("lagrangian x-gradient along u");
  t.row("min", fmt(range.min_value));
  t.row("max", fmt(range.max_value));
  return {"multipliers", dump(doc), t.str()};
}

ReportDocument report_cq(const Provenance& prov, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const CqVerdict& robinson,
                         const CqVerdict& abnormal) {
  json doc;
  doc["report"] = "cq";
  doc["provenance"] = provenance_fragment(prov);
  doc["x"] = vec(x);
  doc["y"] = vec(y);
  doc["robinson"] = cq_fragment(robinson, true);
  doc["abnormal"] = cq_fragment(abnormal, false);

  Table t(heading(prov, "cq"));
  t.section("point");
  t.row("x", fmt(x));
  t.row("y", fmt(y));
  t.section("constraint qualifications");
  t.row("robinson cq", cq_summary(robinson, true));
  t.row("nnamcq", cq_summary(abnormal, false));
  return {"cq", dump(doc), t.str()};
}

ReportDocument report_rs(const Provenance& prov, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                         const RsVerdict& verdict, const RsProbe& probe) {
  json doc;
  doc["report"] = "rs";
  doc["provenance"] = provenance_fragment(prov);
  doc["x"] = vec(x);
  doc["y"] = vec(y);
  doc["direction"] = vec(u);
  doc["verdict"] = rs_fragment(verdict);
  doc["probe"] = probe_fragment(probe);

  Table t(heading(prov, "rs"));
  t.section("point");
  t.row("x", fmt(x));
  t.row("y", fmt(y));
  t.row("direction", fmt(u));
  provenance_rows(t, prov);
  t.section("directional stability");
  t.row("verdict", rs_summary(verdict));
  t.section("numeric probe");
  t.row("kappa_hat", fmt(probe.kappa_hat));
  t.row("pairs", std::to_string(probe.pairs));
  t.row("near max", fmt(probe.near_max));
  t.row("far max", fmt(probe.far_max));
  t.row("violation", yn(probe.violation));
  return {"rs", dump(doc), t.str()};
}

ConeSurvey survey_cones(const ParametricProgram& prog, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& y, const Eigen::VectorXd& u) {
  const FeasibilityCheck fc = is_feasible(prog, x, y);
  if (!fc.feasible)
    throw std::invalid_argument("survey_cones: y is infeasible at x");

  ConeSurvey s;
  s.x = x;
  s.y = y;
  s.z = project(prog.C, constraint_value(prog, x, y)).point;
  s.tangent = tangent_cone(prog.C, s.z);
  s.regular_tangent = regular_tangent_cone(prog.C, s.z);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s.z.size());
  s.clarke_normal = clarke_normal_cone(prog.C, s.z, zero);
  s.limiting_normal = dir_normal_cone(prog.C, s.z, zero);
  s.cells = enumerate_cells(prog.C, s.z);
  s.image = image_dir_deriv(prog, x, y, u);
  for (const auto& d : s.image.generators)
    s.dir_normals.push_back(dir_normal_cone(prog.C, s.z, d));
  return s;
}

ReportDocument report_cones(const Provenance& prov, const ConeSurvey& s) {
  json doc;
  doc["report"] = "cones";
  doc["provenance"] = provenance_fragment(prov);
  doc["x"] = vec(s.x);
  doc["y"] = vec(s.y);
  doc["z"] = vec(s.z);
  doc["tangent"] = union_fragment(s.tangent);
  doc["regular_tangent"] = cone_fragment(s.regular_tangent);
  doc["clarke_normal"] = cone_fragment(s.clarke_normal);
  doc["limiting_normal"] = union_fragment(s.limiting_normal);
  json cells = json::array();
  for (const auto& c : s.cells) {
    json cj;
    cj["cell"] = cone_fragment(c.cell);
    cj["normal"] = union_fragment(c.normal);
    cj["representative"] = vec(c.representative);
    cells.push_back(cj);
  }
  doc["cells"] = cells;
  doc["image"] = image_fragment(s.image);
  json dn = json::array();
  for (size_t i = 0; i < s.dir_normals.size(); ++i) {
    json e;
    e["direction"] = vec(s.image.generators[i]);
    e["normal"] = union_fragment(s.dir_normals[i]);
    dn.push_back(e);
  }
  doc["dir_normals"] = dn;

  Table t(heading(prov, "cones"));
  t.section("point");
  t.row("x", fmt(s.x));
  t.row("y", fmt(s.y));
  t.row("z = P(x, y)", fmt(s.z));
  t.section("cones of C at z");
  t.row("tangent", union_summary(s.tangent));
  t.row("regular tangent", cone_summary(s.regular_tangent));
  t.row("clarke normal", cone_summary(s.clarke_normal));
  t.row("limiting normal", union_summary(s.limiting_normal));
  t.row("tangent cells", std::to_string(s.cells.size()));
  t.section("image directions");
  t.row("kind", s.image.kind == ImageKind::ExactRay ? "exact ray" : "sampled cone");
  if (s.image.generators.empty()) t.row("generators", "none (image is stationary)");
  for (size_t i = 0; i < s.dir_normals.size(); ++i) {
    t.row("d = " + fmt(s.image.generators[i]),
          "directional normal: " + union_summary(s.dir_normals[i]));
  }
  return {"cones", dump(doc), t.str()};
}

DualitySurvey survey_duality(const ParametricProgram& prog, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& y, const Eigen::VectorXd& u) {
  const MultiplierSet ms = multiplier_set(prog, x, y, MultiplierKind::Clarke);

  DualitySurvey s;
  s.x = x;
  s.y = y;
  s.u = u;
  s.pair.alpha = -ms.grad_y;
  s.pair.c = -ms.grad_x.dot(u);
  s.pair.A = -ms.jac_y;
  s.pair.b = -(ms.jac_x * u);
  s.pair.K = regular_tangent_cone(prog.C, ms.z);
  s.solution = solve_pair(s.pair);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(ms.z.size());
  s.slater = interior_check(zero, ms.jac_y, s.pair.K, ms.jac_x * u);
  if (s.solution.dual_status == LPStatus::Optimal) {
    s.dual_face_computed = true;
    s.dual_face = dual_face_bounded(s.pair, s.solution.dual_value);
  }
  return s;
}

ReportDocument report_duality(const Provenance& prov, const DualitySurvey& s) {
  json doc;
  doc["report"] = "duality";
  doc["provenance"] = provenance_fragment(prov);
  doc["x"] = vec(s.x);
  doc["y"] = vec(s.y);
  doc["direction"] = vec(s.u);
  json pj;
  pj["alpha"] = vec(s.pair.alpha);
  pj["c"] = num(s.pair.c);
  pj["A"] = mat(s.pair.A);
  pj["b"] = vec(s.pair.b);
  pj["K"] = cone_fragment(s.pair.K);
  doc["pair"] = pj;
  json primal;
  primal["status"] = lp_status_name(s.solution.primal_status);
  primal["value"] = num(s.solution.primal_value);
  primal["point"] = vec(s.solution.primal_point);
  doc["primal"] = primal;
  json dual;
  dual["status"] = lp_status_name(s.solution.dual_status);
  dual["value"] = num(s.solution.dual_value);
  dual["point"] = vec(s.solution.dual_point);
  doc["dual"] = dual;
  doc["gap"] = num(s.solution.gap);
  json ij;
  ij["holds_plus"] = s.slater.holds_plus;
  ij["holds_minus"] = s.slater.holds_minus;
  ij["margin_plus"] = num(s.slater.margin_plus);
  ij["margin_minus"] = num(s.slater.margin_minus);
  doc["interiority"] = ij;
  doc["dual_face_computed"] = s.dual_face_computed;
  doc["dual_face_bounded"] = s.dual_face.bounded;
  doc["dual_face_ray"] = vec(s.dual_face.ray);

  Table t(heading(prov, "duality"));
  t.section("point");
  t.row("x", fmt(s.x));
  t.row("y", fmt(s.y));
  t.row("direction", fmt(s.u));
  t.section("linearized pair");
  t.row("primal", std::string(lp_status_name(s.solution.primal_status)) + ", value " +
                      fmt(s.solution.primal_value));
  t.row("dual", std::string(lp_status_name(s.solution.dual_status)) + ", value " +
                    fmt(s.solution.dual_value));
  t.row("gap", fmt(s.solution.gap));
  t.row("interiority (+u)", yn(s.slater.holds_plus));
  t.row("interiority (-u)", yn(s.slater.holds_minus));
  t.row("dual face bounded",
        s.dual_face_computed ? yn(s.dual_face.bounded) : "not computed");
  return {"duality", dump(doc), t.str()};
}

ReportDocument report_validate(const std::string& source, bool valid,
                               const ProblemFile& pf,
                               const std::vector<Diagnostic>& diagnostics) {
  json doc;
  doc["report"] = "validate";
  doc["source"] = source;
  doc["valid"] = valid;
  json dj = json::array();
  for (const auto& d : diagnostics) {
    json e;
    e["where"] = d.where;
    e["message"] = d.message;
    e["line"] = d.line;
    dj.push_back(e);
  }
  doc["diagnostics"] = dj;
  json summary = json::object();
  if (valid) {
    summary["name"] = pf.name;
    summary["n"] = pf.n;
    summary["m"] = pf.m;
    summary["constraints"] = static_cast<int>(pf.constraints.size());
    summary["blocks"] = static_cast<int>(pf.C.blocks.size());
    summary["xbar"] = vec(pf.xbar);
    summary["direction"] = vec(pf.direction);
  }
  doc["problem"] = summary;

  Table t("dirval validate: " + source);
  t.section("result");
  t.row("valid", yn(valid));
  if (valid) {
    t.row("name", pf.name);
    t.row("n, m", std::to_string(pf.n) + ", " + std::to_string(pf.m));
    t.row("constraints", std::to_string(pf.constraints.size()));
    t.row("blocks", std::to_string(pf.C.blocks.size()));
  }
  if (!diagnostics.empty()) {
    t.section("diagnostics");
    for (const auto& d : diagnostics) {
      std::string where = d.where;
      if (d.line > 0) where += " (line " + std::to_string(d.line) + ")";
      t.row(where, d.message);
    }
  }
  return {"validate", dump(doc), t.str()};
}

}  // namespace dirval
