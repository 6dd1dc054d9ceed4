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

#include "dirval/problem.hpp"

#include <fstream>
#include <sstream>

#include "dirval/expr.hpp"
#include "json.hpp"

namespace dirval {

namespace {

using nlohmann::json;

// Line number of a byte offset, for pointing at syntax errors.
int line_of_offset(const std::string& text, size_t offset) {
  int line = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

class Collector {
 public:
  void add(std::string where, std::string message, int line = 0) {
    diags_.push_back({std::move(where), std::move(message), line});
  }
  bool clean() const { return diags_.empty(); }
  [[noreturn]] void raise() { throw ProblemError(std::move(diags_)); }
  void raise_if_dirty() {
    if (!clean()) raise();
  }

 private:
  std::vector<Diagnostic> diags_;
};

bool want_number(const json& j) { return j.is_number(); }

Eigen::VectorXd read_vector(const json& doc, const std::string& key, int expect,
                            Collector& diags) {
  Eigen::VectorXd v;
  if (!doc.contains(key)) {
    diags.add(key, "required field is missing");
    return v;
  }
  const json& arr = doc[key];
  if (!arr.is_array()) {
    diags.add(key, "expected an array of numbers");
    return v;
  }
  v.resize(static_cast<int>(arr.size()));
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!want_number(arr[i])) {
      diags.add(key + "[" + std::to_string(i) + "]", "expected a number");
      return Eigen::VectorXd();
    }
    v[static_cast<int>(i)] = arr[i].get<double>();
  }
  if (expect >= 0 && v.size() != expect)
    diags.add(key, "expected " + std::to_string(expect) + " entries, found " +
                       std::to_string(v.size()));
  return v;
}

Block read_block(const json& b, const std::string& where, Collector& diags) {
  if (!b.is_object() || !b.contains("type") || !b["type"].is_string()) {
    diags.add(where, "expected an object with a \"type\" string");
    return make_free_block();
  }
  const std::string type = b["type"].get<std::string>();
  if (type == "zero") return make_zero_block();
  if (type == "nonpos") return make_nonpos_block();
  if (type == "nonneg") return make_nonneg_block();
  if (type == "free") return make_free_block();
  if (type == "compl") return make_compl_block();
  if (type == "interval") {
    if (!b.contains("l") || !b.contains("u") || !want_number(b["l"]) ||
        !want_number(b["u"])) {
      diags.add(where, "interval block needs numeric \"l\" and \"u\"");
      return make_free_block();
    }
    const double l = b["l"].get<double>();
    const double u = b["u"].get<double>();
    if (l > u) {
      diags.add(where, "interval has l > u");
      return make_free_block();
    }
    return make_interval_block(l, u);
  }
  if (type == "union_intervals") {
    if (!b.contains("pieces") || !b["pieces"].is_array() || b["pieces"].empty()) {
      diags.add(where, "union_intervals block needs a nonempty \"pieces\" array");
      return make_free_block();
    }
    std::vector<std::pair<double, double>> pieces;
    for (size_t i = 0; i < b["pieces"].size(); ++i) {
      const json& p = b["pieces"][i];
      if (!p.is_array() || p.size() != 2 || !want_number(p[0]) || !want_number(p[1])) {
        diags.add(where + ".pieces[" + std::to_string(i) + "]",
                  "expected a [lo, hi] pair");
        return make_free_block();
      }
      pieces.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    try {
      return make_union_intervals_block(std::move(pieces));
    } catch (const std::invalid_argument& bad) {
      diags.add(where, bad.what());
      return make_free_block();
    }
  }
  diags.add(where, "unknown block type \"" + type + "\"");
  return make_free_block();
}

}  // namespace

ProblemFile parse_problem(const std::string& text, const std::string& origin) {
  Collector diags;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& bad) {
    // Strip the library's "[json.exception...]" prefix; the line in the
    // diagnostic already locates the failure.
    std::string msg = bad.what();
    if (const size_t cut = msg.find("] "); msg[0] == '[' && cut != std::string::npos)
      msg = msg.substr(cut + 2);
    diags.add(origin, msg, line_of_offset(text, bad.byte));
    diags.raise();
  }
  if (!doc.is_object()) {
    diags.add(origin, "top level must be an object");
    diags.raise();
  }

  ProblemFile pf;
  pf.source_path = origin;

  if (doc.contains("name") && doc["name"].is_string())
    pf.name = doc["name"].get<std::string>();
  else
    diags.add("name", "required string field is missing");

  for (const char* key : {"n", "m"}) {
    if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<int>() < 1)
      diags.add(key, "required positive integer field is missing");
  }
  diags.raise_if_dirty();
  pf.n = doc["n"].get<int>();
  pf.m = doc["m"].get<int>();

  if (doc.contains("objective") && doc["objective"].is_string())
    pf.objective = doc["objective"].get<std::string>();
  else
    diags.add("objective", "required expression string is missing");

  if (doc.contains("constraints") && doc["constraints"].is_array() &&
      !doc["constraints"].empty()) {
    for (size_t i = 0; i < doc["constraints"].size(); ++i) {
      const json& row = doc["constraints"][i];
      if (!row.is_string()) {
        diags.add("constraints[" + std::to_string(i) + "]",
                  "expected an expression string");
        continue;
      }
      pf.constraints.push_back(row.get<std::string>());
    }
  } else {
    diags.add("constraints", "required nonempty array of expression strings");
  }

  if (doc.contains("C") && doc["C"].is_array() && !doc["C"].empty()) {
    for (size_t i = 0; i < doc["C"].size(); ++i)
      pf.C.blocks.push_back(read_block(doc["C"][i], "C[" + std::to_string(i) + "]", diags));
  } else {
    diags.add("C", "required nonempty block array");
  }

  pf.xbar = read_vector(doc, "xbar", pf.n, diags);
  pf.direction = read_vector(doc, "direction", pf.n, diags);

  if (doc.contains("ybox") && doc["ybox"].is_object()) {
    pf.ybox_lo = read_vector(doc["ybox"], "lo", pf.m, diags);
    pf.ybox_hi = read_vector(doc["ybox"], "hi", pf.m, diags);
    for (int i = 0; i < std::min<int>(pf.ybox_lo.size(), pf.ybox_hi.size()); ++i)
      if (pf.ybox_lo[i] > pf.ybox_hi[i])
        diags.add("ybox", "lo exceeds hi in coordinate " + std::to_string(i + 1));
  } else {
    diags.add("ybox", "required object with \"lo\" and \"hi\" arrays");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) {
      diags.add("tolerances", "expected an object");
    } else {
      if (t.contains("feas") && want_number(t["feas"]))
        pf.tol.feas = t["feas"].get<double>();
      if (t.contains("opt_cluster") && want_number(t["opt_cluster"]))
        pf.tol.opt_cluster = t["opt_cluster"].get<double>();
      if (t.contains("polish") && want_number(t["polish"]))
        pf.tol.polish = t["polish"].get<double>();
    }
  }

  if (doc.contains("reference")) {
    const json& r = doc["reference"];
    if (!r.is_object()) {
      diags.add("reference", "expected an object");
    } else {
      if (r.contains("value") && want_number(r["value"])) {
        pf.has_reference_value = true;
        pf.reference_value = r["value"].get<double>();
      }
      if (r.contains("derivative") && want_number(r["derivative"])) {
        pf.has_reference_derivative = true;
        pf.reference_derivative = r["derivative"].get<double>();
      }
    }
  }

  // Shape audits that only make sense once the pieces parsed.
  if (diags.clean()) {
    const int covered = pf.C.dim();
    const int rows = static_cast<int>(pf.constraints.size());
    if (covered != rows)
      diags.add("C", "C covers " + std::to_string(covered) + " coords, P has " +
                         std::to_string(rows) + " rows");
    try {
      validate(pf.C);
    } catch (const std::invalid_argument& bad) {
      diags.add("C", bad.what());
    }
    for (size_t i = 0; i < pf.constraints.size(); ++i) {
      try {
        parse_expression(pf.constraints[i], pf.n, pf.m);
      } catch (const ParseError& bad) {
        diags.add("constraints[" + std::to_string(i) + "]",
                  std::string(bad.what()) + " at position " +
                      std::to_string(bad.position));
      }
    }
    try {
      parse_expression(pf.objective, pf.n, pf.m);
    } catch (const ParseError& bad) {
      diags.add("objective", std::string(bad.what()) + " at position " +
                                 std::to_string(bad.position));
    }
  }

  diags.raise_if_dirty();
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    Collector diags;
    diags.add(path, "cannot open file");
    diags.raise();
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path);
}

ParametricProgram instantiate(const ProblemFile& pf) {
  try {
    ParametricProgram prog = make_program(pf.n, pf.m, pf.objective, pf.constraints,
                                          pf.C, pf.ybox_lo, pf.ybox_hi);
    prog.tol = pf.tol;
    return prog;
  } catch (const ParseError& bad) {
    Collector diags;
    diags.add("objective/constraints",
              std::string(bad.what()) + " at position " + std::to_string(bad.position));
    diags.raise();
  } catch (const std::invalid_argument& bad) {
    Collector diags;
    diags.add(pf.source_path.empty() ? pf.name : pf.source_path, bad.what());
    diags.raise();
  }
}

}  // namespace dirval
