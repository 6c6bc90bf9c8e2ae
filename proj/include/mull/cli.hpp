// Copyright 2026 The mull Authors
//
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

// Command-line driver. Exit codes: 0 success, 1 semantic failure (budget
// exhausted, failed precondition), 2 input error.

#ifndef MULL_CLI_HPP
#define MULL_CLI_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mull/error.hpp"
#include "mull/kleene.hpp"
#include "mull/phase.hpp"
#include "mull/polar.hpp"
#include "mull/rel.hpp"
#include "mull/syntax.hpp"
#include "mull/totality.hpp"
#include "mull/wrel.hpp"

namespace mull::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string formula;
  std::string model = "rel";
  Budgets budgets;
  double tolerance = 1e-9;
  bool exact = false;
  std::size_t max_size = 3;
  std::size_t max_size_cap = 5;
  std::string space_path, expr_path, generators_path, point_path, pole, output_path;
  bool machine = false;
};

struct RunResult {
  int exit_code = 0;
  std::string report;       // stdout
  std::string diagnostics;  // stderr
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fmt_double(double d) {
  std::ostringstream os;
  os << std::setprecision(12) << d;
  return os.str();
}

inline std::string scalar(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return fmt_double(j.get<double>());
  if (j.is_null()) return "none";
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar(j[i]);
    return s + "]";
  }
  return j.dump();
}

inline bool flat(const Json& j) {
  if (j.is_object()) return false;
  if (j.is_array())
    for (const auto& e : j)
      if (e.is_object()) return false;
  return true;
}

inline void render(const Json& j, std::string& out, int indent) {
  std::size_t width = 0;
  for (const auto& [k, _] : j.items()) width = std::max(width, k.size());
  for (const auto& [k, v] : j.items()) {
    out += std::string(static_cast<std::size_t>(indent), ' ') + k;
    if (flat(v)) {
      out += std::string(width - k.size() + 2, ' ') + scalar(v) + "\n";
    } else if (v.is_object()) {
      out += "\n";
      render(v, out, indent + 2);
    } else {
      out += "\n";
      for (const auto& e : v) {
        out += std::string(static_cast<std::size_t>(indent + 2), ' ') + "-\n";
        render(e, out, indent + 4);
      }
    }
  }
}

/// Aligned key/value rendering of a report.
inline std::string human(const Json& j) {
  std::string out;
  render(j, out, 0);
  return out;
}

inline Json budgets_json(const Budgets& b) {
  return Json{{"depth", b.depth},
              {"bag", b.bag},
              {"max_carrier", b.max_carrier},
              {"max_orthogonal", b.max_orthogonal},
              {"max_iterations", b.max_iterations}};
}

inline Json elems_json(const Carrier& c) {
  Json a = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i) a.push_back(to_string(c[i]));
  return a;
}

inline Json fact_json(const PhaseSpace& s, PhaseSet x) {
  Json a = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (x >> i & 1) a.push_back(s.names()[i]);
  return a;
}

inline Json space_json(const PhaseSpace& s) {
  Json table = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < s.size(); ++j) row.push_back(s.names()[s.mul(i, j)]);
    table.push_back(row);
  }
  return Json{{"elements", s.names()}, {"unit", s.names()[s.unit()]}, {"table", table}, {"pole", fact_json(s, s.pole())}};
}

inline Formula parse_checked(const std::string& src, Json& report) {
  Formula f = parse(src);
  Sort s = check_variance(Context{}, f);
  report["formula"] = print(f);
  report["sort"] = to_string(s);
  return f;
}

inline std::vector<RVector> rational_rows(const SemiringMatrix<RealInf>& m, const std::string& what) {
  std::vector<RVector> rows;
  for (std::size_t i = 0; i < m.rows().size(); ++i) {
    RVector r;
    for (const auto& v : m.row(i)) {
      if (v.inf) throw InputError(what + ": entries must be finite rationals");
      r.push_back(v.value);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline int cmd_variance(const RunConfig& c, Json& r) {
  Formula f = parse(c.formula);
  r["formula"] = print(f);
  try {
    Sort s = check_variance(Context{}, f);
    r["well_sorted"] = true;
    r["sort"] = to_string(s);
    return 0;
  } catch (const VarianceError& e) {
    r["well_sorted"] = false;
    r["sort"] = nullptr;
    r["reason"] = e.what();
    return 1;
  }
}

inline int cmd_interp(const RunConfig& c, Json& r) {
  r["model"] = c.model;
  if (c.model == "phase") {
    if (c.space_path.empty()) throw InputError("interp --model phase requires --space FILE");
    PhaseSpace s = parse_phase_space(read_file(c.space_path));
    Formula f = parse_checked(c.formula, r);
    PhaseSet x = interpret_phase(s, f);
    r["space"] = c.space_path;
    r["fact"] = fact_json(s, x);
    r["holds"] = static_cast<bool>(x >> s.unit() & 1);
    r["stabilized"] = true;
    return 0;
  }
  Formula f = parse_checked(c.formula, r);
  r["budgets"] = budgets_json(c.budgets);
  if (c.model == "rel" || c.model == "wrel") {
    Carrier x = interpret_carrier(f, {}, c.budgets);
    if (c.model == "wrel") {
      r["semiring"] = RealInf::name;
      r["dimension"] = x.size();
      r["web"] = elems_json(x);
    } else {
      r["size"] = x.size();
      r["carrier"] = elems_json(x);
    }
    r["stabilized"] = x.stabilized();
    return 0;
  }
  if (c.model == "totality") {
    TotalitySpace t = interpret_totality(f, {}, c.budgets);
    r["size"] = t.carrier.size();
    r["carrier"] = elems_json(t.carrier);
    Json minimal = Json::array();
    for (const auto& m : t.total.minimal_elems()) {
      Json set = Json::array();
      for (const auto& e : m) set.push_back(to_string(e));
      minimal.push_back(set);
    }
    r["total_minimal"] = minimal;
    r["carrier_stabilized"] = t.carrier.stabilized();
    r["stabilized"] = t.stabilized;
    return 0;
  }
  throw InputError("unknown model '" + c.model + "' (expected rel, totality, phase or wrel)");
}

inline int cmd_phase_search(const RunConfig& c, Json& r) {
  if (c.max_size > c.max_size_cap)
    throw InputError("--max-size " + std::to_string(c.max_size) + " exceeds the cap of " +
                     std::to_string(c.max_size_cap));
  Formula f = parse_checked(c.formula, r);
  r["max_size"] = c.max_size;
  auto m = search_counter_model(f, c.max_size, {c.max_size_cap, 0});
  r["found"] = m.has_value();
  r["counter_model"] = m ? space_json(*m) : Json(nullptr);
  return 0;
}

inline int cmd_fix(const RunConfig& c, Json& r) {
  if (c.expr_path.empty()) throw InputError("fix requires --expr FILE");
  FunExpr f = parse_funexpr(read_file(c.expr_path));
  r["expr"] = c.expr_path;
  r["mode"] = c.exact ? "exact" : "floating";
  r["tolerance"] = c.tolerance;
  r["max_iterations"] = c.budgets.max_iterations;
  try {
    Json value = Json::object();
    if (c.exact) {
      auto res = kleene_fixpoint<Rational>(f, parse_rational(detail::fmt_double(c.tolerance)), c.budgets.max_iterations);
      for (std::size_t i = 0; i < res.value.size(); ++i) value[f.inputs()[i]] = to_double(res.value[i]);
      r["value"] = value;
      r["residual"] = to_double(res.residual);
      r["iterations"] = res.iterations;
    } else {
      auto res = kleene_fixpoint<double>(f, c.tolerance, c.budgets.max_iterations);
      for (std::size_t i = 0; i < res.value.size(); ++i) value[f.inputs()[i]] = res.value[i];
      r["value"] = value;
      r["residual"] = res.residual;
      r["iterations"] = res.iterations;
    }
    r["converged"] = true;
    return 0;
  } catch (const KleeneBudgetExceeded& e) {
    Json last = Json::object();
    for (std::size_t i = 0; i < e.last_iterate().size(); ++i) last[f.inputs()[i]] = e.last_iterate()[i];
    r["value"] = last;
    r["residual"] = e.residual();
    r["iterations"] = c.budgets.max_iterations;
    r["converged"] = false;
    return 1;
  }
}

inline int cmd_polar(const RunConfig& c, Json& r) {
  if (c.generators_path.empty() || c.point_path.empty()) throw InputError("polar requires --generators and --point");
  auto g = parse_matrix<RealInf>(read_file(c.generators_path));
  auto p = parse_matrix<RealInf>(read_file(c.point_path));
  if (p.rows().size() != 1) throw InputError("point file must have exactly one row");
  if (p.cols() != g.cols()) throw InputError("point and generators use different column indices");
  auto res = polar_analysis(rational_rows(g, "generators"), rational_rows(p, "point")[0]);
  r["pole"] = "unit-interval";
  r["dimension"] = g.cols().size();
  r["generators"] = g.rows().size();
  r["member"] = res.member;
  r["supremum"] = res.supremum ? Json(rational_to_string(*res.supremum)) : Json("unbounded");
  Json unb = Json::array();
  for (auto i : res.unbounded_coordinates) unb.push_back(g.cols()[i]);
  r["unbounded_coordinates"] = unb;
  return 0;
}

inline int cmd_admissible(const RunConfig& c, Json& r) {
  auto a = admissibility_by_name(c.pole);
  r["pole"] = a.pole;
  r["semiring"] = a.semiring;
  r["verdict"] = to_string(a.verdict);
  r["contains_zero"] = a.contains_zero;
  r["reason"] = a.reason;
  r["witness"] = a.witness;
  if (!a.witness.empty()) r["witness"].push_back("...");
  r["witness_supremum"] = a.witness_supremum ? Json(*a.witness_supremum) : Json(nullptr);
  r["chain_sample"] = kChainSample;
  return 0;
}

inline std::string caret(const std::string& src, std::size_t line, std::size_t column) {
  std::istringstream in(src);
  std::string l;
  for (std::size_t i = 0; i < line && std::getline(in, l); ++i) {
  }
  return "  " + l + "\n  " + std::string(column > 0 ? column - 1 : 0, ' ') + "^\n";
}

}  // namespace detail

/// Runs one command. Never throws for input or semantic errors.
inline RunResult run(const RunConfig& c) {
  Json r;
  r["command"] = c.command;
  RunResult out;
  auto fail = [&](int code, const char* kind, const std::string& msg, Json extra = Json::object()) {
    out.exit_code = code;
    Json e{{"kind", kind}, {"message", msg}};
    for (const auto& [k, v] : extra.items()) e[k] = v;
    r["error"] = e;
    out.diagnostics = std::string("error: ") + msg + "\n";
  };
  try {
    if (c.budgets.depth == 0 || c.budgets.max_iterations == 0 || c.budgets.max_carrier == 0)
      throw InputError("budgets must be positive");
    if (!(c.tolerance > 0)) throw InputError("tolerance must be positive");
    if (c.command == "variance") out.exit_code = detail::cmd_variance(c, r);
    else if (c.command == "interp") out.exit_code = detail::cmd_interp(c, r);
    else if (c.command == "phase-search") out.exit_code = detail::cmd_phase_search(c, r);
    else if (c.command == "fix") out.exit_code = detail::cmd_fix(c, r);
    else if (c.command == "polar") out.exit_code = detail::cmd_polar(c, r);
    else if (c.command == "admissible") out.exit_code = detail::cmd_admissible(c, r);
    else throw InputError("unknown command '" + c.command + "'");
  } catch (const ParseError& e) {
    fail(2, "input", e.what(), Json{{"line", e.line()}, {"column", e.column()}, {"offset", e.offset()}});
    out.diagnostics += detail::caret(c.formula, e.line(), e.column());
  } catch (const InputError& e) {
    fail(2, "input", e.what());
  } catch (const NotSupported& e) {
    fail(2, "input", e.what());
  } catch (const CarrierMismatch& e) {
    fail(2, "input", e.what());
  } catch (const Error& e) {
    fail(1, "semantic", e.what());
  }
  out.report = c.machine ? r.dump(2) + "\n" : detail::human(r);
  if (c.machine) out.diagnostics.clear();
  return out;
}

/// Parses argv into a config, or returns the result to print (help or a
/// usage error). `depth_env` is the value of MULL_BUDGET_DEPTH, if set.
inline std::variant<RunConfig, RunResult> parse_command_line(const std::vector<std::string>& args,
                                                             std::optional<std::string> depth_env = std::nullopt) {
  RunConfig c;
  if (depth_env) {
    try {
      std::size_t used = 0;
      long d = std::stol(*depth_env, &used);
      if (used != depth_env->size() || d <= 0) throw std::invalid_argument("depth");
      c.budgets.depth = static_cast<std::size_t>(d);
    } catch (const std::logic_error&) {
      return RunResult{2, "", "error: MULL_BUDGET_DEPTH must be a positive integer\n"};
    }
  }
  CLI::App app{"Semantics workbench for linear logic types with fixpoints", "mull"};
  app.require_subcommand(1);
  app.add_flag("--machine", c.machine, "Emit a JSON report");
  app.add_option("-o,--output", c.output_path, "Write the report to FILE");

  auto add_budgets = [&](CLI::App* s) {
    s->add_option("--depth,-k", c.budgets.depth, "Fixpoint unfolding depth k")->check(CLI::PositiveNumber);
    s->add_option("--bag,-m", c.budgets.bag, "Largest bag size m");
    s->add_option("--max-carrier", c.budgets.max_carrier, "Largest carrier")->check(CLI::PositiveNumber);
    s->add_option("--max-orthogonal", c.budgets.max_orthogonal, "Largest carrier for exact orthogonals");
  };

  auto* variance = app.add_subcommand("variance", "Report the sort of a formula");
  variance->add_option("formula", c.formula)->required();

  auto* interp = app.add_subcommand("interp", "Interpret a closed formula in a model");
  interp->add_option("formula", c.formula)->required();
  interp->add_option("--model", c.model, "rel | totality | phase | wrel")
      ->check(CLI::IsMember({"rel", "totality", "phase", "wrel"}));
  interp->add_option("--space", c.space_path, "Phase space file");
  add_budgets(interp);

  auto* search = app.add_subcommand("phase-search", "Search small phase spaces for a counter-model");
  search->add_option("formula", c.formula)->required();
  search->add_option("--max-size", c.max_size, "Largest monoid")->check(CLI::PositiveNumber);

  auto* fix = app.add_subcommand("fix", "Least fixpoint of a polynomial map by Kleene iteration");
  fix->add_option("--expr", c.expr_path, "Expression file")->required();
  fix->add_option("--tol", c.tolerance, "Tolerance")->check(CLI::PositiveNumber);
  fix->add_option("--max-iter", c.budgets.max_iterations, "Iteration budget")->check(CLI::PositiveNumber);
  fix->add_flag("--exact", c.exact, "Iterate over exact rationals");

  auto* polar = app.add_subcommand("polar", "Bipolar membership for the pole [0,1]");
  polar->add_option("--generators", c.generators_path, "Matrix file, one generator per row")->required();
  polar->add_option("--point", c.point_path, "One-row matrix file")->required();

  auto* adm = app.add_subcommand("admissible", "Admissibility verdict for a named pole");
  adm->add_option("--pole", c.pole, "unit-interval | naturals | totality | full | half-open")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    return RunResult{0, app.help(), ""};
  } catch (const CLI::CallForAllHelp&) {
    return RunResult{0, app.help("", CLI::AppFormatMode::All), ""};
  } catch (const CLI::ParseError& e) {
    return RunResult{2, "", "error: " + std::string(e.what()) + "\n"};
  }
  c.command = app.get_subcommands().front()->get_name();
  return c;
}

/// Entry point shared by the executable and the tests.
inline RunResult main_with(const std::vector<std::string>& args, std::optional<std::string> depth_env) {
  auto parsed = parse_command_line(args, std::move(depth_env));
  if (auto* r = std::get_if<RunResult>(&parsed)) return *r;
  const RunConfig& c = std::get<RunConfig>(parsed);
  RunResult r = run(c);
  if (!c.output_path.empty()) {
    std::ofstream out(c.output_path, std::ios::binary);
    if (!out) return RunResult{2, "", "error: cannot write '" + c.output_path + "'\n"};
    out << r.report;
    r.report.clear();
  }
  return r;
}

}  // namespace mull::cli

#endif  // MULL_CLI_HPP
