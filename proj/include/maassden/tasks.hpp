#pragma once

// Run configuration (JSON with comments), task dispatch and report emission.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "core.hpp"
#include "density.hpp"
#include "expsum.hpp"
#include "io.hpp"
#include "kuznetsov.hpp"
#include "records.hpp"
#include "rmt.hpp"
#include "testfn.hpp"
#include "weights.hpp"

namespace maassden {

struct WeightConfig {
  Family family = Family::hT;
  double T = 11.0;
  double support = 0.25;
  int zero_order = 8;
  WeightKind kind = WeightKind::plain_bump;

  SmoothWeight base() const { return SmoothWeight::make_bump(support, zero_order, kind); }
  SpectralWeight make() const { return SpectralWeight(base(), T, family); }
};

struct TestFunctionConfig {
  Shape shape = Shape::fejer;
  double eta = 0.8;

  TestFunction make() const { return TestFunction(eta, shape); }
};

struct Tolerances {
  double contour_defect = 1e-7;
  double weil = 1e-10;
  double mass_bracket = 2.0;      // max/min of diagonal/(T^2 nu(N)) over a run
  double explicit_slack = 0.05;   // zero side vs prime side, beyond the error budget
  double family_slack = 0.2;      // family average vs phi^(0) + phi(0)/2
  double mc_sigma = 3.0;
  double kuznetsov_abs = 1e-3;    // spectral vs geometric, beyond the tail bound
};

struct TaskConfig {
  std::string name;
  std::vector<double> X;
  std::vector<long> N{1};
  long m = 1, n = 1, c_max = 0;
  std::optional<Group> group;
  int size = 0;
  long samples = 0;
  std::string statistic = "one_level";
  std::string file, forms, data_dir = "data";
  double R = 0.0;                 // 0: task default
  std::optional<double> t;
  long p_max = 1000000;
};

struct RunConfig {
  WeightConfig weight;
  TestFunctionConfig test_function;
  TaskConfig task;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  std::string output;             // TSV path; empty for stdout
};

struct Report {
  std::string task;
  std::vector<std::string> header;     // '#' lines
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> summary;
  bool passed = true;
};

inline const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{
      "verify contour", "verify expsum", "kloosterman",     "mass",            "density predict",
      "density zeros",  "density family", "rmt sample",     "kuznetsov check", "suite"};
  return names;
}

namespace taskimpl {

using json = nlohmann::json;

[[noreturn]] inline void fail(const std::string& what) { throw error(errc::config, what); }

inline void need(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

class Block {
 public:
  Block(const json& j, std::string name, const std::vector<std::string>& allowed) : j_(j), name_(std::move(name)) {
    need(j.is_object(), name_ + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
      need(std::find(allowed.begin(), allowed.end(), it.key()) != allowed.end(),
           "unknown key '" + name_ + "." + it.key() + "'");
  }

  bool has(const std::string& k) const { return j_.contains(k); }

  double real(const std::string& k, double def) const {
    if (!has(k)) return def;
    const json& v = j_.at(k);
    need(v.is_number(), key(k) + " must be a number");
    double x = v.get<double>();
    need(std::isfinite(x), key(k) + " must be finite");
    return x;
  }

  long integer(const std::string& k, long def) const {
    if (!has(k)) return def;
    const json& v = j_.at(k);
    need(v.is_number_integer(), key(k) + " must be an integer");
    return v.get<long>();
  }

  std::string str(const std::string& k, const std::string& def) const {
    if (!has(k)) return def;
    const json& v = j_.at(k);
    need(v.is_string(), key(k) + " must be a string");
    return v.get<std::string>();
  }

  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    const json& v = j_.at(k);
    if (v.is_number()) return {real(k, 0.0)};
    need(v.is_array() && !v.empty(), key(k) + " must be a number or a non-empty array");
    for (const json& e : v) {
      need(e.is_number() && std::isfinite(e.get<double>()), key(k) + " entries must be finite numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<long> integers(const std::string& k) const {
    std::vector<long> out;
    const json& v = j_.at(k);
    if (v.is_number_integer()) return {v.get<long>()};
    need(v.is_array() && !v.empty(), key(k) + " must be an integer or a non-empty array");
    for (const json& e : v) {
      need(e.is_number_integer(), key(k) + " entries must be integers");
      out.push_back(e.get<long>());
    }
    return out;
  }

  std::string key(const std::string& k) const { return name_ + "." + k; }

 private:
  const json& j_;
  std::string name_;
};

inline Family parse_family(const std::string& s) {
  if (s == "hT" || s == "h") return Family::hT;
  if (s == "HT" || s == "H") return Family::HT;
  fail("weight.family must be hT or HT, got '" + s + "'");
}

inline Shape parse_shape(const std::string& s) {
  if (s == "fejer") return Shape::fejer;
  if (s == "bump_squared" || s == "bump-squared") return Shape::bump_squared;
  fail("test_function.shape must be fejer or bump_squared, got '" + s + "'");
}

inline Group parse_group(const std::string& s) {
  for (Group g : {Group::U, Group::Sp, Group::SOeven, Group::SOodd, Group::SO})
    if (s == to_string(g)) return g;
  fail("unknown group '" + s + "'");
}

inline bool is_odd_integer(double T) {
  double r = std::round(T);
  return std::fabs(T - r) < 1e-12 && static_cast<long>(r) % 2 == 1;
}

inline const char* status(bool ok) { return ok ? "PASS" : "FAIL"; }

inline std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

inline std::string zeros_path_for(const std::string& data_dir, double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "level1_t%.5f.zeros", t);
  return data_dir + "/zeros/" + buf;
}

inline const MaassFormRecord& select_form(const std::vector<MaassFormRecord>& forms, double t) {
  for (const MaassFormRecord& f : forms)
    if (std::fabs(f.t - t) < 1e-4) return f;
  throw error(errc::precondition, "no form with t = " + std::to_string(t) + " in the forms file");
}

}  // namespace taskimpl

// ---------------------------------------------------------------------------
// parsing and validation; nothing is computed before this succeeds

inline RunConfig parse_run_config(const nlohmann::json& j) {
  using namespace taskimpl;
  Block top(j, "config", {"weight", "test_function", "task", "tolerances", "seed", "output"});
  RunConfig c;

  need(top.has("task"), "config.task is required");
  if (top.has("seed")) {
    const json& s = j.at("seed");
    need(s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0),
         "config.seed must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  c.output = top.str("output", "");

  if (top.has("weight")) {
    Block w(j.at("weight"), "weight", {"family", "T", "support", "zero_order", "kind"});
    c.weight.family = parse_family(w.str("family", "hT"));
    bool h = c.weight.family == Family::hT;
    c.weight.T = w.real("T", 11.0);
    c.weight.support = w.real("support", 0.25);
    c.weight.zero_order = static_cast<int>(w.integer("zero_order", h ? 8 : 0));
    std::string kind = w.str("kind", h ? "plain" : "squared");
    need(kind == "plain" || kind == "squared", "weight.kind must be plain or squared");
    c.weight.kind = kind == "plain" ? WeightKind::plain_bump : WeightKind::squared;
  } else {
    c.weight = WeightConfig{};
  }
  need(c.weight.T > 0.0, "weight.T must be positive");
  need(c.weight.support > 0.0 && c.weight.support <= 0.25, "weight.support must lie in (0, 1/4]");
  need(c.weight.zero_order >= 0 && c.weight.zero_order <= 40, "weight.zero_order must lie in [0, 40]");
  need(c.weight.kind == WeightKind::plain_bump || c.weight.zero_order % 2 == 0,
       "weight.zero_order must be even for kind squared");

  if (top.has("test_function")) {
    Block t(j.at("test_function"), "test_function", {"shape", "eta"});
    c.test_function.shape = parse_shape(t.str("shape", "fejer"));
    c.test_function.eta = t.real("eta", 0.8);
  }
  need(c.test_function.eta > 0.0 && c.test_function.eta <= 10.0, "test_function.eta must lie in (0, 10]");

  if (top.has("tolerances")) {
    Block t(j.at("tolerances"), "tolerances",
            {"contour_defect", "weil", "mass_bracket", "explicit_slack", "family_slack", "mc_sigma", "kuznetsov_abs"});
    Tolerances& z = c.tolerances;
    z.contour_defect = t.real("contour_defect", z.contour_defect);
    z.weil = t.real("weil", z.weil);
    z.mass_bracket = t.real("mass_bracket", z.mass_bracket);
    z.explicit_slack = t.real("explicit_slack", z.explicit_slack);
    z.family_slack = t.real("family_slack", z.family_slack);
    z.mc_sigma = t.real("mc_sigma", z.mc_sigma);
    z.kuznetsov_abs = t.real("kuznetsov_abs", z.kuznetsov_abs);
    for (double v : {z.contour_defect, z.weil, z.explicit_slack, z.family_slack, z.mc_sigma, z.kuznetsov_abs})
      need(v >= 0.0, "tolerances must be non-negative");
    need(z.mass_bracket >= 1.0, "tolerances.mass_bracket must be >= 1");
  }

  const json& tj = j.at("task");
  need(tj.is_object() && tj.contains("name") && tj.at("name").is_string(), "task.name is required");
  TaskConfig& k = c.task;
  k.name = tj.at("name").get<std::string>();
  const auto& names = task_names();
  need(std::find(names.begin(), names.end(), k.name) != names.end(), "unknown task '" + k.name + "'");
  const double T = c.weight.T;

  if (k.name == "verify contour" || k.name == "verify expsum") {
    Block b(tj, "task", {"name", "X"});
    need(is_odd_integer(T), k.name + " needs T to be an odd integer (got " + format_real(T) + ")");
    if (b.has("X"))
      k.X = b.reals("X");
    else if (k.name == "verify contour")
      k.X = {0.1, 0.5, 1.0, 2.0, std::min(5.0, T)};
    else
      k.X = {0.1, 0.5, 1.0, 2.0};
    for (double x : k.X) need(x > 0.0 && x <= T, "task.X values must lie in (0, T]");
    if (k.name == "verify contour" && c.weight.family == Family::hT)
      need(c.weight.zero_order >= 8, "verify contour with family hT needs weight.zero_order >= 8");
    if (k.name == "verify expsum") need(c.weight.zero_order >= 8, "verify expsum needs weight.zero_order >= 8");
  } else if (k.name == "kloosterman") {
    Block b(tj, "task", {"name", "m", "n", "c_max"});
    k.m = b.integer("m", 1);
    k.n = b.integer("n", 1);
    k.c_max = b.integer("c_max", 100);
    need(k.c_max >= 1 && k.c_max <= 2000000, "task.c_max must lie in [1, 2e6]");
    need(std::labs(k.m) <= 1000000000L && std::labs(k.n) <= 1000000000L, "task.m, task.n must be at most 1e9");
  } else if (k.name == "mass") {
    Block b(tj, "task", {"name", "N", "c_max"});
    if (b.has("N")) k.N = b.integers("N");
    for (long N : k.N) need(N >= 1 && N <= 100000, "task.N values must lie in [1, 1e5]");
    k.c_max = b.integer("c_max", 200);
    need(k.c_max >= 1 && k.c_max <= 100000, "task.c_max must lie in [1, 1e5]");
  } else if (k.name == "density predict") {
    Block b(tj, "task", {"name", "group"});
    need(b.has("group"), "task.group is required");
    k.group = parse_group(b.str("group", ""));
  } else if (k.name == "density zeros") {
    Block b(tj, "task", {"name", "file", "R", "forms", "t", "p_max"});
    k.file = b.str("file", "");
    need(!k.file.empty(), "task.file is required");
    k.R = b.real("R", 0.0);
    need(k.R > 1.0, "task.R must be > 1");
    k.forms = b.str("forms", "");
    if (b.has("t")) k.t = b.real("t", 0.0);
    need(k.forms.empty() || k.t.has_value(), "task.forms needs task.t to select the form");
    k.p_max = b.integer("p_max", k.p_max);
    need(k.p_max >= 2, "task.p_max must be >= 2");
  } else if (k.name == "density family") {
    Block b(tj, "task", {"name", "forms", "R", "c_max", "p_max"});
    k.forms = b.str("forms", "");
    need(!k.forms.empty(), "task.forms is required");
    k.R = b.real("R", 0.0);
    need(k.R == 0.0 || k.R > 1.0, "task.R must be > 1");
    k.c_max = b.integer("c_max", 200);
    need(k.c_max >= 1 && k.c_max <= 100000, "task.c_max must lie in [1, 1e5]");
    k.p_max = b.integer("p_max", k.p_max);
    need(k.p_max >= 2, "task.p_max must be >= 2");
  } else if (k.name == "rmt sample") {
    Block b(tj, "task", {"name", "group", "size", "samples", "statistic"});
    need(b.has("group"), "task.group is required");
    k.group = parse_group(b.str("group", ""));
    k.size = static_cast<int>(b.integer("size", 10));
    k.samples = b.integer("samples", 1000);
    k.statistic = b.str("statistic", "one_level");
    need(k.statistic == "one_level" || k.statistic == "two_level", "task.statistic must be one_level or two_level");
    need(k.size >= 1 && k.size <= 400, "task.size must lie in [1, 400]");
    need(k.samples >= 1 && k.samples <= 10000000, "task.samples must lie in [1, 1e7]");
    if (*k.group == Group::SO) {
      need(k.size % 2 == 0, "group SO mixes SOeven(size) and SOodd(size+1); size must be even");
    } else {
      EnsembleSpec s{*k.group, k.size, k.samples, c.seed};
      try {
        s.validate();
      } catch (const error& e) {
        fail(std::string("task: ") + e.what());
      }
    }
  } else if (k.name == "kuznetsov check") {
    Block b(tj, "task", {"name", "forms", "m", "c_max"});
    k.forms = b.str("forms", "");
    need(!k.forms.empty(), "task.forms is required");
    k.m = b.integer("m", 1);
    need(k.m >= 1 && k.m <= 1000, "task.m must lie in [1, 1000]");
    k.c_max = b.integer("c_max", 2000);
    need(k.c_max >= 1 && k.c_max <= 100000, "task.c_max must lie in [1, 1e5]");
  } else if (k.name == "suite") {
    Block b(tj, "task", {"name", "data_dir"});
    k.data_dir = b.str("data_dir", "data");
  }
  return c;
}

inline nlohmann::json parse_config_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw error(errc::config, std::string("config is not valid JSON: ") + e.what());
  }
}

inline nlohmann::json read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

inline RunConfig parse_run_config(const std::string& text) { return parse_run_config(parse_config_json(text)); }
inline RunConfig parse_run_config(const char* text) { return parse_run_config(std::string(text)); }

inline RunConfig load_run_config(const std::string& path) { return parse_run_config(read_config_json(path)); }

// ---------------------------------------------------------------------------
// tasks

namespace taskimpl {

inline Report verify_contour(const RunConfig& c) {
  Report r;
  SpectralWeight sw = c.weight.make();
  ContourOptions opt;
  opt.defect_tol = c.tolerances.contour_defect;
  std::vector<ContourCheck> cs = contour_transform(c.task.X, sw, opt);
  r.columns = {"family", "T", "X", "integral_re", "integral_im", "residue", "bracket", "c1_re", "c1_im", "defect",
               "tolerance", "status"};
  double worst = 0.0;
  for (const ContourCheck& k : cs) {
    r.rows.push_back({std::string(to_string(k.family)), k.T, k.X, k.integral_side.real(), k.integral_side.imag(),
                      k.residue_side.real(), k.bracket_term.value_or(0.0).real(), k.c1.real(), k.c1.imag(), k.defect,
                      k.tolerance, std::string(status(k.passed))});
    r.passed = r.passed && k.passed;
    worst = std::max(worst, k.defect);
  }
  r.summary.push_back("contour identity, " + sw.describe() + ": worst relative defect " + fmt("%.3e", worst) +
                      " (tolerance " + fmt("%.1e", c.tolerances.contour_defect) + ")");
  return r;
}

inline Report verify_expsum(const RunConfig& c) {
  Report r;
  SmoothWeight h = c.weight.base();
  int T = static_cast<int>(std::lround(c.weight.T));
  r.columns = {"T", "X", "Y", "s_j_direct", "v_j", "poisson_w", "c8", "residual", "rounding", "envelope", "status"};
  double cmin = std::numeric_limits<double>::infinity(), cmax = -cmin;
  for (double X : c.task.X) {
    ExpSumCheck k = expsum_check(X, T, h);
    double env = X * std::exp(-0.5 * T);
    bool ok = k.residual <= env + k.rounding;
    r.rows.push_back({static_cast<long>(T), X, k.Y, k.s_j_direct, k.v_j, k.poisson_w, k.c8, k.residual, k.rounding,
                      env, std::string(status(ok))});
    r.passed = r.passed && ok;
    cmin = std::min(cmin, k.c8);
    cmax = std::max(cmax, k.c8);
  }
  r.summary.push_back("exp-sum identity, T = " + std::to_string(T) + ": |S_J/2 - V_J| within X e^{-T/2}: " +
                      status(r.passed));
  r.summary.push_back("V_J / W ranges over [" + fmt("%.6g", cmin) + ", " + fmt("%.6g", cmax) + "] on this grid");
  return r;
}

inline Report kloosterman_table(const RunConfig& c) {
  Report r;
  const TaskConfig& k = c.task;
  std::vector<double> S = kloosterman_range(k.m, k.n, k.c_max);
  r.columns = {"c", "S", "weil_ratio", "status"};
  double worst = 0.0;
  for (long q = 1; q <= k.c_max; ++q) {
    double s = S[static_cast<std::size_t>(q - 1)];
    double ratio = std::fabs(s) / weil_bound(k.m, k.n, q);
    bool ok = ratio <= 1.0 + c.tolerances.weil;
    worst = std::max(worst, ratio);
    r.passed = r.passed && ok;
    r.rows.push_back({q, s, ratio, std::string(status(ok))});
  }
  r.summary.push_back("Kloosterman S(" + std::to_string(k.m) + "," + std::to_string(k.n) + ";c), c <= " +
                      std::to_string(k.c_max) + ": max |S|/Weil bound " + fmt("%.6f", worst));
  return r;
}

// the normalisation of w_T fixes diagonal/(T^2 nu(N)) only up to a constant, so
// the bracket is relative: max/min of the ratio over the rows stays within b
inline Report mass_table(const RunConfig& c) {
  Report r;
  SpectralWeight sw = c.weight.make();
  const double b = c.tolerances.mass_bracket;
  r.columns = {"N", "T", "diagonal", "diagonal_ratio", "eisenstein_re", "eisenstein_im", "bk_re", "bk_im",
               "bk_tail_bound", "total_re", "dominates", "status"};
  std::vector<GeometricBreakdown> gs;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (long N : c.task.N) {
    gs.push_back(total_mass(Level::make(N), sw, c.task.c_max));
    lo = std::min(lo, gs.back().diagonal_ratio);
    hi = std::max(hi, gs.back().diagonal_ratio);
  }
  bool bracket = lo > 0.0 && hi <= b * lo;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const GeometricBreakdown& g = gs[i];
    bool ok = bracket && (sw.T() < 11.0 || g.diagonal_dominates);
    r.passed = r.passed && ok;
    r.rows.push_back({c.task.N[i], sw.T(), g.diagonal, g.diagonal_ratio, g.eisenstein.real(), g.eisenstein.imag(),
                      g.bessel_kloosterman.real(), g.bessel_kloosterman.imag(), g.truncation_error_bound,
                      g.total.real(), static_cast<long>(g.diagonal_dominates), std::string(status(ok))});
    r.summary.push_back("N = " + std::to_string(c.task.N[i]) + ": diagonal/(T^2 nu(N)) = " +
                        fmt("%.6f", g.diagonal_ratio) + ", |eis| + |bk| = " +
                        fmt("%.4g", std::abs(g.eisenstein) + std::abs(g.bessel_kloosterman)) + " vs diagonal " +
                        fmt("%.4g", g.diagonal));
  }
  r.summary.push_back("ratio spread max/min = " + fmt("%.4f", hi / lo) + " (bracket " + fmt("%.2g", b) + ")");
  return r;
}

inline std::vector<std::string> report_columns() {
  return {"statistic", "value", "error_estimate", "R", "weight_desc", "ensemble_or_family"};
}

inline std::vector<Cell> report_cells(const DensityReport& d) {
  return {std::string(to_string(d.statistic)), d.value, d.error_estimate, d.R, d.weight_desc, d.ensemble_or_family};
}

inline Report density_predict(const RunConfig& c) {
  Report r;
  TestFunction phi = c.test_function.make();
  DensityReport d;
  d.value = predicted_one_level(*c.task.group, phi);
  d.weight_desc = phi.describe();
  d.ensemble_or_family = to_string(*c.task.group);
  d.R = std::numeric_limits<double>::infinity();
  r.columns = report_columns();
  r.columns.push_back("status");
  auto row = report_cells(d);
  row.push_back(std::string("PASS"));
  r.rows.push_back(row);
  r.summary.push_back(std::string("predicted one-level density, ") + to_string(*c.task.group) + ", " +
                      phi.describe() + ": " + fmt("%.12g", d.value));
  return r;
}

inline Report density_zeros(const RunConfig& c) {
  Report r;
  const TaskConfig& k = c.task;
  TestFunction phi = c.test_function.make();
  ZeroList z = load_zeros(k.file);
  ZeroTailModel tail{1.0, k.t.value_or(0.0)};
  std::vector<MaassFormRecord> forms;
  if (!k.forms.empty()) {
    forms = load_forms(k.forms);
    tail.level = static_cast<double>(select_form(forms, *k.t).level.N);
  }
  DensityReport zr = one_level_from_zeros(z, k.R, phi, tail);
  r.columns = report_columns();
  for (const char* s : {"prime_value", "prime_error", "difference", "budget", "status"}) r.columns.push_back(s);
  auto row = report_cells(zr);
  if (k.forms.empty()) {
    for (int i = 0; i < 4; ++i) row.push_back(std::numeric_limits<double>::quiet_NaN());
    row.push_back(std::string(zr.relative_error_infinite ? "EMPTY" : "PASS"));
    r.summary.push_back("zero side " + fmt("%.10g", zr.value) + " +- " + fmt("%.2g", zr.error_estimate));
  } else {
    const MaassFormRecord& f = select_form(forms, *k.t);
    DensityReport pr = one_level_prime_side(f, phi, k.R, k.p_max);
    double diff = zr.value - pr.value;
    double budget = zr.error_estimate + pr.error_estimate + c.tolerances.explicit_slack;
    bool ok = std::fabs(diff) <= budget;
    r.passed = ok;
    for (double v : {pr.value, pr.error_estimate, diff, budget}) row.push_back(v);
    row.push_back(std::string(status(ok)));
    r.summary.push_back("t = " + fmt("%.6f", f.t) + ": zero side " + fmt("%.8f", zr.value) + ", prime side " +
                        fmt("%.8f", pr.value) + ", difference " + fmt("%.2e", diff) + " (budget " +
                        fmt("%.2e", budget) + ")");
  }
  r.rows.push_back(row);
  return r;
}

inline Report density_family(const RunConfig& c) {
  Report r;
  const TaskConfig& k = c.task;
  TestFunction phi = c.test_function.make();
  SpectralWeight sw = c.weight.make();
  std::vector<MaassFormRecord> forms = load_forms(k.forms);
  require(!forms.empty(), errc::precondition, "density family: the forms file has no records");
  const Level& lv = forms.front().level;
  double R = k.R > 0.0 ? k.R : sw.T() * sw.T() * static_cast<double>(lv.N);
  GeometricBreakdown g = total_mass(lv, sw, k.c_max);
  FamilyAverage fa = averaged_one_level(forms, phi, sw, R, g.total.real(), ExplicitMode::exact, k.p_max);
  double target = phi.phi_hat(0.0) + 0.5 * phi.phi(0.0);
  double dev = fa.report.value - target;
  bool ok = std::fabs(dev) <= fa.report.error_estimate + c.tolerances.family_slack;
  r.passed = ok;
  r.columns = report_columns();
  for (const char* s : {"spectral_mass", "geometric_mass", "missing_fraction", "truncation_error", "target",
                        "deviation", "status"})
    r.columns.push_back(s);
  auto row = report_cells(fa.report);
  for (double v : {fa.spectral_mass, g.total.real(), fa.missing_fraction, fa.truncation_error, target, dev})
    row.push_back(v);
  row.push_back(std::string(status(ok)));
  r.rows.push_back(row);
  r.summary.push_back("family average over " + std::to_string(forms.size()) + " forms, " + sw.describe() + ", R = " +
                      fmt("%.6g", R) + ": " + fmt("%.6f", fa.report.value) + " +- " +
                      fmt("%.4g", fa.report.error_estimate) + " vs " + fmt("%.6f", target));
  r.summary.push_back("the records carry " + fmt("%.4g", 100.0 * (1.0 - fa.missing_fraction)) +
                      "% of the geometric mass; the rest enters the error as truncation");
  return r;
}

inline Report rmt_sample(const RunConfig& c) {
  Report r;
  const TaskConfig& k = c.task;
  TestFunction phi = c.test_function.make();
  Group g = *k.group;
  DensityReport d;
  double pred = std::numeric_limits<double>::quiet_NaN();
  if (g == Group::SO) {
    std::vector<EnsembleSpec> parts{{Group::SOeven, k.size, k.samples, c.seed},
                                    {Group::SOodd, k.size + 1, k.samples, c.seed + 1}};
    if (k.statistic == "two_level") {
      d = empirical_two_level(parts, phi, phi);
      pred = predicted_two_level(phi, phi, 0.5);
    } else {
      DensityReport a = empirical_one_level(parts[0], phi), b = empirical_one_level(parts[1], phi);
      d = a;
      d.value = 0.5 * (a.value + b.value);
      d.error_estimate = 0.5 * std::hypot(a.error_estimate, b.error_estimate);
      d.ensemble_or_family = a.ensemble_or_family + "+" + b.ensemble_or_family;
      d.terms = a.terms + b.terms;
      pred = 0.5 * (predicted_one_level(Group::SOeven, phi) + predicted_one_level(Group::SOodd, phi));
    }
  } else {
    EnsembleSpec s{g, k.size, k.samples, c.seed};
    if (k.statistic == "two_level") {
      d = empirical_two_level(s, phi, phi);
      if (g == Group::SOeven) pred = predicted_two_level(phi, phi, 0.0);
      if (g == Group::SOodd) pred = predicted_two_level(phi, phi, 1.0);
    } else {
      d = empirical_one_level(s, phi);
      pred = predicted_one_level(g, phi);
    }
  }
  bool have = std::isfinite(pred);
  double zsc = have && d.error_estimate > 0 ? (d.value - pred) / d.error_estimate
                                            : std::numeric_limits<double>::quiet_NaN();
  bool ok = !have || std::fabs(d.value - pred) <= c.tolerances.mc_sigma * d.error_estimate;
  r.passed = ok;
  r.columns = report_columns();
  for (const char* s : {"samples", "seed", "predicted", "z", "status"}) r.columns.push_back(s);
  auto row = report_cells(d);
  row.push_back(k.samples);
  row.push_back(std::to_string(c.seed));
  row.push_back(pred);
  row.push_back(zsc);
  row.push_back(std::string(have ? status(ok) : "UNCHECKED"));
  r.rows.push_back(row);
  r.summary.push_back(d.ensemble_or_family + " " + k.statistic + ", " + phi.describe() + ": " +
                      fmt("%.6f", d.value) + " +- " + fmt("%.2g", d.error_estimate) +
                      (have ? ", predicted " + fmt("%.6f", pred) + " (z = " + fmt("%.2f", zsc) + ")"
                            : std::string(", no closed form for this statistic")));
  return r;
}

inline Report kuznetsov_check(const RunConfig& c) {
  Report r;
  const TaskConfig& k = c.task;
  SpectralWeight sw = c.weight.make();
  std::vector<MaassFormRecord> forms = load_forms(k.forms);
  require(!forms.empty(), errc::precondition, "kuznetsov check: the forms file has no records");
  const Level& lv = forms.front().level;
  SpectralSide sp = spectral_side(forms, k.m, sw);
  double d = diagonal_term(k.m, lv, sw);
  cplx e = eisenstein_term(k.m, lv, sw);
  BesselKloostermanResult bk = bessel_kloosterman_term(k.m, lv, sw, k.c_max);
  cplx geo = d + e + bk.value;
  double diff = sp.value - geo.real();
  double allowed = bk.tail_bound + c.tolerances.kuznetsov_abs;
  bool ok = std::fabs(diff) <= allowed;
  r.passed = ok;
  r.columns = {"m", "N", "weight", "spectral", "diagonal", "eisenstein", "bessel_kloosterman", "tail_bound",
               "geometric", "difference", "allowed", "status"};
  r.rows.push_back({k.m, static_cast<long>(lv.N), sw.describe(), sp.value, d, e.real(), bk.value.real(),
                    bk.tail_bound, geo.real(), diff, allowed, std::string(status(ok))});
  r.summary.push_back("Kuznetsov, m = " + std::to_string(k.m) + ", " + sw.describe() + ": spectral " +
                      fmt("%.10g", sp.value) + " over " + std::to_string(sp.forms) + " forms, geometric " +
                      fmt("%.10g", geo.real()) + ", difference " + fmt("%.3e", diff) + " (allowed " +
                      fmt("%.3e", allowed) + ")");
  return r;
}

}  // namespace taskimpl

inline Report run(const RunConfig& c);

namespace taskimpl {

inline Report suite(const RunConfig& c) {
  using json = nlohmann::json;
  const std::string dd = c.task.data_dir;
  const std::string forms = dd + "/level1.maass";
  std::vector<MaassFormRecord> recs = load_forms(forms);
  require(!recs.empty(), errc::precondition, "suite: no bundled forms");
  const MaassFormRecord& f0 = recs.front();
  std::vector<json> jobs{
      {{"weight", {{"family", "hT"}, {"T", 5}}}, {"task", {{"name", "verify contour"}}}},
      {{"weight", {{"family", "HT"}, {"T", 5}}}, {"task", {{"name", "verify contour"}}}},
      {{"weight", {{"family", "hT"}, {"T", 11}}}, {"task", {{"name", "verify expsum"}}}},
      {{"task", {{"name", "kloosterman"}, {"m", 1}, {"n", 1}, {"c_max", 500}}}},
      {{"weight", {{"family", "hT"}, {"T", 11}}}, {"task", {{"name", "mass"}, {"N", {1, 6}}}}},
      {{"test_function", {{"eta", 0.8}}}, {"task", {{"name", "density predict"}, {"group", "SO"}}}},
      {{"test_function", {{"shape", "bump_squared"}, {"eta", 0.45}}},
       {"task",
        {{"name", "density zeros"},
         {"file", zeros_path_for(dd, f0.t)},
         {"R", 1.0 + f0.t * f0.t},
         {"forms", forms},
         {"t", f0.t}}}},
      {{"weight", {{"family", "hT"}, {"T", 12}}},
       {"test_function", {{"eta", 0.4}}},
       {"task", {{"name", "density family"}, {"forms", forms}}}},
      {{"test_function", {{"eta", 0.8}}},
       {"seed", c.seed},
       {"task", {{"name", "rmt sample"}, {"group", "U"}, {"size", 10}, {"samples", 2000}}}},
      {{"weight", {{"family", "hT"}, {"T", 1}}}, {"task", {{"name", "kuznetsov check"}, {"forms", forms}}}},
  };
  Report r;
  r.columns = {"task", "rows", "failed_rows", "status"};
  for (const json& j : jobs) {
    RunConfig sub = parse_run_config(j);
    sub.tolerances = c.tolerances;
    Report s = run(sub);
    long failed = 0;
    for (const auto& row : s.rows)
      if (std::get_if<std::string>(&row.back()) && std::get<std::string>(row.back()) == "FAIL") ++failed;
    r.rows.push_back({sub.task.name, static_cast<long>(s.rows.size()), failed, std::string(status(s.passed))});
    r.passed = r.passed && s.passed;
    for (const std::string& line : s.summary) r.summary.push_back(sub.task.name + ": " + line);
  }
  return r;
}

}  // namespace taskimpl

inline Report run(const RunConfig& c) {
  using namespace taskimpl;
  Report r;
  const std::string& t = c.task.name;
  if (t == "verify contour") r = verify_contour(c);
  else if (t == "verify expsum") r = verify_expsum(c);
  else if (t == "kloosterman") r = kloosterman_table(c);
  else if (t == "mass") r = mass_table(c);
  else if (t == "density predict") r = density_predict(c);
  else if (t == "density zeros") r = density_zeros(c);
  else if (t == "density family") r = density_family(c);
  else if (t == "rmt sample") r = rmt_sample(c);
  else if (t == "kuznetsov check") r = kuznetsov_check(c);
  else if (t == "suite") r = suite(c);
  else throw error(errc::config, "unknown task '" + t + "'");
  r.task = t;
  r.header.insert(r.header.begin(), {"maassden report", "task=" + t});
  if (t != "kloosterman" && t != "suite") {
    if (t != "density predict" && t != "rmt sample" && t != "density zeros") r.header.push_back("weight=" + c.weight.make().describe());
    if (t.rfind("density", 0) == 0 || t == "rmt sample") r.header.push_back("test_function=" + c.test_function.make().describe());
  }
  if (t == "rmt sample") r.header.push_back("seed=" + std::to_string(c.seed));
  r.header.push_back(std::string("result=") + (r.passed ? "PASS" : "FAIL"));
  return r;
}

inline void write_report(const Report& r, std::ostream& out) {
  TsvWriter w(out);
  for (const std::string& h : r.header) w.comment(h);
  w.columns(r.columns);
  for (const auto& row : r.rows) w.row(row);
}

// machine-readable failure for errors raised before or during a run
inline void write_error_report(const std::string& task, const error& e, std::ostream& out) {
  TsvWriter w(out);
  w.comment("maassden report");
  w.comment("task=" + task);
  w.comment("result=ERROR");
  w.columns({"error", "message"});
  w.row({std::string(errc_name(e.code())), std::string(e.what())});
}

}  // namespace maassden
