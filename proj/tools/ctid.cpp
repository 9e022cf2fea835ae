/*
   Copyright 2026 The ctid Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


// ctid: command-line front end. Tables go out as CSV (with a "# " provenance
// line) or JSON (with a "config" member); reports are always JSON.
//
// Exit codes: 0 ok, 1 validation error, 2 numeric failure, 3 verification
// failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctid/error.hpp"
#include "ctid/exponent.hpp"
#include "ctid/exponent_json.hpp"
#include "ctid/montecarlo.hpp"
#include "ctid/occupation.hpp"
#include "ctid/presets.hpp"
#include "ctid/report.hpp"
#include "ctid/scale.hpp"
#include "ctid/series.hpp"
#include "ctid/specials.hpp"
#include "ctid/verify.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";
constexpr int kExitVerification = 3;

struct Common {
  std::string preset;
  std::string exponent_file;
  std::optional<double> alpha;
  std::string out;
  std::string format = "csv";
};

/// "lo:hi:n" or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = ctid::detail::parse_number_list(text, ':');
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
      ctid::detail::fail_validation("grid must be lo:hi:n with integer n >= 1");
    }
    const auto n = static_cast<std::size_t>(parts[2]);
    if (n == 1) return {parts[0]};
    return ctid::linspace(parts[0], parts[1], n);
  }
  auto v = ctid::detail::parse_number_list(text);
  if (v.empty()) ctid::detail::fail_validation("empty grid");
  return v;
}

struct ResolvedExponent {
  ctid::LevyExponent psi;
  std::optional<double> default_alpha;
  json source;
};

ResolvedExponent resolve_exponent(const Common& c) {
  if (c.preset.empty() == c.exponent_file.empty()) {
    ctid::detail::fail_validation("give exactly one of --preset or --exponent");
  }
  if (!c.preset.empty()) {
    const auto p = ctid::parse_preset(c.preset);
    return {p.exponent, p.alpha, json{{"preset", c.preset}}};
  }
  std::ifstream in(c.exponent_file);
  if (!in) ctid::detail::fail_validation("cannot open exponent file '" + c.exponent_file + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    ctid::detail::fail_validation(std::string("exponent file is not valid JSON: ") + e.what());
  }
  return {ctid::exponent_from_json(j), std::nullopt, json{{"exponent_file", c.exponent_file}}};
}

double require_alpha(const Common& c, const ResolvedExponent& r) {
  if (c.alpha) return *c.alpha;
  if (r.default_alpha) return *r.default_alpha;
  ctid::detail::fail_validation("--alpha is required with --exponent");
}

json provenance(const std::string& command, const json& resolved) {
  return {{"tool", "ctid"}, {"version", kVersion}, {"command", command}, {"resolved", resolved}};
}

class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) const {
    if (dir_.empty()) {
      std::cout << content;
      return;
    }
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream f(path);
    if (!f) ctid::detail::fail_validation("cannot write '" + path.string() + "'");
    f << content;
  }

 private:
  std::string dir_;
};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::string render(const std::string& format, const json& header) const {
    if (format == "json") {
      json rs = json::array();
      for (const auto& r : rows) {
        json o = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) {
          o[columns[i]] = std::isfinite(r[i]) ? json(r[i]) : json(format_number(r[i]));
        }
        rs.push_back(o);
      }
      return json{{"config", header}, {"rows", rs}}.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# " << header.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
      os << "\n";
    }
    return os.str();
  }
};

void add_common(CLI::App* s, Common& c, bool with_alpha = true) {
  s->add_option("--preset", c.preset, "bessel:nu | killed-bessel:nu,kappa | stable:alpha | tee-stable:alpha,beta | sawtooth:gamma,kappa");
  s->add_option("--exponent", c.exponent_file, "exponent JSON file");
  if (with_alpha) s->add_option("--alpha", c.alpha, "self-similarity index");
  s->add_option("--out", c.out, "output directory (default: stdout)");
  s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

// ---------------------------------------------------------------- exponent

struct ExponentOpts {
  Common c;
  std::vector<double> tee;
  std::vector<double> esscher;
  bool describe = false;
  std::string u_grid = "0:10:11";
};

int run_exponent(CLI::App* sub, const ExponentOpts& o) {
  auto r = resolve_exponent(o.c);
  ctid::LevyExponent psi = r.psi;
  json applied = json::array();
  std::size_t it = 0;
  std::size_t ie = 0;
  for (const CLI::Option* opt : sub->parse_order()) {
    if (opt->get_name() == "--tee") {
      const double b = o.tee.at(it++);
      psi = ctid::tee_transform(psi, b);
      applied.push_back({{"tee", b}});
    } else if (opt->get_name() == "--esscher") {
      const double b = o.esscher.at(ie++);
      psi = ctid::esscher(psi, b);
      applied.push_back({{"esscher", b}});
    }
  }
  json resolved = r.source;
  resolved["transforms"] = applied;
  const Output out(o.c.out);
  if (o.describe) {
    json d;
    d["config"] = provenance("exponent", resolved);
    d["exponent"] = ctid::to_json(psi);
    d["simplified"] = ctid::to_json(psi.simplified());
    if (const auto rf = psi.rational()) {
      json jumps = json::array();
      for (const auto& j : rf->jumps) jumps.push_back({{"rate", j.rate}, {"jump_scale", j.jump_scale}});
      d["rational"] = {{"sigma2", rf->sigma2}, {"drift", rf->drift}, {"killing", rf->killing}, {"jumps", jumps}};
    }
    const auto diag = ctid::validate(psi, parse_grid(o.u_grid));
    d["diagnostics"] = {{"psi_at_zero", diag.psi_at_zero},
                        {"killing", diag.killing},
                        {"derivative_at_zero", diag.derivative_at_zero},
                        {"convex", diag.convex()}};
    if (diag.theta) d["diagnostics"]["theta"] = *diag.theta;
    if (!diag.theta_error.empty()) d["diagnostics"]["theta_error"] = diag.theta_error;
    out.write("exponent.json", d.dump(2) + "\n");
    return 0;
  }
  Table t{{"u", "psi", "dpsi"}, {}};
  for (double u : parse_grid(o.u_grid)) t.rows.push_back({u, psi(u), psi.derivative(u)});
  resolved["u_grid"] = o.u_grid;
  out.write("exponent." + o.c.format, t.render(o.c.format, provenance("exponent", resolved)));
  return 0;
}

// ------------------------------------------------------------------ series

struct SeriesOpts {
  Common c;
  std::string z_grid = "0:10:11";
  std::size_t coefficients = 0;
  bool hitting = false;
  double a = 1.0;
  std::string q = "1";
  std::string x_grid = "0:1:11";
};

int run_series(const SeriesOpts& o) {
  const auto r = resolve_exponent(o.c);
  const double alpha = require_alpha(o.c, r);
  const ctid::SeriesEvaluator se(r.psi, alpha);
  json resolved = r.source;
  resolved["alpha"] = alpha;
  resolved["theta"] = se.theta();
  const Output out(o.c.out);
  Table t;
  if (o.coefficients > 0) {
    resolved["coefficients"] = o.coefficients;
    t.columns = {"n", "a_n"};
    const auto cs = se.coefficients(o.coefficients);
    for (std::size_t n = 0; n < cs.size(); ++n) t.rows.push_back({static_cast<double>(n), cs[n]});
  } else if (o.hitting) {
    resolved["a"] = o.a;
    resolved["q"] = o.q;
    resolved["x_grid"] = o.x_grid;
    t.columns = {"x", "q", "hitting_laplace"};
    for (double q : parse_grid(o.q)) {
      for (double x : parse_grid(o.x_grid)) t.rows.push_back({x, q, ctid::hitting_laplace(se, x, o.a, q)});
    }
  } else {
    resolved["z_grid"] = o.z_grid;
    t.columns = {"z", "value", "terms_used", "tail_bound"};
    for (double z : parse_grid(o.z_grid)) {
      const auto v = se.eval(z);
      t.rows.push_back({z, v.value, static_cast<double>(v.terms_used), v.tail_bound});
    }
  }
  out.write("series." + o.c.format, t.render(o.c.format, provenance("series", resolved)));
  return 0;
}

// ------------------------------------------------------------------- scale

struct ScaleOpts {
  Common c;
  std::string x_grid = "0:5:51";
  std::string method = "auto";
  bool ruin = false;
  std::vector<double> overshoot;
};

int run_scale(const ScaleOpts& o) {
  const auto r = resolve_exponent(o.c);
  json resolved = r.source;
  ctid::LevyExponent base = r.psi;
  if (o.c.alpha) {
    base = ctid::tee_transform(r.psi, *o.c.alpha).simplified();
    resolved["alpha"] = *o.c.alpha;
    resolved["scale_of"] = "tee_transform(psi, alpha)";
  } else {
    resolved["scale_of"] = "psi";
  }
  if (o.ruin && !o.c.alpha) ctid::detail::fail_validation("--ruin needs --alpha");
  std::optional<ctid::ScaleMethod> m;
  if (o.method == "closed") m = ctid::ScaleMethod::closed_form;
  if (o.method == "talbot") m = ctid::ScaleMethod::talbot;
  const ctid::ScaleFunction W(base, m);
  resolved["method"] = o.method == "both" ? "both" : (W.method() == ctid::ScaleMethod::closed_form ? "closed" : "talbot");
  resolved["x_grid"] = o.x_grid;
  resolved["overshoot_u"] = o.overshoot;
  Table t;
  t.columns = {"x", "W"};
  if (o.method == "both") {
    if (!W.has_closed_form()) ctid::detail::fail_validation("--method both needs a rational exponent");
    t.columns.insert(t.columns.end(), {"W_closed", "W_talbot", "abs_diff"});
  }
  if (o.ruin) t.columns.insert(t.columns.end(), {"y", "ruin_probability"});
  for (double u : o.overshoot) t.columns.push_back("overshoot_u=" + format_number(u));
  for (double x : parse_grid(o.x_grid)) {
    std::vector<double> row{x, W(x)};
    if (o.method == "both") {
      const double c = W.closed_form(x);
      const double tb = x < 0.0 ? 0.0 : W.talbot_checked(x);
      row.insert(row.end(), {c, tb, std::abs(c - tb)});
    }
    if (o.ruin) {
      const double y = std::exp(x);
      row.insert(row.end(), {y, ctid::ruin_probability(W, y)});
    }
    for (double u : o.overshoot) row.push_back(ctid::overshoot_transform(W, x, u));
    t.rows.push_back(row);
  }
  Output(o.c.out).write("scale." + o.c.format, t.render(o.c.format, provenance("scale", resolved)));
  return 0;
}

// -------------------------------------------------------------- occupation

struct OccupationOpts {
  Common c;
  double a = 1.0;
  std::string q = "1";
  std::string x_grid = "0:3:31";
};

int run_occupation(const OccupationOpts& o) {
  const auto r = resolve_exponent(o.c);
  const double alpha = require_alpha(o.c, r);
  const ctid::OccupationEvaluator ev(r.psi, alpha);
  json resolved = r.source;
  resolved.update({{"alpha", alpha}, {"a", o.a}, {"q", o.q}, {"x_grid", o.x_grid}});
  Table t{{"x", "q", "occupation_laplace"}, {}};
  for (double q : parse_grid(o.q)) {
    for (double x : parse_grid(o.x_grid)) t.rows.push_back({x, q, ev(x, o.a, q)});
  }
  Output(o.c.out).write("occupation." + o.c.format, t.render(o.c.format, provenance("occupation", resolved)));
  return 0;
}

// ---------------------------------------------------------------- specials

struct SpecialsOpts {
  std::string family;
  std::string params;
  std::string x_grid = "0:10:11";
  std::string conformance;
  std::string out;
  std::string format = "csv";
};

int run_specials(const SpecialsOpts& o) {
  const Output out(o.out);
  if (!o.conformance.empty()) {
    const auto rep = ctid::conformance_suite(o.conformance);
    json checks = json::array();
    for (const auto& c : rep.checks) {
      checks.push_back(
          {{"name", c.name}, {"max_rel_error", c.max_rel_error}, {"worst_x", c.worst_x}, {"points", c.points}});
    }
    const json j{{"config", provenance("specials", {{"conformance", o.conformance}, {"points", 200}, {"x_max", 50}})},
                 {"checks", checks},
                 {"tolerance", rep.tolerance},
                 {"max_rel_error", rep.max_rel_error()},
                 {"passed", rep.passed()}};
    out.write("conformance.json", j.dump(2) + "\n");
    return rep.passed() ? 0 : kExitVerification;
  }
  if (o.family.empty()) ctid::detail::fail_validation("give --family or --conformance");
  ctid::SpecialFnParams p{ctid::parse_special_family(o.family), ctid::detail::parse_number_list(o.params)};
  Table t{{"x", "value"}, {}};
  for (double x : parse_grid(o.x_grid)) t.rows.push_back({x, ctid::eval_special(p, x)});
  const json resolved{{"family", o.family}, {"params", p.params}, {"x_grid", o.x_grid}};
  out.write("specials." + o.format, t.render(o.format, provenance("specials", resolved)));
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  Common c;
  std::string config_file;
  std::string mode = "hitting";
  std::optional<double> x0, a, h, s_max, return_tol;
  std::optional<std::size_t> paths;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  bool no_bridge = false;
  bool tee = false;
  bool per_path = false;
  std::string q = "0.5,1,2";
};

int run_simulate(const SimulateOpts& o) {
  ctid::SimConfig cfg;
  std::string mode = o.mode;
  json file = json::object();
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) ctid::detail::fail_validation("cannot open config '" + o.config_file + "'");
    try {
      in >> file;
    } catch (const json::exception& e) {
      ctid::detail::fail_validation(std::string("config is not valid JSON: ") + e.what());
    }
  }
  std::optional<double> default_alpha;
  if (!o.c.preset.empty() || !o.c.exponent_file.empty()) {
    const auto r = resolve_exponent(o.c);
    cfg.exponent = r.psi;
    default_alpha = r.default_alpha;
  } else if (file.contains("exponent")) {
    const auto& e = file["exponent"];
    if (e.is_string()) {
      const auto p = ctid::parse_preset(e.get<std::string>());
      cfg.exponent = p.exponent;
      default_alpha = p.alpha;
    } else {
      cfg.exponent = ctid::exponent_from_json(e);
    }
  } else {
    ctid::detail::fail_validation("no exponent: give --preset, --exponent or an exponent in --config");
  }
  auto num = [&](const char* k, double d) { return file.contains(k) ? file[k].get<double>() : d; };
  try {
    cfg.alpha = o.c.alpha ? *o.c.alpha : num("alpha", default_alpha.value_or(cfg.alpha));
    cfg.x0 = o.x0 ? *o.x0 : num("x0", cfg.x0);
    cfg.a = o.a ? *o.a : num("a", cfg.a);
    cfg.h = o.h ? *o.h : num("h", cfg.h);
    cfg.s_max = o.s_max ? *o.s_max : num("s_max", cfg.s_max);
    cfg.return_tol = o.return_tol ? *o.return_tol : num("return_tol", cfg.return_tol);
    cfg.n_paths = o.paths ? *o.paths : file.value("paths", cfg.n_paths);
    cfg.seed = o.seed ? *o.seed : file.value("seed", cfg.seed);
    cfg.stream = file.value("stream", cfg.stream);
    cfg.bridge = o.no_bridge ? false : file.value("bridge", true);
    if (file.contains("t_max") && file["t_max"].is_number()) cfg.t_max = file["t_max"].get<double>();
    if (file.contains("mode") && o.mode == "hitting") mode = file["mode"].get<std::string>();
  } catch (const json::exception& e) {
    ctid::detail::fail_validation(std::string("bad config field: ") + e.what());
  }
  const bool tee = o.tee || file.value("tee", false);
  if (tee) cfg.exponent = ctid::tee_transform(cfg.exponent, cfg.alpha).simplified();
  cfg.workers = o.workers;

  json summary;
  json resolved = ctid::to_json(cfg);
  resolved["mode"] = mode;
  resolved["tee"] = tee;
  summary["config"] = provenance("simulate", resolved);
  const auto q_grid = parse_grid(o.q);
  std::ostringstream csv;
  csv << "# " << summary["config"].dump() << "\n";
  if (mode == "hitting" || mode == "occupation") {
    const auto e = mode == "hitting" ? ctid::estimate_hitting(cfg) : ctid::estimate_occupation(cfg);
    json lap = json::array();
    for (const auto& l : ctid::empirical_laplace(e, q_grid)) {
      lap.push_back({{"q", l.q}, {"mean", l.mean}, {"stderr", l.std_err}, {"lower_bound", l.lower}});
    }
    summary["laplace"] = lap;
    summary["censored"] = e.censored();
    summary["censored_fraction"] = e.censored_fraction();
    if (mode == "occupation") {
      summary["stop_height"] = e.stop_height;
      summary["truncation_bias_bound"] = cfg.return_tol;
    }
    if (mode == "hitting" && e.censored_fraction() > ctid::kCensoringWarnFraction) {
      summary["warning"] = "censoring fraction exceeds 1%";
    }
    csv << "path," << (mode == "hitting" ? "hit_time" : "occupation") << ",censored,terminal_below_a\n";
    for (std::size_t i = 0; i < e.records.size(); ++i) {
      const auto& rec = e.records[i];
      csv << i << "," << format_number(rec.value) << "," << rec.censored << "," << rec.terminal_below_a << "\n";
    }
  } else if (mode == "passage") {
    double stop = 0.0;
    const auto recs = ctid::estimate_passage(cfg, &stop);
    const auto f = ctid::ruin_frequency(recs);
    summary["never_below_a"] = {{"mean", f.mean}, {"stderr", f.std_err}, {"censored", f.censored}};
    summary["stop_height"] = stop;
    json lap = json::array();
    for (double q : q_grid) {
      const auto p = ctid::passage_laplace(recs, q);
      lap.push_back({{"u", q}, {"mean", p.mean}, {"stderr", p.std_err}});
    }
    summary["undershoot_transform"] = lap;
    csv << "path,passed,censored,undershoot\n";
    for (std::size_t i = 0; i < recs.size(); ++i) {
      csv << i << "," << recs[i].passed << "," << recs[i].censored << "," << format_number(recs[i].undershoot) << "\n";
    }
  } else {
    ctid::detail::fail_validation("mode must be hitting, occupation or passage");
  }
  const Output out(o.c.out);
  if (o.per_path) {
    if (o.c.out.empty()) ctid::detail::fail_validation("--per-path needs --out");
    out.write("paths.csv", csv.str());
  }
  out.write("summary.json", summary.dump(2) + "\n");
  return 0;
}

// ------------------------------------------------------------------ verify

struct VerifyOpts {
  Common c;
  bool analytic = false;
  bool mc = false;
  double a = 1.0;
  std::string q = "0.5,1,2";
  std::size_t paths = 100000;
  double h = 5e-4;
  std::uint64_t seed = 42;
  unsigned workers = 0;
  double x0_factor = 1e-3;
  int ks_attempts = 3;
  double return_tol = 1e-4;
  bool entrance_probe = false;
};

int run_verify(const VerifyOpts& o) {
  if (o.analytic && o.mc) ctid::detail::fail_validation("give one of --analytic or --mc");
  const auto r = resolve_exponent(o.c);
  const double alpha = require_alpha(o.c, r);
  const auto q = parse_grid(o.q);
  ctid::CTReport rep;
  if (o.mc) {
    ctid::McVerifyConfig v;
    v.psi = r.psi;
    v.alpha = alpha;
    v.a = o.a;
    v.q_grid = q;
    v.paths = o.paths;
    v.h = o.h;
    v.seed = o.seed;
    v.workers = o.workers;
    v.x0_factor = o.x0_factor;
    v.ks_attempts = o.ks_attempts;
    v.return_tol = o.return_tol;
    v.entrance_probe = o.entrance_probe;
    rep = ctid::ct_mc_verdict(v);
  } else {
    rep = ctid::ct_analytic_verdict(r.psi, alpha, o.a, q);
  }
  json j = ctid::to_json(rep);
  j["provenance"] = provenance("verify", r.source);
  Output(o.c.out).write("report.json", j.dump(2) + "\n");
  return rep.passed() ? 0 : kExitVerification;
}

int emit_error(const std::string& kind, const std::string& message, int code) {
  const json j{{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ciesielski-Taylor identity toolkit for self-similar Markov processes"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ExponentOpts eo;
  auto* s_exp = app.add_subcommand("exponent", "evaluate and transform a Laplace exponent");
  add_common(s_exp, eo.c, false);
  s_exp->add_option("--tee", eo.tee, "apply T_beta (repeatable, applied in order)");
  s_exp->add_option("--esscher", eo.esscher, "apply the Esscher transform (repeatable)");
  s_exp->add_flag("--describe", eo.describe, "print the simplified parameters and diagnostics as JSON");
  s_exp->add_option("--u-grid", eo.u_grid, "u grid, lo:hi:n or a,b,c");

  SeriesOpts so;
  auto* s_ser = app.add_subcommand("series", "the entire function I_{psi,alpha}");
  add_common(s_ser, so.c);
  s_ser->add_option("--z-grid", so.z_grid);
  s_ser->add_option("--coefficients", so.coefficients, "print the first n coefficients");
  s_ser->add_flag("--hitting", so.hitting, "tabulate E_x[exp(-q T_a)] on --x-grid");
  s_ser->add_option("--a", so.a);
  s_ser->add_option("--q", so.q);
  s_ser->add_option("--x-grid", so.x_grid);

  ScaleOpts sco;
  auto* s_sc = app.add_subcommand("scale", "scale function W (of T_alpha psi when --alpha is given)");
  add_common(s_sc, sco.c);
  s_sc->add_option("--x-grid", sco.x_grid);
  s_sc->add_option("--method", sco.method)->check(CLI::IsMember({"auto", "closed", "talbot", "both"}));
  s_sc->add_flag("--ruin", sco.ruin, "add ruin probability at y = exp(x)");
  s_sc->add_option("--overshoot", sco.overshoot, "add overshoot transform columns at these u")->delimiter(',');

  OccupationOpts oo;
  auto* s_occ = app.add_subcommand("occupation", "Laplace transform of the occupation time below a");
  add_common(s_occ, oo.c);
  s_occ->add_option("--a", oo.a);
  s_occ->add_option("--q", oo.q);
  s_occ->add_option("--x-grid", oo.x_grid);

  SpecialsOpts spo;
  auto* s_sp = app.add_subcommand("specials", "special functions and conformance against the series");
  s_sp->add_option("--family", spo.family, "bessel_i | mittag_leffler | hyp1f1 | hyp1f2 | wright_1psi1");
  s_sp->add_option("--params", spo.params, "comma-separated parameters");
  s_sp->add_option("--x-grid", spo.x_grid);
  s_sp->add_option("--conformance", spo.conformance, "preset to check, e.g. bessel:3");
  s_sp->add_option("--out", spo.out);
  s_sp->add_option("--format", spo.format)->check(CLI::IsMember({"csv", "json"}));

  SimulateOpts sio;
  auto* s_sim = app.add_subcommand("simulate", "Monte Carlo ensembles");
  add_common(s_sim, sio.c);
  s_sim->add_option("--config", sio.config_file, "SimConfig JSON");
  s_sim->add_option("--mode", sio.mode)->check(CLI::IsMember({"hitting", "occupation", "passage"}));
  s_sim->add_option("--x0", sio.x0);
  s_sim->add_option("--a", sio.a);
  s_sim->add_option("--h", sio.h);
  s_sim->add_option("--s-max", sio.s_max);
  s_sim->add_option("--return-tol", sio.return_tol);
  s_sim->add_option("--paths", sio.paths);
  s_sim->add_option("--seed", sio.seed);
  s_sim->add_option("--workers", sio.workers);
  s_sim->add_option("--q", sio.q, "q grid for the empirical transforms");
  s_sim->add_flag("--no-bridge", sio.no_bridge, "disable the in-cell Brownian-bridge correction");
  s_sim->add_flag("--tee", sio.tee, "simulate T_alpha psi instead of psi");
  s_sim->add_flag("--per-path", sio.per_path, "also write paths.csv");

  VerifyOpts vo;
  auto* s_ver = app.add_subcommand("verify", "check the identity analytically or by Monte Carlo");
  add_common(s_ver, vo.c);
  s_ver->add_flag("--analytic", vo.analytic);
  s_ver->add_flag("--mc", vo.mc);
  s_ver->add_option("--a", vo.a);
  s_ver->add_option("--q", vo.q);
  s_ver->add_option("--paths", vo.paths);
  s_ver->add_option("--h", vo.h);
  s_ver->add_option("--seed", vo.seed);
  s_ver->add_option("--workers", vo.workers, "does not affect results");
  s_ver->add_option("--x0-factor", vo.x0_factor);
  s_ver->add_option("--ks-attempts", vo.ks_attempts);
  s_ver->add_option("--return-tol", vo.return_tol);
  s_ver->add_flag("--entrance-probe", vo.entrance_probe, "rerun hitting from 2 x0 and report the shift");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("validation", e.what(), 1);
  }

  try {
    if (*s_exp) return run_exponent(s_exp, eo);
    if (*s_ser) return run_series(so);
    if (*s_sc) return run_scale(sco);
    if (*s_occ) return run_occupation(oo);
    if (*s_sp) return run_specials(spo);
    if (*s_sim) return run_simulate(sio);
    if (*s_ver) return run_verify(vo);
  } catch (const ctid::validation_error& e) {
    return emit_error("validation", e.what(), 1);
  } catch (const ctid::numeric_error& e) {
    return emit_error("numeric", e.what(), 2);
  } catch (const std::filesystem::filesystem_error& e) {
    return emit_error("validation", e.what(), 1);
  } catch (const std::exception& e) {
    return emit_error("numeric", e.what(), 2);
  }
  return 0;
}
