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

#pragma once

// Empirical Ciesielski-Taylor comparison: T_a under psi against the
// occupation time of [0, a] under T_alpha psi, both started near 0.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"
#include "ctid/exponent_json.hpp"
#include "ctid/ks.hpp"
#include "ctid/montecarlo.hpp"
#include "ctid/report.hpp"
#include "ctid/scale.hpp"
#include "ctid/series.hpp"

namespace ctid {

struct McVerifyConfig {
  LevyExponent psi = quadratic_exponent(1.0, 0.5);
  double alpha = 2.0;
  double a = 1.0;
  double x0_factor = 1e-3;  // entrance law approximated by x0 = x0_factor * a
  std::vector<double> q_grid{0.5, 1.0, 2.0};
  std::size_t paths = 100000;
  double h = 5e-4;
  std::uint64_t seed = 42;
  unsigned workers = 0;
  int ks_attempts = 3;
  double ks_level = 0.01;
  double return_tol = 1e-4;
  double s_max = 500.0;
  bool entrance_probe = false;
};

inline constexpr double kCensoringWarnFraction = 0.01;

namespace detail {

inline SimConfig sim_config(const McVerifyConfig& v, const LevyExponent& e, std::uint32_t stream) {
  SimConfig c;
  c.exponent = e;
  c.alpha = v.alpha;
  c.a = v.a;
  c.x0 = v.x0_factor * v.a;
  c.h = v.h;
  c.s_max = v.s_max;
  c.n_paths = v.paths;
  c.seed = v.seed;
  c.stream = stream;
  c.return_tol = v.return_tol;
  c.workers = v.workers;
  return c;
}

}  // namespace detail

inline CTReport ct_mc_verdict(const McVerifyConfig& v) {
  if (!(v.x0_factor > 0.0 && v.x0_factor < 1.0)) detail::fail_validation("x0_factor must lie in (0, 1)");
  if (v.ks_attempts < 1) detail::fail_validation("ks_attempts must be >= 1");
  if (killing_rate(v.psi) > 0.0) detail::fail_validation("killed exponents are verified analytically only");
  const SeriesEvaluator series(v.psi, v.alpha);
  const LevyExponent tee = tee_transform(v.psi, v.alpha).simplified();

  CTReport r;
  r.mode = "mc";
  r.config = {{"exponent", to_json(v.psi)},
              {"tee_exponent", to_json(tee)},
              {"alpha", v.alpha},
              {"a", v.a},
              {"x0", v.x0_factor * v.a},
              {"q", v.q_grid},
              {"paths", v.paths},
              {"h", v.h},
              {"seed", v.seed},
              {"s_max", v.s_max},
              {"return_tol", v.return_tol},
              {"ks_attempts", v.ks_attempts},
              {"ks_level", v.ks_level}};
  auto warnings = nlohmann::json::array();
  auto ks_log = nlohmann::json::array();
  bool ks_passed = false;
  double ks_p = 0.0;

  for (int attempt = 0; attempt < v.ks_attempts && !ks_passed; ++attempt) {
    const auto stream = static_cast<std::uint32_t>(attempt);
    const PathEnsemble hit = estimate_hitting(detail::sim_config(v, v.psi, stream));
    const PathEnsemble occ = estimate_occupation(detail::sim_config(v, tee, stream));

    if (attempt == 0) {
      const auto lh = empirical_laplace(hit, v.q_grid);
      const auto lo = empirical_laplace(occ, v.q_grid);
      double worst_h = 0.0;
      double worst_o = 0.0;
      for (std::size_t i = 0; i < v.q_grid.size(); ++i) {
        EmpiricalRow row;
        row.q = v.q_grid[i];
        row.target = 1.0 / series(detail::scaled_power(row.q, v.a, v.alpha));
        row.hitting_mean = lh[i].mean;
        row.hitting_stderr = lh[i].std_err;
        row.hitting_lower = lh[i].lower;
        row.occupation_mean = lo[i].mean;
        row.occupation_stderr = lo[i].std_err;
        row.occupation_lower = lo[i].lower;
        worst_h = std::max(worst_h, std::abs(row.hitting_mean - row.target) / (3.0 * row.hitting_stderr + 2.0 * v.h));
        worst_o =
            std::max(worst_o, std::abs(row.occupation_mean - row.target) / (3.0 * row.occupation_stderr + 2.0 * v.h));
        row.allowance = 3.0 * std::max(row.hitting_stderr, row.occupation_stderr) + 2.0 * v.h;
        r.empirical.push_back(row);
      }
      r.criteria.push_back({"hitting-time Laplace transform within 3 stderr + 2h", worst_h <= 1.0, worst_h, 1.0,
                            "max |mean - target| / (3 stderr + 2h) over q"});
      r.criteria.push_back({"occupation-time Laplace transform within 3 stderr + 2h", worst_o <= 1.0, worst_o, 1.0,
                            "max |mean - target| / (3 stderr + 2h) over q"});
      r.extras["hitting_censored"] = hit.censored();
      r.extras["occupation_truncated"] = occ.censored();
      r.extras["occupation_stop_height"] = occ.stop_height;
      r.extras["occupation_truncation_bias_bound"] = v.return_tol;
      if (hit.censored_fraction() > kCensoringWarnFraction) {
        warnings.push_back("hitting censoring fraction " + std::to_string(hit.censored_fraction()) + " exceeds 1%");
      }
      if (occ.censored_fraction() > kCensoringWarnFraction) {
        warnings.push_back("occupation truncation fraction " + std::to_string(occ.censored_fraction()) +
                           " exceeds 1%");
      }
      if (v.entrance_probe) {
        McVerifyConfig d = v;
        d.x0_factor = 2.0 * v.x0_factor;
        const PathEnsemble hit2 = estimate_hitting(detail::sim_config(d, v.psi, stream));
        const auto l2 = empirical_laplace(hit2, v.q_grid);
        auto probe = nlohmann::json::array();
        bool stable = true;
        for (std::size_t i = 0; i < v.q_grid.size(); ++i) {
          const double diff = l2[i].mean - lh[i].mean;
          stable = stable && std::abs(diff) < lh[i].std_err;
          probe.push_back({{"q", v.q_grid[i]}, {"doubled_x0_mean", l2[i].mean}, {"difference", diff},
                           {"stderr", lh[i].std_err}});
        }
        r.extras["entrance_probe"] = {{"x0_doubled", d.x0_factor * v.a}, {"rows", probe}, {"stable", stable},
                                      {"note", "heuristic; same random numbers at both starts"}};
        if (!stable) warnings.push_back("entrance-law probe moved the estimate by more than 1 stderr");
      }
    }

    const KSResult ks = ks_two_sample(hit.uncensored_values(), occ.uncensored_values());
    ks_log.push_back({{"attempt", attempt},
                      {"D", ks.statistic},
                      {"p_value", ks.p_value},
                      {"n_hitting", ks.n_a},
                      {"n_occupation", ks.n_b},
                      {"excluded_censored", (v.paths - ks.n_a) + (v.paths - ks.n_b)}});
    ks_p = ks.p_value;
    ks_passed = ks.p_value > v.ks_level;
  }
  r.criteria.push_back({"two-sample KS between hitting and occupation ensembles", ks_passed, ks_p, v.ks_level,
                        "p-value of the last attempt; up to " + std::to_string(v.ks_attempts) + " attempts"});
  r.extras["ks"] = ks_log;
  r.extras["warnings"] = warnings;
  return r;
}

struct RuinCheck {
  double y = 0.0;
  double analytic = 0.0;
  ProportionEstimate empirical;
  double stop_height = 0.0;
  [[nodiscard]] double z() const { return (empirical.mean - analytic) / empirical.std_err; }
  [[nodiscard]] bool passed() const { return std::abs(empirical.mean - analytic) <= 3.0 * empirical.std_err; }
};

/// Empirical frequency of X under T_alpha psi never going below 1 from y,
/// against ruin_probability.
inline RuinCheck ruin_mc_verdict(const LevyExponent& psi, double alpha, double y, std::size_t paths, double h,
                                 std::uint64_t seed, unsigned workers = 0, double return_tol = 1e-4) {
  if (!(y > 1.0)) detail::fail_validation("ruin start y must be > 1");
  const ScaleFunction W = tee_scale_function(psi, alpha);
  SimConfig c;
  c.exponent = W.exponent();
  c.alpha = alpha;
  c.x0 = y;
  c.a = 1.0;
  c.h = h;
  c.n_paths = paths;
  c.seed = seed;
  c.workers = workers;
  c.return_tol = return_tol;
  RuinCheck out;
  out.y = y;
  out.analytic = ruin_probability(W, y);
  out.empirical = ruin_frequency(estimate_passage(c, &out.stop_height));
  return out;
}

}  // namespace ctid
