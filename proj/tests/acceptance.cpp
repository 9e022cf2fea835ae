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


// One pass/fail line per acceptance criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "ctid/exponent.hpp"
#include "ctid/numerics.hpp"
#include "ctid/occupation.hpp"
#include "ctid/presets.hpp"
#include "ctid/scale.hpp"
#include "ctid/series.hpp"
#include "ctid/specials.hpp"
#include "ctid/verify.hpp"

using namespace ctid;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = o.passed && secs < budget_s;
  if (!ok) ++failures;
  std::printf("[%s] %d %s: %s; runtime %.2f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(),
              secs, budget_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const std::vector<double> kQ{0.5, 1.0, 2.0};

Outcome transform_algebra() {
  const auto grid = linspace(0.0, 10.0, 201);
  double worst = 0.0;
  for (const char* p : {"bessel:1", "bessel:3", "killed-bessel:3,1", "stable:1.5", "sawtooth:3,1"}) {
    const auto psi = parse_preset(p).exponent;
    for (double b : {0.5, 1.0, 2.0}) {
      for (double g : {0.5, 1.0, 2.0}) {
        const auto lhs = tee_transform(tee_transform(psi, g), b);
        const auto rhs = tee_transform(psi, b + g);
        for (double u : grid) {
          const double r = rhs(u);
          worst = std::max(worst, std::abs(lhs(u) - r) / (1.0 + std::abs(r)));
        }
      }
    }
  }
  return {worst < 1e-12, fmt("max residual/(1+|value|) %.3g < %.0e", worst, 1e-12)};
}

Outcome bessel_closure() {
  const auto grid = linspace(0.0, 10.0, 201);
  double worst = 0.0;
  for (double nu : {1.0, 2.0, 3.0, 4.0}) {
    const auto lhs = tee_transform(bessel_exponent(nu), 2.0);
    const auto rhs = bessel_exponent(nu + 2.0);
    for (double u : grid) worst = std::max(worst, std::abs(lhs(u) - rhs(u)) / (1.0 + std::abs(rhs(u))));
  }
  return {worst < 1e-12, fmt("max residual/(1+|value|) %.3g < %.0e", worst, 1e-12)};
}

Outcome conformance() {
  double worst = 0.0;
  std::string at;
  for (const char* p : {"bessel:1", "bessel:3", "bessel:4.5", "killed-bessel:3,1", "killed-bessel:4,0.5", "stable:1.5",
                        "stable:1.2", "tee-stable:1.5,0.5", "tee-stable:1.8,1", "sawtooth:3,1", "sawtooth:2.5,0.3",
                        "sawtooth:1.5,0.7"}) {
    const auto r = conformance_suite(p, 200, 50.0);
    if (r.max_rel_error() >= worst) {
      worst = r.max_rel_error();
      at = p;
    }
  }
  return {worst < 1e-10, fmt("max relative error %.3g < %.0e", worst, 1e-10) + " (worst " + at + ")"};
}

Outcome scale_round_trip() {
  const auto grid = linspace(0.05, 5.0, 100);
  double inv = 0.0;
  double lap = 0.0;
  for (double nu : {1.0, 3.0}) {
    const auto phi = tee_transform(bessel_exponent(nu), 2.0).simplified();
    const ScaleFunction closed(phi, ScaleMethod::closed_form);
    const ScaleFunction talbot(phi, ScaleMethod::talbot);
    for (double x : grid) inv = std::max(inv, std::abs(talbot(x) - closed(x)) / std::abs(closed(x)));
    for (double u : {1.0, 2.0, 5.0}) {
      const double target = 1.0 / phi(u);
      for (const ScaleFunction* W : {&closed, &talbot}) {
        lap = std::max(lap, std::abs(scale_laplace_transform(*W, u) - target) / target);
      }
    }
  }
  return {inv < 1e-8 && lap < 1e-6,
          fmt("Talbot vs closed form %.3g < 1e-08, Laplace round trip %.3g < 1e-06", inv, lap)};
}

Outcome occupation_consistency() {
  double origin = 0.0;
  double factor = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  struct Case {
    const char* preset;
    double alpha;
  };
  for (const Case c : {Case{"bessel:3", 2.0}, Case{"sawtooth:3,1", 1.0}}) {
    const OccupationEvaluator ev(parse_preset(c.preset).exponent, c.alpha);
    for (double q : kQ) {
      origin = std::max(origin, std::abs(ev(0.0, 1.0, q) - 1.0 / ev.series()(q)));
      const double at_level = ev(1.0, 1.0, q);
      for (double x : {0.0, 0.25, 0.5, 0.75, 0.95}) {
        factor = std::max(factor, std::abs(ev(x, 1.0, q) - hitting_laplace(ev.tee_series(), x, 1.0, q) * at_level));
      }
      std::vector<double> gaps;
      for (double eps : {1e-3, 1e-4, 1e-5}) gaps.push_back(std::abs(ev(1.0 - eps, 1.0, q) - ev(1.0 + eps, 1.0, q)));
      for (int i = 0; i < 2; ++i) {
        lo = std::min(lo, gaps[i + 1] / gaps[i]);
        hi = std::max(hi, gaps[i + 1] / gaps[i]);
      }
    }
  }
  const bool ok = origin < 1e-12 && factor < 1e-10 && lo >= 0.05 && hi <= 0.2;
  return {ok, fmt("origin vs 1/I %.3g < 1e-12, factorization %.3g < 1e-10", origin, factor) +
                  fmt(", gap ratio per decade of eps in [%.4f, %.4f] within [0.05, 0.2]", lo, hi)};
}

Outcome ruin() {
  double analytic = 0.0;
  double worst_z = 0.0;
  bool mc_ok = true;
  for (double nu : {1.0, 3.0}) {
    for (double y : {1.5, 2.0, 4.0}) {
      analytic = std::max(analytic, std::abs(ruin_probability(bessel_exponent(nu), 2.0, y) - (1.0 - std::pow(y, -nu))));
      const auto r = ruin_mc_verdict(bessel_exponent(nu), 2.0, y, 100000, 5e-4, 42, 0);
      mc_ok = mc_ok && r.passed() && r.empirical.censored == 0;
      worst_z = std::max(worst_z, std::abs(r.z()));
    }
  }
  return {analytic < 1e-8 && mc_ok,
          fmt("analytic error %.3g < 1e-08, Monte Carlo max |z| %.2f <= 3 (1e5 paths, h=5e-4)", analytic, worst_z)};
}

McVerifyConfig ct_config(unsigned workers) {
  McVerifyConfig v;
  v.psi = bessel_exponent(3.0);
  v.alpha = 2.0;
  v.a = 1.0;
  v.x0_factor = 1e-3;
  v.q_grid = kQ;
  v.paths = 100000;
  v.h = 5e-4;
  v.seed = 42;
  v.workers = workers;
  return v;
}

std::string ct_summary;

Outcome ct_identity() {
  const auto rep = ct_mc_verdict(ct_config(1));
  ct_summary = to_json(rep).dump();
  std::string detail;
  for (const auto& c : rep.criteria) detail += (detail.empty() ? "" : "; ") + c.name + fmt(" %.3g vs %.3g", c.value, c.threshold);
  for (const auto& row : rep.empirical) {
    detail += fmt("; q=%g target %.6f", row.q, row.target) +
              fmt(" hitting %.6f occupation %.6f", row.hitting_mean, row.occupation_mean) +
              fmt(" allowance %.2g%.0s", row.allowance, 0.0);
  }
  return {rep.passed(), detail};
}

Outcome determinism() {
  if (ct_summary.empty()) return {false, "reference run missing"};
  const auto rep = ct_mc_verdict(ct_config(4));
  const std::string again = to_json(rep).dump();
  return {again == ct_summary, again == ct_summary ? "summary JSON identical for 1 and 4 workers"
                                                   : "summary JSON differs between 1 and 4 workers"};
}

}  // namespace

int main() {
  criterion(1, "transform algebra", 1.0, transform_algebra);
  criterion(2, "Bessel closure", 1.0, bessel_closure);
  criterion(3, "special-function conformance", 10.0, conformance);
  criterion(4, "scale-function round trip", 5.0, scale_round_trip);
  criterion(5, "occupation internal consistency", 10.0, occupation_consistency);
  criterion(6, "ruin probability", 120.0, ruin);
  criterion(7, "hitting and occupation laws at desk scale", 600.0, ct_identity);
  criterion(8, "determinism across workers", 600.0, determinism);
  return failures;
}
