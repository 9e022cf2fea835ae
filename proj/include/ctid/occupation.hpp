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

// Laplace transform of the total time spent below level a by the
// self-similar process driven by T_alpha psi:
//
//   O_q(x; a) = I_T(q (x^a)^alpha) / I(q a^alpha)
//             - q a^alpha / I(q a^alpha) int_1^{x/a v 1} z^{-alpha-1} W(log z) I_T(q a^alpha z^{-alpha}) dz
//             + psi(alpha)/alpha W(log(x/a v 1)) (1 - I(q a^{2 alpha} (x v a)^{-alpha}) / I(q a^alpha))
//
// with I = I_{psi,alpha}, I_T = I_{T_alpha psi,alpha} and W the scale function
// of T_alpha psi.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"
#include "ctid/exponent_json.hpp"
#include "ctid/quadrature.hpp"
#include "ctid/report.hpp"
#include "ctid/scale.hpp"
#include "ctid/series.hpp"

namespace ctid {

inline constexpr double kOccupationTailExponent = 40.0;

class OccupationEvaluator {
 public:
  OccupationEvaluator(const LevyExponent& psi, double alpha, double quad_tol = 1e-11)
      : psi_(psi),
        alpha_(alpha),
        quad_tol_(quad_tol),
        series_(psi, alpha),
        tee_(tee_transform(psi, alpha).simplified()),
        tee_series_(tee_, alpha),
        scale_(tee_) {
    drift_ = psi_(alpha_) / alpha_;
  }

  [[nodiscard]] const SeriesEvaluator& series() const noexcept { return series_; }
  [[nodiscard]] const SeriesEvaluator& tee_series() const noexcept { return tee_series_; }
  [[nodiscard]] const ScaleFunction& scale() const noexcept { return scale_; }
  [[nodiscard]] const LevyExponent& tee_exponent() const noexcept { return tee_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }

  /// psi(alpha)/alpha = (T_alpha psi)'(0+)
  [[nodiscard]] double drift() const noexcept { return drift_; }

  [[nodiscard]] double operator()(double x, double a, double q) const {
    if (!(x >= 0.0)) detail::fail_validation("occupation start x must be >= 0");
    if (!(a > 0.0)) detail::fail_validation("occupation level a must be > 0");
    if (!(q >= 0.0)) detail::fail_validation("q must be >= 0");
    if (q == 0.0) return 1.0;
    // reduce to a = 1 by self-similarity
    const double qa = detail::scaled_power(q, a, alpha_);
    const double xr = x / a;
    const double i_q = series_(qa);
    if (xr <= 1.0) return tee_series_(detail::scaled_power(qa, xr, alpha_)) / i_q;

    // Above the level: split at the first passage below a. With L = log(x/a),
    // O = drift W(L) + (1 - drift W(L) + qa J(L)) / I(qa), where J(L) collects
    // E_L[exp(alpha n xi_tau)] term by term.
    const double L = std::log(xr);
    const double wl = scale_(L);
    const double escape = std::min(1.0, drift_ * wl);
    const double out = escape + (1.0 - escape + qa * return_integral(L, qa)) / i_q;
    if (!(out > 0.0 && out <= 1.0 + 1e-9)) {
      detail::fail_numeric("occupation transform " + std::to_string(out) + " outside (0, 1] at x = " +
                           std::to_string(x));
    }
    return std::min(out, 1.0);
  }

  /// J(L) = int_0^inf e^{-alpha v} I_T(qa e^{-alpha v}) (W(L+v) - W(L)) dv.
  /// Every integrand value is nonnegative, so large L costs no cancellation.
  /// Beyond e^{-alpha v} = e^{-40} the remainder is closed with W(inf).
  [[nodiscard]] double return_integral(double L, double qa) const {
    const double wl = scale_(L);
    const double v_cut = kOccupationTailExponent / alpha_;
    auto f = [&](double v) {
      const double e = std::exp(-alpha_ * v);
      return e * tee_series_(qa * e) * std::max(0.0, scale_(L + v) - wl);
    };
    // v = s^2 on the first piece tames the power behaviour of W near L = 0
    auto g = [&](double s) { return 2.0 * s * f(s * s); };
    const double first_hi = std::min(1.0, v_cut);
    double acc = integrate(g, 0.0, std::sqrt(first_hi), quad_tol_).value;
    for (double lo = first_hi; lo < v_cut; lo += 1.0) {
      acc += integrate(f, lo, std::min(lo + 1.0, v_cut), quad_tol_).value;
    }
    acc += std::max(0.0, scale_.at_infinity() - wl) * std::exp(-alpha_ * v_cut) / alpha_;
    return acc;
  }

 private:
  LevyExponent psi_;
  double alpha_;
  double quad_tol_;
  SeriesEvaluator series_;
  LevyExponent tee_;
  SeriesEvaluator tee_series_;
  ScaleFunction scale_;
  double drift_ = 0.0;
};

inline double occupation_laplace(const OccupationEvaluator& ev, double x, double a, double q) { return ev(x, a, q); }

inline constexpr double kAnalyticCTTolerance = 1e-12;

/// Hitting transform under psi vs occupation transform under T_alpha psi, both
/// from the origin, on a grid of q.
inline CTReport ct_analytic_verdict(const LevyExponent& psi, double alpha, double a, const std::vector<double>& q_grid) {
  const OccupationEvaluator ev(psi, alpha);
  CTReport r;
  r.mode = "analytic";
  r.config = {{"exponent", to_json(psi)}, {"alpha", alpha}, {"a", a}, {"q", q_grid}};
  double worst = 0.0;
  for (double q : q_grid) {
    AnalyticRow row;
    row.q = q;
    row.hitting = hitting_laplace(ev.series(), 0.0, a, q);
    row.occupation = ev(0.0, a, q);
    row.inverse_I = 1.0 / ev.series()(detail::scaled_power(q, a, alpha));
    row.rel_discrepancy = std::abs(row.hitting - row.occupation) / row.hitting;
    worst = std::max(worst, row.rel_discrepancy);
    r.analytic.push_back(row);
  }
  r.criteria.push_back({"hitting vs occupation Laplace transform at x=0", worst < kAnalyticCTTolerance, worst,
                        kAnalyticCTTolerance, "max relative discrepancy over the q grid"});
  return r;
}

}  // namespace ctid
