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

// Special functions evaluated from their defining power series, plus the
// conformance checks tying each exponent family to its closed form for
// I_{psi,alpha}. Every Pochhammer symbol goes through log-gamma, which keeps
// this route independent of the product recurrence used by SeriesEvaluator.
//
// Conventions: (x)_y = Gamma(x+y)/Gamma(x);
//   mittag_leffler(a, b, x) = sum x^n / (b)_{a n}      (so E(0) = 1 for every b)
//   wright_1psi1(a, A, b, B, x) = sum (A)_{a n} / ((B)_{b n} n!) x^n

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/numerics.hpp"
#include "ctid/presets.hpp"
#include "ctid/series.hpp"

namespace ctid {

enum class SpecialFamily { bessel_i, mittag_leffler, hyp1f1, hyp1f2, wright_1psi1 };

struct SpecialFnParams {
  SpecialFamily family = SpecialFamily::bessel_i;
  std::vector<double> params;
};

inline constexpr double kSpecialMaxArgument = 1e3;
inline constexpr double kSpecialTolerance = 1e-15;

namespace detail {

inline bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// log|(a)_y| and its sign; sign 0 means the symbol vanishes.
inline double log_poch(double a, double y, int& sign) {
  sign = 1;
  if (y == 0.0) return 0.0;
  if (nonpositive_integer(a)) {
    if (y == std::floor(y) && a + y > 0.0) {
      sign = 0;
      return -std::numeric_limits<double>::infinity();
    }
    if (y == std::floor(y)) {
      double acc = 0.0;
      for (double k = 0; k < y; k += 1.0) {
        acc += std::log(std::abs(a + k));
        if (a + k < 0) sign = -sign;
      }
      return acc;
    }
  }
  int s1 = 1;
  int s2 = 1;
  const double num = log_gamma(a + y, &s1);
  const double den = log_gamma(a, &s2);
  if (std::isinf(num)) {
    sign = 0;
    return -std::numeric_limits<double>::infinity();
  }
  sign = s1 * s2;
  return num - den;
}

inline void check_denominator(double b, const char* name) {
  if (nonpositive_integer(b)) fail_validation(std::string("parameter pole: ") + name + " is a nonpositive integer");
}

// Sum of terms produced by `log_term(n, sign)`; stops after two consecutive
// non-increasing terms below the relative tolerance.
template <class F>
double sum_log_terms(F&& log_term) {
  CompensatedSum sum;
  double prev = std::numeric_limits<double>::infinity();
  int small_run = 0;
  for (std::size_t n = 0; n <= kMaxSeriesTerms; ++n) {
    int sign = 1;
    const double lt = log_term(static_cast<double>(n), sign);
    const double term = sign == 0 ? 0.0 : sign * std::exp(lt);
    if (!std::isfinite(term)) fail_numeric("special function series overflow");
    sum.add(term);
    const double mag = std::abs(term);
    small_run = (mag < kSpecialTolerance * std::abs(sum.value()) && mag <= prev) ? small_run + 1 : 0;
    prev = mag;
    if (small_run >= 2 && n >= 2) return sum.value();
  }
  fail_numeric("special function series non-convergent");
}

inline void check_argument(double x) {
  if (!(x >= 0.0)) fail_validation("special functions are evaluated for x >= 0 only");
  if (x > kSpecialMaxArgument) fail_validation("special function argument above 1e3");
}

inline double log_x_pow(double x, double n) { return n == 0.0 ? 0.0 : n * std::log(x); }

}  // namespace detail

/// (x/2)^{-g} I_g(x) = sum (x/2)^{2n} / (n! Gamma(g+n+1)); finite at x = 0.
inline double bessel_i_scaled(double g, double x) {
  detail::check_argument(x);
  if (x == 0.0) {
    int s = 1;
    const double lg = log_gamma(g + 1.0, &s);
    return std::isinf(lg) ? 0.0 : s * std::exp(-lg);
  }
  const double lh = std::log(x / 2.0);
  return detail::sum_log_terms([&](double n, int& sign) {
    int s = 1;
    const double lg = log_gamma(g + n + 1.0, &s);
    if (std::isinf(lg)) {
      sign = 0;
      return 0.0;
    }
    sign = s;
    return 2.0 * n * lh - log_gamma(n + 1.0) - lg;
  });
}

/// Modified Bessel function of the first kind, I_g(x), x >= 0.
inline double bessel_i(double g, double x) {
  if (x == 0.0) {
    if (g == 0.0) return 1.0;
    if (g > 0.0 || g == std::floor(g)) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return std::pow(x / 2.0, g) * bessel_i_scaled(g, x);
}

/// sum x^n / (b)_{a n}
inline double mittag_leffler(double a, double b, double x) {
  detail::check_argument(x);
  if (!(a > 0.0)) detail::fail_validation("Mittag-Leffler needs alpha > 0");
  detail::check_denominator(b, "beta");
  return detail::sum_log_terms([&](double n, int& sign) {
    int s = 1;
    const double lp = detail::log_poch(b, a * n, s);
    sign = s;
    return detail::log_x_pow(x, n) - lp;
  });
}

/// 1F1(a; b; x)
inline double hyp1f1(double a, double b, double x) {
  detail::check_argument(x);
  detail::check_denominator(b, "b");
  return detail::sum_log_terms([&](double n, int& sign) {
    int s1 = 1;
    int s2 = 1;
    const double num = detail::log_poch(a, n, s1);
    const double den = detail::log_poch(b, n, s2);
    sign = s1 * s2;
    return num - den - log_gamma(n + 1.0) + detail::log_x_pow(x, n);
  });
}

/// 1F2(d; b, c; x)
inline double hyp1f2(double d, double b, double c, double x) {
  detail::check_argument(x);
  detail::check_denominator(b, "b");
  detail::check_denominator(c, "c");
  return detail::sum_log_terms([&](double n, int& sign) {
    int s1 = 1;
    int s2 = 1;
    int s3 = 1;
    const double num = detail::log_poch(d, n, s1);
    const double den = detail::log_poch(b, n, s2) + detail::log_poch(c, n, s3);
    sign = s1 * s2 * s3;
    return num - den - log_gamma(n + 1.0) + detail::log_x_pow(x, n);
  });
}

/// sum (A)_{a n} / ((B)_{b n} n!) x^n
inline double wright_1psi1(double a, double A, double b, double B, double x) {
  detail::check_argument(x);
  detail::check_denominator(B, "B");
  if (!(b > 0.0)) detail::fail_validation("Wright function needs b > 0");
  if (!(1.0 + b - a > 0.0)) detail::fail_validation("Wright function needs 1 + b - a > 0 to be entire");
  return detail::sum_log_terms([&](double n, int& sign) {
    int s1 = 1;
    int s2 = 1;
    const double num = detail::log_poch(A, a * n, s1);
    const double den = detail::log_poch(B, b * n, s2);
    sign = s1 * s2;
    return num - den - log_gamma(n + 1.0) + detail::log_x_pow(x, n);
  });
}

/// Dispatch on a tagged parameter vector.
inline double eval_special(const SpecialFnParams& p, double x) {
  auto need = [&](std::size_t n) {
    if (p.params.size() != n) detail::fail_validation("wrong number of special-function parameters");
  };
  switch (p.family) {
    case SpecialFamily::bessel_i:
      need(1);
      return bessel_i(p.params[0], x);
    case SpecialFamily::mittag_leffler:
      need(2);
      return mittag_leffler(p.params[0], p.params[1], x);
    case SpecialFamily::hyp1f1:
      need(2);
      return hyp1f1(p.params[0], p.params[1], x);
    case SpecialFamily::hyp1f2:
      need(3);
      return hyp1f2(p.params[0], p.params[1], p.params[2], x);
    case SpecialFamily::wright_1psi1:
      need(4);
      return wright_1psi1(p.params[0], p.params[1], p.params[2], p.params[3], x);
  }
  detail::fail_validation("unknown special family");
}

inline SpecialFamily parse_special_family(const std::string& name) {
  if (name == "bessel_i") return SpecialFamily::bessel_i;
  if (name == "mittag_leffler") return SpecialFamily::mittag_leffler;
  if (name == "hyp1f1") return SpecialFamily::hyp1f1;
  if (name == "hyp1f2") return SpecialFamily::hyp1f2;
  if (name == "wright_1psi1") return SpecialFamily::wright_1psi1;
  detail::fail_validation("unknown special family '" + name + "'");
}

// ---------------------------------------------------------------------------
// Conformance

struct ConformanceCheck {
  std::string name;      // e.g. "I[T_2 psi] vs 1F2"
  double max_rel_error = 0.0;
  double worst_x = 0.0;
  std::size_t points = 0;
};

struct ConformanceReport {
  std::string example;
  std::vector<ConformanceCheck> checks;
  double tolerance = 1e-10;

  [[nodiscard]] double max_rel_error() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, c.max_rel_error);
    return m;
  }
  [[nodiscard]] bool passed() const { return max_rel_error() < tolerance; }
};

inline ConformanceCheck compare_on_grid(std::string name, const SeriesEvaluator& se,
                                        const std::function<double(double)>& closed_form,
                                        const std::vector<double>& grid) {
  ConformanceCheck c;
  c.name = std::move(name);
  c.points = grid.size();
  for (double x : grid) {
    const double ref = closed_form(x);
    const double err = std::abs(se(x) - ref) / std::abs(ref);
    if (!(err <= c.max_rel_error)) {
      c.max_rel_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
      c.worst_x = x;
    }
  }
  return c;
}

/// Compares the series I_{psi,alpha} (and I_{T_alpha psi, alpha}) of a preset
/// family against its special-function closed form on [0, 50].
inline ConformanceReport conformance_suite(const std::string& example, std::size_t points = 200,
                                           double x_max = 50.0) {
  const Preset p = parse_preset(example);
  const auto grid = linspace(0.0, x_max, points);
  ConformanceReport r;
  r.example = example;
  const double alpha = p.alpha;
  const SeriesEvaluator base(p.exponent, alpha);
  const SeriesEvaluator teed(tee_transform(p.exponent, alpha), alpha);
  switch (p.family) {
    case Family::bessel: {
      const double nu = p.params[0];
      auto closed = [](double v) {
        return [v](double x) { return std::tgamma(v / 2.0) * bessel_i_scaled(v / 2.0 - 1.0, std::sqrt(2.0 * x)); };
      };
      r.checks.push_back(compare_on_grid("I[psi_nu] vs Bessel I", base, closed(nu), grid));
      r.checks.push_back(compare_on_grid("I[T_2 psi_nu] vs Bessel I (nu+2)", teed, closed(nu + 2.0), grid));
      break;
    }
    case Family::killed_bessel: {
      const double nu = p.params[0];
      const double kappa = p.params[1];
      const double disc = std::sqrt((nu / 2.0 - 1.0) * (nu / 2.0 - 1.0) + 2.0 * kappa);
      const double tp = 1.0 - nu / 2.0 + disc;
      const double tm = 1.0 - nu / 2.0 - disc;
      r.checks.push_back(compare_on_grid(
          "I[psi_nu,kappa] vs 1F2(1; 1-theta+/2, 1-theta-/2; x/2)", base,
          [=](double x) { return hyp1f2(1.0, 1.0 - tp / 2.0, 1.0 - tm / 2.0, x / 2.0); }, grid));
      r.checks.push_back(compare_on_grid(
          "I[T_2 psi_nu,kappa] vs 1F2(2; 2-theta+/2, 2-theta-/2; x/2)", teed,
          [=](double x) { return hyp1f2(2.0, 2.0 - tp / 2.0, 2.0 - tm / 2.0, x / 2.0); }, grid));
      break;
    }
    case Family::stable: {
      const double a = p.params[0];
      r.checks.push_back(compare_on_grid("I[psi_alpha] vs E_{alpha,1}", base,
                                         [=](double x) { return mittag_leffler(a, 1.0, x); }, grid));
      r.checks.push_back(compare_on_grid("I[T_alpha psi_alpha] vs E_{alpha,alpha}", teed,
                                         [=](double x) { return mittag_leffler(a, a, x); }, grid));
      break;
    }
    case Family::tee_stable: {
      const double a = p.params[0];
      const double b = p.params[1];
      r.checks.push_back(compare_on_grid("I[psi_alpha,beta] vs 1Psi1((1,beta/alpha),(alpha,beta))", base,
                                         [=](double x) { return wright_1psi1(1.0, b / a, a, b, x); }, grid));
      r.checks.push_back(compare_on_grid(
          "I[psi_alpha,beta+alpha] vs 1Psi1((1,(beta+alpha)/alpha),(alpha,beta+alpha))", teed,
          [=](double x) { return wright_1psi1(1.0, (b + a) / a, a, b + a, x); }, grid));
      break;
    }
    case Family::sawtooth: {
      const double g = p.params[0];
      const double k = p.params[1];
      r.checks.push_back(compare_on_grid("I[psi] vs 1F1(gamma+kappa-1, gamma-1; x)", base,
                                         [=](double x) { return hyp1f1(g + k - 1.0, g - 1.0, x); }, grid));
      r.checks.push_back(compare_on_grid("I[T_1 psi] vs 1F1(gamma+kappa, gamma; x)", teed,
                                         [=](double x) { return hyp1f1(g + k, g, x); }, grid));
      break;
    }
  }
  return r;
}

}  // namespace ctid
