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

// Laplace exponents of (possibly killed) spectrally negative Levy processes,
// stored as a sum of primitive terms plus a stack of Esscher / T_beta
// wrappers. The class is closed under both wrappers without any symbolic
// algebra; `simplified()` recovers a primitive-only form for the rational
// sub-family (gaussian + drift + exponential jumps + killing).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/numerics.hpp"

namespace ctid {

/// sigma2 * u^2 / 2 + drift * u
struct Quadratic {
  double sigma2 = 0.0;
  double drift = 0.0;
};

/// -rate * u / (u + jump_scale): compound Poisson, Exp(jump_scale) downward jumps.
struct ExpJumps {
  double rate = 0.0;
  double jump_scale = 1.0;
};

/// scale * Gamma(u + 1) / Gamma(u + 1 - index), index in (1, 2).
struct Pochhammer {
  double scale = 1.0;
  double index = 1.5;
};

/// -q
struct Killing {
  double q = 0.0;
};

using Component = std::variant<Quadratic, ExpJumps, Pochhammer, Killing>;

enum class WrapperKind { esscher, tee };

struct Wrapper {
  WrapperKind kind = WrapperKind::tee;
  double beta = 0.0;
};

/// Exponent of the rational sub-family with merged jump terms:
/// sigma2 u^2/2 + drift u - sum rate_i u/(u + scale_i) - killing.
struct RationalForm {
  double sigma2 = 0.0;
  double drift = 0.0;
  double killing = 0.0;
  std::vector<ExpJumps> jumps;  // distinct scales, ascending
};

inline constexpr double kDefaultSearchBound = 1e3;

class LevyExponent {
 public:
  LevyExponent() = default;

  explicit LevyExponent(std::vector<Component> components, std::vector<Wrapper> wrappers = {})
      : components_(std::move(components)), wrappers_(std::move(wrappers)) {
    for (const auto& c : components_) check_component(c);
    for (const auto& w : wrappers_) {
      if (!(w.beta >= 0.0) || !std::isfinite(w.beta)) {
        detail::fail_validation("wrapper beta must be finite and >= 0");
      }
    }
  }

  [[nodiscard]] const std::vector<Component>& components() const noexcept { return components_; }
  [[nodiscard]] const std::vector<Wrapper>& wrappers() const noexcept { return wrappers_; }

  /// psi(u). Wrappers are applied innermost-first.
  [[nodiscard]] double operator()(double u) const {
    if (!(u >= 0.0)) detail::fail_validation("exponent evaluated at negative argument");
    const double v = eval_level(wrappers_.size(), u);
    if (!std::isfinite(v)) detail::fail_numeric("exponent overflow at u = " + std::to_string(u));
    return v;
  }

  /// Analytic continuation, used by numerical Laplace inversion only.
  [[nodiscard]] std::complex<double> operator()(std::complex<double> s) const {
    return eval_level(wrappers_.size(), s);
  }

  /// psi'(u) for u >= 0; closed form except for Pochhammer terms.
  [[nodiscard]] double derivative(double u) const { return deriv_level(wrappers_.size(), u); }

  /// New exponent with one more wrapper on top.
  [[nodiscard]] LevyExponent wrapped(Wrapper w) const {
    auto ws = wrappers_;
    ws.push_back(w);
    return LevyExponent(components_, std::move(ws));
  }

  [[nodiscard]] bool has_pochhammer() const {
    return std::any_of(components_.begin(), components_.end(),
                       [](const Component& c) { return std::holds_alternative<Pochhammer>(c); });
  }

  [[nodiscard]] bool has_gaussian() const {
    return std::any_of(components_.begin(), components_.end(), [](const Component& c) {
      const auto* q = std::get_if<Quadratic>(&c);
      return q && q->sigma2 > 0.0;
    });
  }

  /// Rational representation with all wrappers pushed into the primitives;
  /// empty when a Pochhammer term is present.
  [[nodiscard]] std::optional<RationalForm> rational() const {
    if (has_pochhammer()) return std::nullopt;
    RationalForm r;
    std::map<double, double> jumps;  // scale -> rate
    for (const auto& c : components_) {
      if (const auto* q = std::get_if<Quadratic>(&c)) {
        r.sigma2 += q->sigma2;
        r.drift += q->drift;
      } else if (const auto* j = std::get_if<ExpJumps>(&c)) {
        jumps[j->jump_scale] += j->rate;
      } else if (const auto* k = std::get_if<Killing>(&c)) {
        r.killing += k->q;
      }
    }
    for (const auto& w : wrappers_) {
      const double beta = w.beta;
      if (beta == 0.0) continue;
      std::map<double, double> next;
      if (w.kind == WrapperKind::tee) {
        // u/(u+b) * psi(u+b): the quadratic keeps its shape, killing turns
        // into Exp(b) jumps and every jump scale shifts by b.
        r.drift += r.sigma2 * beta / 2.0;
        for (const auto& [scale, rate] : jumps) next[scale + beta] += rate;
        if (r.killing > 0.0) next[beta] += r.killing;
        r.killing = 0.0;
      } else {
        r.drift += r.sigma2 * beta;
        for (const auto& [scale, rate] : jumps) next[scale + beta] += rate * scale / (scale + beta);
        r.killing = 0.0;
      }
      jumps = std::move(next);
    }
    for (const auto& [scale, rate] : jumps) {
      if (rate > 0.0) r.jumps.push_back({rate, scale});
    }
    return r;
  }

  /// Equivalent primitive-only exponent when one exists, else a copy.
  [[nodiscard]] LevyExponent simplified() const {
    if (wrappers_.empty()) return *this;
    auto r = rational();
    if (!r) return *this;
    std::vector<Component> cs;
    cs.emplace_back(Quadratic{r->sigma2, r->drift});
    for (const auto& j : r->jumps) cs.emplace_back(j);
    if (r->killing > 0.0) cs.emplace_back(Killing{r->killing});
    return LevyExponent(std::move(cs));
  }

  /// Nonnegative combination of unwrapped exponents.
  friend LevyExponent operator+(const LevyExponent& a, const LevyExponent& b) {
    if (!a.wrappers_.empty() || !b.wrappers_.empty()) {
      detail::fail_validation("sum is only defined for unwrapped exponents");
    }
    auto cs = a.components_;
    cs.insert(cs.end(), b.components_.begin(), b.components_.end());
    return LevyExponent(std::move(cs));
  }

  friend LevyExponent operator*(double k, const LevyExponent& e) {
    if (!e.wrappers_.empty()) detail::fail_validation("scaling is only defined for unwrapped exponents");
    if (!(k >= 0.0)) detail::fail_validation("scaling factor must be >= 0");
    auto cs = e.components_;
    for (auto& c : cs) {
      std::visit(
          [k](auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, Quadratic>) {
              t.sigma2 *= k;
              t.drift *= k;
            } else if constexpr (std::is_same_v<T, ExpJumps>) {
              t.rate *= k;
            } else if constexpr (std::is_same_v<T, Pochhammer>) {
              t.scale *= k;
            } else {
              t.q *= k;
            }
          },
          c);
    }
    return LevyExponent(std::move(cs));
  }

 private:
  static void check_component(const Component& c) {
    std::visit(
        [](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, Quadratic>) {
            if (!(t.sigma2 >= 0.0) || !std::isfinite(t.drift)) {
              detail::fail_validation("quadratic term needs sigma2 >= 0 and finite drift");
            }
          } else if constexpr (std::is_same_v<T, ExpJumps>) {
            if (!(t.rate >= 0.0) || !(t.jump_scale > 0.0)) {
              detail::fail_validation("exponential jumps need rate >= 0 and jump_scale > 0");
            }
          } else if constexpr (std::is_same_v<T, Pochhammer>) {
            if (!(t.scale > 0.0) || !(t.index > 1.0 && t.index < 2.0)) {
              detail::fail_validation("pochhammer term needs scale > 0 and index in (1, 2)");
            }
          } else {
            if (!(t.q >= 0.0)) detail::fail_validation("killing rate must be >= 0");
          }
        },
        c);
  }

  static double pochhammer_term(const Pochhammer& p, double u) {
    // removable zero of Gamma(u+1)/Gamma(u+1-index) at u = index - 1
    if (std::abs(u - (p.index - 1.0)) < 1e-14) return 0.0;
    return p.scale * gamma_ratio(u, 1.0, 1.0 - p.index);
  }

  static std::complex<double> pochhammer_term(const Pochhammer& p, std::complex<double> s) {
    return p.scale * gamma_ratio(s, 1.0, 1.0 - p.index);
  }

  template <class T>
  T eval_base(T u) const {
    T acc = 0.0;
    for (const auto& c : components_) {
      if (const auto* q = std::get_if<Quadratic>(&c)) {
        acc += q->sigma2 * u * u / 2.0 + q->drift * u;
      } else if (const auto* j = std::get_if<ExpJumps>(&c)) {
        acc -= j->rate * u / (u + j->jump_scale);
      } else if (const auto* p = std::get_if<Pochhammer>(&c)) {
        acc += pochhammer_term(*p, u);
      } else {
        acc -= std::get<Killing>(c).q;
      }
    }
    return acc;
  }

  template <class T>
  T eval_level(std::size_t level, T u) const {
    if (level == 0) return eval_base(u);
    const Wrapper& w = wrappers_[level - 1];
    if (w.kind == WrapperKind::esscher) {
      return eval_level(level - 1, u + w.beta) - eval_level(level - 1, T(w.beta));
    }
    if (w.beta == 0.0) return eval_level(level - 1, u);
    if (u == T(0.0)) return T(0.0);
    return u / (u + w.beta) * eval_level(level - 1, u + w.beta);
  }

  double deriv_base(double u) const {
    double acc = 0.0;
    bool numeric = false;
    for (const auto& c : components_) {
      if (const auto* q = std::get_if<Quadratic>(&c)) {
        acc += q->sigma2 * u + q->drift;
      } else if (const auto* j = std::get_if<ExpJumps>(&c)) {
        acc -= j->rate * j->jump_scale / ((u + j->jump_scale) * (u + j->jump_scale));
      } else if (std::holds_alternative<Pochhammer>(c)) {
        numeric = true;
      }
    }
    if (numeric) {
      acc += richardson_forward_derivative(
          [this](double x) {
            double s = 0.0;
            for (const auto& c : components_) {
              if (const auto* p = std::get_if<Pochhammer>(&c)) s += pochhammer_term(*p, x);
            }
            return s;
          },
          u);
    }
    return acc;
  }

  double deriv_level(std::size_t level, double u) const {
    if (level == 0) return deriv_base(u);
    const Wrapper& w = wrappers_[level - 1];
    if (w.kind == WrapperKind::esscher || w.beta == 0.0) return deriv_level(level - 1, u + w.beta);
    const double b = w.beta;
    const double s = u + b;
    return b / (s * s) * eval_level(level - 1, s) + u / s * deriv_level(level - 1, s);
  }

 public:
  /// One-sided forward-difference derivative with Richardson extrapolation;
  /// returns -inf when the difference quotients diverge downward.
  template <class F>
  static double richardson_forward_derivative(F&& f, double u) {
    constexpr int kLevels = 6;
    double table[kLevels][kLevels];
    double step = 1e-2;
    const double f0 = f(u);
    for (int i = 0; i < kLevels; ++i) {
      table[i][0] = (f(u + step) - f0) / step;
      double factor = 2.0;
      for (int j = 1; j <= i; ++j) {
        table[i][j] = (factor * table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
        factor *= 2.0;
      }
      step /= 2.0;
    }
    const double est = table[kLevels - 1][kLevels - 1];
    if (table[kLevels - 1][0] < -1e12 && table[kLevels - 1][0] < table[0][0]) {
      return -std::numeric_limits<double>::infinity();
    }
    return est;
  }

 private:
  std::vector<Component> components_;
  std::vector<Wrapper> wrappers_;
};

// ---------------------------------------------------------------------------
// Builders

inline LevyExponent quadratic_exponent(double sigma2, double drift) {
  return LevyExponent({Quadratic{sigma2, drift}});
}

// ---------------------------------------------------------------------------
// Operations

inline double evaluate(const LevyExponent& psi, double u) { return psi(u); }

/// -psi(0)
inline double killing_rate(const LevyExponent& psi) {
  const double v = -psi(0.0);
  return v > 0.0 ? v : 0.0;
}

inline double right_derivative_at_zero(const LevyExponent& psi) { return psi.derivative(0.0); }

/// Largest root in [0, inf) of psi(theta) = 0: exponential bracketing then
/// bisection to machine resolution.
inline double largest_root(const LevyExponent& psi, double search_bound = kDefaultSearchBound) {
  const double at_zero = psi(0.0);
  if (at_zero == 0.0 && psi.derivative(0.0) >= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1e-3;
  while (psi(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > search_bound) detail::fail_numeric("root beyond search bound");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::abs(psi(lo)) <= std::abs(psi(hi)) ? lo : hi;
}

/// u -> psi(u + beta) - psi(beta)
inline LevyExponent esscher(const LevyExponent& psi, double beta) {
  if (!(beta >= 0.0)) detail::fail_validation("esscher beta must be >= 0");
  if (!std::isfinite(psi(beta))) detail::fail_validation("esscher needs psi(beta) finite");
  return psi.wrapped({WrapperKind::esscher, beta});
}

/// u -> u/(u + beta) psi(u + beta)
inline LevyExponent tee_transform(const LevyExponent& psi, double beta) {
  if (!(beta >= 0.0)) detail::fail_validation("tee beta must be >= 0");
  return psi.wrapped({WrapperKind::tee, beta});
}

struct ExponentDiagnostics {
  std::size_t grid_points = 0;
  std::vector<double> convexity_violations;  // grid abscissae with negative curvature
  double psi_at_zero = 0.0;
  double killing = 0.0;
  double derivative_at_zero = 0.0;
  std::optional<double> theta;
  std::string theta_error;

  [[nodiscard]] bool convex() const noexcept { return convexity_violations.empty(); }
};

inline constexpr double kConvexityTolerance = 1e-9;

/// Diagnostic pass over an ascending grid; never throws on invalid input shapes
/// other than an unusable grid.
inline ExponentDiagnostics validate(const LevyExponent& psi, const std::vector<double>& grid) {
  ExponentDiagnostics d;
  d.grid_points = grid.size();
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = psi(grid[i]);
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double h0 = grid[i] - grid[i - 1];
    const double h1 = grid[i + 1] - grid[i];
    if (!(h0 > 0.0 && h1 > 0.0)) detail::fail_validation("validation grid must be strictly increasing");
    // slope difference scaled to a second difference
    const double curv = ((v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0) * 0.5 * (h0 + h1);
    const double scale = std::abs(v[i - 1]) + 2.0 * std::abs(v[i]) + std::abs(v[i + 1]);
    if (curv < -kConvexityTolerance * std::max(scale, 1.0)) d.convexity_violations.push_back(grid[i]);
  }
  d.psi_at_zero = psi(0.0);
  d.killing = killing_rate(psi);
  d.derivative_at_zero = psi.derivative(0.0);
  try {
    d.theta = largest_root(psi);
  } catch (const numeric_error& e) {
    d.theta_error = e.what();
  }
  return d;
}

}  // namespace ctid
