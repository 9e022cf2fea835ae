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

// Scale function W of an unkilled spectrally negative exponent with positive
// drift at zero: W = 0 on (-inf, 0), and its Laplace transform is 1/psi.
// Rational exponents get an exact partial-fraction expansion
// W(x) = sum_r exp(r x) / psi'(r) over the (real, nonpositive) roots of psi;
// everything else goes through fixed-Talbot inversion of 1/psi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"
#include "ctid/quadrature.hpp"

namespace ctid {

enum class ScaleMethod { closed_form, talbot };

// Fixed Talbot in double precision is roundoff-limited beyond ~30 nodes
// (the e^{2M/5} factor amplifies cancellation), so the default stays low.
inline constexpr int kTalbotNodes = 24;
inline constexpr int kTalbotCheckOffset = 16;
inline constexpr double kTalbotCheckTolerance = 1e-7;

/// Fixed-Talbot inversion of F at t > 0 with M nodes.
template <class F>
double fixed_talbot(F&& transform, double t, int nodes) {
  using namespace std::complex_literals;
  const double r = 2.0 * nodes / (5.0 * t);
  double acc = 0.5 * std::real(transform(std::complex<double>(r, 0.0))) * std::exp(r * t);
  for (int k = 1; k < nodes; ++k) {
    const double th = k * std::numbers::pi / nodes;
    const double cot = std::cos(th) / std::sin(th);
    const std::complex<double> s = r * th * (cot + 1.0i);
    const double sigma = th + (th * cot - 1.0) * cot;
    acc += std::real(std::exp(t * s) * transform(s) * (1.0 + 1.0i * sigma));
  }
  return r / nodes * acc;
}

struct ScalePole {
  double root = 0.0;     // root of psi (<= 0)
  double residue = 0.0;  // 1 / psi'(root)
};

class ScaleFunction {
 public:
  explicit ScaleFunction(LevyExponent psi, std::optional<ScaleMethod> method = std::nullopt,
                         int nodes = kTalbotNodes)
      : psi_(std::move(psi)), nodes_(nodes), cache_(std::make_shared<Cache>()) {
    if (psi_(0.0) != 0.0) detail::fail_validation("scale function needs an exponent without killing");
    drift0_ = psi_.derivative(0.0);
    if (!(drift0_ > 0.0)) detail::fail_validation("scale function needs psi'(0+) > 0");
    if (nodes_ < 8) detail::fail_validation("Talbot node count must be at least 8");
    const auto rational = psi_.rational();
    if (rational) poles_ = partial_fractions(*rational);
    if (method) {
      method_ = *method;
      if (method_ == ScaleMethod::closed_form && !rational) {
        detail::fail_validation("closed-form scale function needs a rational exponent");
      }
    } else {
      method_ = rational ? ScaleMethod::closed_form : ScaleMethod::talbot;
    }
    bounded_variation_ = !psi_.has_gaussian() && !psi_.has_pochhammer();
  }

  [[nodiscard]] const LevyExponent& exponent() const noexcept { return psi_; }
  [[nodiscard]] ScaleMethod method() const noexcept { return method_; }
  [[nodiscard]] bool has_closed_form() const noexcept { return !poles_.empty(); }
  [[nodiscard]] const std::vector<ScalePole>& poles() const noexcept { return poles_; }

  /// psi'(0+)
  [[nodiscard]] double drift_at_zero() const noexcept { return drift0_; }

  /// lim W(x) = 1/psi'(0+)
  [[nodiscard]] double at_infinity() const noexcept { return 1.0 / drift0_; }

  double operator()(double x) const {
    if (x < 0.0) return 0.0;
    if (method_ == ScaleMethod::closed_form) return closed_form(x);
    const bool cacheable = x < 1e6;
    const long long key = cacheable ? std::llround(x * 1e12) : 0;
    if (cacheable) {
      std::lock_guard lock(cache_->mutex);
      if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
    }
    const double v = talbot_checked(x);
    if (cacheable) {
      std::lock_guard lock(cache_->mutex);
      cache_->values.emplace(key, v);
    }
    return v;
  }

  [[nodiscard]] double closed_form(double x) const {
    if (poles_.empty()) detail::fail_validation("no closed form for this exponent");
    if (x < 0.0) return 0.0;
    CompensatedSum s;
    for (const auto& p : poles_) s.add(p.residue * std::exp(p.root * x));
    return std::max(0.0, s.value());
  }

  /// Raw fixed-Talbot value with the given node count (no self-check).
  [[nodiscard]] double talbot(double x, int nodes) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return at_zero();
    return fixed_talbot([this](std::complex<double> s) { return 1.0 / psi_(s); }, x, nodes);
  }

  /// Talbot value with the M vs M+16 self-estimate.
  [[nodiscard]] double talbot_checked(double x) const {
    if (x <= 0.0) return x < 0.0 ? 0.0 : at_zero();
    const double w = talbot(x, nodes_);
    const double w_check = talbot(x, nodes_ + kTalbotCheckOffset);
    const double scale = std::max(std::abs(w), 1e-3 * at_infinity());
    if (!(std::abs(w - w_check) <= kTalbotCheckTolerance * scale)) {
      detail::fail_numeric("inversion unreliable at x = " + std::to_string(x));
    }
    return w;
  }

  /// W(0) = 0 under unbounded variation, 1/drift otherwise.
  [[nodiscard]] double at_zero() const {
    if (!poles_.empty()) return closed_form(0.0);
    if (!bounded_variation_) return 0.0;
    const auto r = psi_.rational();
    return 1.0 / r->drift;
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::unordered_map<long long, double> values;
  };

  // R(u) = psi(u)/u is strictly increasing between its poles -scale_i, so each
  // gap holds exactly one root; bisection never touches the poles.
  static std::vector<ScalePole> partial_fractions(const RationalForm& r) {
    auto R = [&r](double u) {
      double v = r.sigma2 * u / 2.0 + r.drift;
      for (const auto& j : r.jumps) v -= j.rate / (u + j.jump_scale);
      return v;
    };
    auto dR = [&r](double u) {
      double v = r.sigma2 / 2.0;
      for (const auto& j : r.jumps) v += j.rate / ((u + j.jump_scale) * (u + j.jump_scale));
      return v;
    };
    auto bisect = [&R](double lo, double hi) {
      for (int it = 0; it < 4000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (R(mid) > 0.0 ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    };
    std::vector<ScalePole> out;
    out.push_back({0.0, 1.0 / R(0.0)});
    // poles of R in decreasing order: -s_1 > -s_2 > ...
    std::vector<double> cuts{0.0};
    for (const auto& j : r.jumps) cuts.push_back(-j.jump_scale);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double root = bisect(cuts[i + 1], cuts[i]);
      out.push_back({root, 1.0 / (root * dR(root))});
    }
    if (r.sigma2 > 0.0) {
      const double hi = cuts.back();
      double lo = hi - 1.0;
      while (R(lo) > 0.0) lo = hi - 2.0 * (hi - lo);
      const double root = bisect(lo, hi);
      out.push_back({root, 1.0 / (root * dR(root))});
    }
    return out;
  }

  LevyExponent psi_;
  int nodes_;
  ScaleMethod method_ = ScaleMethod::closed_form;
  double drift0_ = 0.0;
  bool bounded_variation_ = false;
  std::vector<ScalePole> poles_;
  std::shared_ptr<Cache> cache_;
};

inline double scale_eval(const ScaleFunction& W, double x) { return W(x); }

/// W for T_alpha psi, simplified to the rational family when possible.
inline ScaleFunction tee_scale_function(const LevyExponent& psi, double alpha,
                                        std::optional<ScaleMethod> method = std::nullopt) {
  return ScaleFunction(tee_transform(psi, alpha).simplified(), method);
}

/// (psi(alpha)/alpha) W_{T_alpha psi}(log y) = P_y(tau_1 = infinity) under T_alpha psi,
/// with W the scale function of T_alpha psi.
inline double ruin_probability(const ScaleFunction& W_tee, double y) {
  if (!(y >= 1.0)) detail::fail_validation("ruin probability needs y >= 1");
  const double p = W_tee.drift_at_zero() * W_tee(std::log(y));
  if (p < -1e-9 || p > 1.0 + 1e-9) {
    detail::fail_numeric("ruin probability " + std::to_string(p) + " outside [0, 1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double ruin_probability(const LevyExponent& psi, double alpha, double y) {
  const double theta = largest_root(psi);
  if (!(theta < alpha)) detail::fail_validation("ruin probability needs theta < alpha");
  return ruin_probability(tee_scale_function(psi, alpha), y);
}

/// E_x[exp(u xi_{tau_0^-}) ; tau_0^- < inf] for the Levy process whose scale
/// function is W (x >= 0, u >= 0).
inline double overshoot_transform(const ScaleFunction& W, double x, double u) {
  if (!(x >= 0.0)) detail::fail_validation("overshoot transform needs x >= 0");
  if (!(u >= 0.0)) detail::fail_validation("overshoot transform needs u >= 0");
  const LevyExponent& psi = W.exponent();
  if (u == 0.0) return 1.0 - W.drift_at_zero() * W(x);
  const double psi_u = psi(u);
  // z = s^2 smooths the power-law start of W
  const double integral =
      x == 0.0 ? 0.0
               : integrate([&](double s) { return 2.0 * s * std::exp(-u * s * s) * W(s * s); }, 0.0, std::sqrt(x))
                     .value;
  return std::exp(u * x) * (1.0 - psi_u * integral) - psi_u / u * W(x);
}

/// int_0^inf exp(-u x) W(x) dx, truncated where exp(-u x) W(inf)/u < 1e-13 and
/// closed with that bound.
inline double scale_laplace_transform(const ScaleFunction& W, double u) {
  if (!(u > 0.0)) detail::fail_validation("Laplace transform of W needs u > 0");
  const double w_inf = W.at_infinity();
  const double x_max = std::max(1.0, std::log(w_inf / (u * 1e-13)) / u);
  // split so the quadrature resolves the fast initial rise of W
  double acc = 0.0;
  double lo = 0.0;
  for (double hi : {std::min(1.0, x_max), x_max}) {
    if (hi > lo) acc += integrate([&](double z) { return std::exp(-u * z) * W(z); }, lo, hi).value;
    lo = hi;
  }
  return acc + w_inf * std::exp(-u * x_max) / u;
}

}  // namespace ctid
