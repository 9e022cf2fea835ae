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

// Small numerical kernels shared by the analytic modules: compensated
// summation and log-gamma (real and complex) with a large-argument
// expansion for gamma ratios.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

namespace ctid {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// `n` evenly spaced points on [lo, hi], endpoints included.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {lo};
  out.reserve(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

namespace detail {

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

// sin(pi x) with exact argument reduction.
inline double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  double sign = 1.0;
  if (r >= 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(std::numbers::pi * r);
}

template <class T>
T lanczos_log_gamma(T z) {
  // log Gamma(z) for Re z >= 0.5
  z -= 1.0;
  T acc = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    acc += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const T t = z + kLanczosG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

// log sin(pi z) on some branch; stable for large |Im z|.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
  using namespace std::complex_literals;
  const std::complex<double> w = std::numbers::pi * z;
  if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
  if (w.imag() > 0) {
    return -1.0i * w + std::log(0.5i) + std::log(1.0 - std::exp(2.0i * w));
  }
  return 1.0i * w - std::log(2.0i) + std::log(1.0 - std::exp(-2.0i * w));
}

inline constexpr std::array<double, 11> kBernoulli = {
    1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0};

inline double bernoulli_poly(int k, double h) {
  double out = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    out += binom * kBernoulli[static_cast<std::size_t>(j)] * std::pow(h, k - j);
    binom = binom * (k - j) / (j + 1);
  }
  return out;
}

// log Gamma(z+a) - log Gamma(z+b) for large |z| away from the negative axis.
template <class T>
T log_gamma_ratio_asymptotic(T z, double a, double b) {
  T out = (a - b) * std::log(z);
  T zpow = z;
  for (int k = 2; k <= 10; ++k) {
    const double coeff = (bernoulli_poly(k, a) - bernoulli_poly(k, b)) / (k * (k - 1.0));
    out += ((k % 2 == 0) ? coeff : -coeff) / zpow;
    zpow *= z;
  }
  return out;
}

inline constexpr double kAsymptoticRadius = 25.0;

}  // namespace detail

/// log|Gamma(x)|; `sign` receives the sign of Gamma(x). Poles give +inf.
inline double log_gamma(double x, int* sign = nullptr) {
  if (sign) *sign = 1;
  if (x >= 0.5) return detail::lanczos_log_gamma(x);
  if (x == std::floor(x)) return std::numeric_limits<double>::infinity();
  const double s = detail::sin_pi(x);
  if (sign && s < 0) *sign = -1;
  return std::log(std::numbers::pi) - std::log(std::abs(s)) - detail::lanczos_log_gamma(1.0 - x);
}

/// Principal-branch-free log Gamma(z): only exp() of the result is meaningful.
inline std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() >= 0.5) return detail::lanczos_log_gamma(z);
  return std::log(std::numbers::pi) - detail::log_sin_pi(z) - detail::lanczos_log_gamma(1.0 - z);
}

/// Gamma(z+a)/Gamma(z+b) for complex z, switching to the Stirling-type
/// expansion of the log-ratio when |z| is large.
inline std::complex<double> gamma_ratio(std::complex<double> z, double a, double b) {
  if (std::abs(z) > detail::kAsymptoticRadius) {
    return std::exp(detail::log_gamma_ratio_asymptotic(z, a, b));
  }
  return std::exp(log_gamma(z + a) - log_gamma(z + b));
}

/// Gamma(x+a)/Gamma(x+b) for real x, signed. Returns 0 when x+b is a pole
/// and x+a is not.
inline double gamma_ratio(double x, double a, double b) {
  if (x > detail::kAsymptoticRadius) {
    return std::exp(detail::log_gamma_ratio_asymptotic(x, a, b));
  }
  int sa = 1;
  int sb = 1;
  const double la = log_gamma(x + a, &sa);
  const double lb = log_gamma(x + b, &sb);
  if (std::isinf(lb) && !std::isinf(la)) return 0.0;
  return sa * sb * std::exp(la - lb);
}

/// Pochhammer symbol (x)_y = Gamma(x+y)/Gamma(x).
inline double pochhammer(double x, double y) { return gamma_ratio(x, y, 0.0); }

}  // namespace ctid
