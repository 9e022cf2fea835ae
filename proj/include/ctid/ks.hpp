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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ctid/error.hpp"

namespace ctid {

inline constexpr std::size_t kKSMinSample = 100;

struct KSResult {
  double statistic = 0.0;  // D
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

/// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double kolmogorov_tail(double lambda) {
  const double a2 = -2.0 * lambda * lambda;
  double fac = 2.0;
  double sum = 0.0;
  double prev = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = fac * std::exp(a2 * j * j);
    sum += term;
    if (std::abs(term) <= 1e-3 * prev || std::abs(term) <= 1e-8 * sum) return std::clamp(sum, 0.0, 1.0);
    fac = -fac;
    prev = std::abs(term);
  }
  return 1.0;  // no convergence: lambda is tiny
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q((sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) D), ne = n m / (n + m).
inline KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < kKSMinSample || b.size() < kKSMinSample) {
    detail::fail_validation("KS test needs at least 100 samples per side");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  KSResult r;
  r.statistic = d;
  r.n_a = a.size();
  r.n_b = b.size();
  r.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

}  // namespace ctid
