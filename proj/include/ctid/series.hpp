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

// The entire function I_{psi,alpha}(z) = sum_n a_n z^n with
// 1/a_n = prod_{k=1..n} psi(alpha k), and the first-passage Laplace transform
// E_x[exp(-q T_a)] = I(q x^alpha) / I(q a^alpha) built from it.

#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"
#include "ctid/numerics.hpp"

namespace ctid {

struct SeriesValue {
  double value = 1.0;
  std::size_t terms_used = 1;
  double tail_bound = 0.0;  // truncation remainder plus final rounding
};

inline constexpr std::size_t kMaxSeriesTerms = 100000;

class SeriesEvaluator {
 public:
  SeriesEvaluator(LevyExponent psi, double alpha, double tol = 1e-14)
      : psi_(std::move(psi)), alpha_(alpha), tol_(tol), memo_(std::make_shared<Memo>()) {
    if (!(alpha_ > 0.0)) detail::fail_validation("series index alpha must be > 0");
    theta_ = largest_root(psi_);
    if (!(theta_ < alpha_)) {
      detail::fail_validation("root >= alpha: largest root " + std::to_string(theta_) +
                              " is not below alpha = " + std::to_string(alpha_));
    }
  }

  [[nodiscard]] const LevyExponent& exponent() const noexcept { return psi_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double theta() const noexcept { return theta_; }
  [[nodiscard]] double tolerance() const noexcept { return tol_; }

  /// a_0 .. a_n
  [[nodiscard]] std::vector<double> coefficients(std::size_t n) const {
    ensure(n);
    std::vector<double> out(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out[k] = entry(k).coeff;
    return out;
  }

  /// psi(alpha k), memoized alongside the coefficients.
  [[nodiscard]] double psi_at_node(std::size_t k) const {
    ensure(k);
    return entry(k).psi;
  }

  [[nodiscard]] SeriesValue eval(double z) const {
    if (!(z >= 0.0)) detail::fail_validation("series argument must be >= 0");
    SeriesValue out;
    if (z == 0.0) return out;
    CompensatedSum sum;
    sum.add(1.0);
    double term = 1.0;
    double prev = 1.0;
    int small_run = 0;
    for (std::size_t n = 1; n <= kMaxSeriesTerms; ++n) {
      term *= z / psi_at_node(n);
      if (!std::isfinite(term)) detail::fail_numeric("series overflow at z = " + std::to_string(z));
      sum.add(term);
      small_run = (term < tol_ * sum.value() && term <= prev) ? small_run + 1 : 0;
      prev = term;
      if (small_run >= 2) {
        const double ratio = z / psi_at_node(n + 1);
        if (ratio < 0.5) {
          out.value = sum.value();
          out.terms_used = n + 1;
          out.tail_bound = term * ratio / (1.0 - ratio) + 2.0 * std::numeric_limits<double>::epsilon() * out.value;
          return out;
        }
      }
    }
    detail::fail_numeric("non-convergent at z = " + std::to_string(z));
  }

  /// Plain partial sum of the first `n_terms` terms (a_0 z^0 .. a_{n-1} z^{n-1}).
  [[nodiscard]] double partial_sum(double z, std::size_t n_terms) const {
    CompensatedSum sum;
    double term = 1.0;
    for (std::size_t n = 0; n < n_terms; ++n) {
      if (n > 0) term *= z / psi_at_node(n);
      sum.add(term);
    }
    return sum.value();
  }

  double operator()(double z) const { return eval(z).value; }

 private:
  struct Entry {
    double psi = 0.0;
    double coeff = 1.0;
  };
  static constexpr std::size_t kChunk = 1024;
  static constexpr std::size_t kMaxChunks = kMaxSeriesTerms / kChunk + 2;
  using Chunk = std::array<Entry, kChunk>;

  // Readers only touch entries below `size`; the single writer fills new
  // entries under the mutex and publishes them with a release store.
  struct Memo {
    std::mutex grow;
    std::atomic<std::size_t> size{0};
    std::array<std::unique_ptr<Chunk>, kMaxChunks> chunks;
  };

  [[nodiscard]] const Entry& entry(std::size_t k) const { return (*memo_->chunks[k / kChunk])[k % kChunk]; }

  void ensure(std::size_t k) const {
    if (k < memo_->size.load(std::memory_order_acquire)) return;
    if (k >= kMaxSeriesTerms + kChunk) detail::fail_numeric("series coefficient index too large");
    std::lock_guard lock(memo_->grow);
    std::size_t n = memo_->size.load(std::memory_order_relaxed);
    const std::size_t target = (k / kChunk + 1) * kChunk;
    while (n < target) {
      auto& chunk = memo_->chunks[n / kChunk];
      if (!chunk) chunk = std::make_unique<Chunk>();
      Entry& e = (*chunk)[n % kChunk];
      if (n == 0) {
        e = {0.0, 1.0};
      } else {
        e.psi = psi_(alpha_ * static_cast<double>(n));
        e.coeff = entry(n - 1).coeff / e.psi;
      }
      ++n;
    }
    memo_->size.store(n, std::memory_order_release);
  }

  LevyExponent psi_;
  double alpha_;
  double tol_;
  double theta_ = 0.0;
  std::shared_ptr<Memo> memo_;
};

/// a_0 .. a_n
inline std::vector<double> coefficients(const SeriesEvaluator& se, std::size_t n) { return se.coefficients(n); }

inline SeriesValue eval_series(const SeriesEvaluator& se, double z) { return se.eval(z); }

namespace detail {

// q * x^alpha with the x = 0 guard
inline double scaled_power(double q, double x, double alpha) {
  if (q == 0.0 || x == 0.0) return 0.0;
  return q * std::exp(alpha * std::log(x));
}

}  // namespace detail

/// E_x[exp(-q T_a)] for 0 <= x <= a.
inline double hitting_laplace(const SeriesEvaluator& se, double x, double a, double q) {
  if (!(a > 0.0)) detail::fail_validation("level a must be > 0");
  if (!(x >= 0.0)) detail::fail_validation("start x must be >= 0");
  if (x > a) detail::fail_validation("hitting transform needs x <= a (upward passage only)");
  if (!(q >= 0.0)) detail::fail_validation("q must be >= 0");
  if (x == a || q == 0.0) return 1.0;
  const double za = detail::scaled_power(q, a, se.alpha());
  return se(detail::scaled_power(q, x, se.alpha())) / se(za);
}

}  // namespace ctid
