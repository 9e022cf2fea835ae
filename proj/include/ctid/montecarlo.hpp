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

// Monte Carlo for the Levy process xi (Brownian part plus exponential
// downward jumps), the Lamperti time change X_t = exp(xi_{A_t}), and the
// hitting / occupation / first-passage functionals.
//
// Each path draws from its own Philox stream keyed by (seed, stream, index)
// and writes its outcome into slot `index`; aggregation runs over the slots
// in order, so results do not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"
#include "ctid/exponent_json.hpp"
#include "ctid/numerics.hpp"
#include "ctid/philox.hpp"
#include "ctid/scale.hpp"
#include "json.hpp"

namespace ctid {

/// Philox stream ids; the per-config `stream` field is mixed in above these.
enum class StreamPurpose : std::uint32_t { skeleton = 0, hitting = 1, occupation = 2, passage = 3 };

struct SimConfig {
  LevyExponent exponent = quadratic_exponent(1.0, 0.0);
  double alpha = 2.0;
  double x0 = 1e-3;
  double a = 1.0;
  double h = 5e-4;
  double s_max = 500.0;  // Levy-time horizon
  double t_max = std::numeric_limits<double>::infinity();  // self-similar-time horizon
  std::size_t n_paths = 1000;
  std::uint64_t seed = 42;
  std::uint32_t stream = 0;
  bool bridge = true;  // Brownian-bridge crossing correction inside cells
  double return_tol = 1e-4;
  unsigned workers = 0;  // 0: hardware concurrency
};

inline void validate(const SimConfig& c) {
  if (!(c.h > 0.0) || !std::isfinite(c.h)) detail::fail_validation("step h must be > 0");
  if (!(c.x0 > 0.0)) detail::fail_validation("start x0 must be > 0");
  if (!(c.a > 0.0)) detail::fail_validation("level a must be > 0");
  if (!(c.alpha > 0.0)) detail::fail_validation("alpha must be > 0");
  if (!(c.s_max > 0.0)) detail::fail_validation("horizon s_max must be > 0");
  if (!(c.t_max > 0.0)) detail::fail_validation("horizon t_max must be > 0");
  if (c.n_paths == 0) detail::fail_validation("n_paths must be >= 1");
  if (!(c.return_tol > 0.0 && c.return_tol < 1.0)) detail::fail_validation("return_tol must lie in (0, 1)");
}

/// The worker count is deliberately absent: it must not change any output.
inline nlohmann::json to_json(const SimConfig& c) {
  return {{"exponent", to_json(c.exponent)},
          {"alpha", c.alpha},
          {"x0", c.x0},
          {"a", c.a},
          {"h", c.h},
          {"s_max", c.s_max},
          {"t_max", std::isfinite(c.t_max) ? nlohmann::json(c.t_max) : nlohmann::json("inf")},
          {"paths", c.n_paths},
          {"seed", c.seed},
          {"stream", c.stream},
          {"bridge", c.bridge},
          {"return_tol", c.return_tol}};
}

struct JumpClass {
  double rate = 0.0;
  double scale = 0.0;  // jump sizes are Exp(scale)
};

/// Increment law of xi over one cell, read off the rational form of psi.
class LevyStepper {
 public:
  explicit LevyStepper(const LevyExponent& psi) {
    const auto r = psi.rational();
    if (!r) detail::fail_validation("exponent outside the simulable family (quadratic + cp_exp_jumps only)");
    if (r->killing > 0.0) detail::fail_validation("killed exponents are not simulated");
    sigma2_ = r->sigma2;
    drift_ = r->drift;
    for (const auto& j : r->jumps) {
      if (j.rate > 0.0) {
        jumps_.push_back({j.rate, j.jump_scale});
        total_rate_ += j.rate;
      }
    }
  }

  [[nodiscard]] double sigma2() const noexcept { return sigma2_; }
  [[nodiscard]] double drift() const noexcept { return drift_; }
  [[nodiscard]] double total_rate() const noexcept { return total_rate_; }
  [[nodiscard]] const std::vector<JumpClass>& jumps() const noexcept { return jumps_; }

  /// E[xi_1] = psi'(0+)
  [[nodiscard]] double mean() const noexcept {
    double m = drift_;
    for (const auto& j : jumps_) m -= j.rate / j.scale;
    return m;
  }

 private:
  double sigma2_ = 0.0;
  double drift_ = 0.0;
  double total_rate_ = 0.0;
  std::vector<JumpClass> jumps_;
};

/// Cell-by-cell increments for one path. Jumps arrive on an exponential clock
/// and are applied at the end of the cell they fall in.
class PathStream {
 public:
  struct Cell {
    double diffusive = 0.0;  // drift h + sigma sqrt(h) Z
    double jump = 0.0;       // total downward jump, >= 0
    int jump_count = 0;
  };

  PathStream(const LevyStepper& law, double h, std::uint64_t seed, std::uint32_t stream, std::uint64_t path)
      : law_(&law), h_(h), sd_(std::sqrt(law.sigma2() * h)), rng_(seed, stream, path) {
    if (law.total_rate() > 0.0) next_jump_ = draw_exp(law.total_rate());
  }

  Cell next() {
    Cell c;
    c.diffusive = law_->drift() * h_;
    if (sd_ > 0.0) c.diffusive += sd_ * normal_(rng_);
    t_ += h_;
    while (next_jump_ <= t_) {
      c.jump += draw_jump();
      ++c.jump_count;
      next_jump_ += draw_exp(law_->total_rate());
    }
    return c;
  }

  double uniform() { return rng_.uniform(); }
  [[nodiscard]] double time() const noexcept { return t_; }

 private:
  double draw_exp(double rate) { return exp_(rng_) / rate; }

  double draw_jump() {
    const auto& js = law_->jumps();
    std::size_t k = 0;
    if (js.size() > 1) {
      double u = rng_.uniform() * law_->total_rate();
      while (k + 1 < js.size() && u >= js[k].rate) u -= js[k++].rate;
    }
    return draw_exp(js[k].scale);
  }

  const LevyStepper* law_;
  double h_;
  double sd_;
  Philox4x32 rng_;
  boost::random::normal_distribution<double> normal_;
  boost::random::exponential_distribution<double> exp_;
  double t_ = 0.0;
  double next_jump_ = std::numeric_limits<double>::infinity();
};

namespace detail {

inline std::uint32_t stream_id(const SimConfig& c, StreamPurpose p) {
  return (c.stream << 2) | static_cast<std::uint32_t>(p);
}

/// Probability that a Brownian bridge over a cell of length h with endpoints
/// at distances d0, d1 >= 0 on the same side of a level touches it.
inline double bridge_touch(double d0, double d1, double sigma2, double h) {
  if (sigma2 <= 0.0) return 0.0;
  const double e = 2.0 * d0 * d1 / (sigma2 * h);
  return e > 40.0 ? 0.0 : std::exp(-e);
}

inline std::size_t max_steps(const SimConfig& c) {
  return static_cast<std::size_t>(std::ceil(c.s_max / c.h));
}

}  // namespace detail

/// xi on {0, h, 2h, ...} started at 0, `n_steps` cells.
inline std::vector<double> simulate_levy_skeleton(const SimConfig& cfg, std::uint64_t path_index, std::size_t n_steps) {
  validate(cfg);
  const LevyStepper law(cfg.exponent);
  PathStream ps(law, cfg.h, cfg.seed, detail::stream_id(cfg, StreamPurpose::skeleton), path_index);
  std::vector<double> xi(n_steps + 1, 0.0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const auto c = ps.next();
    xi[k + 1] = xi[k] + c.diffusive - c.jump;
  }
  return xi;
}

inline std::vector<double> simulate_levy_skeleton(const SimConfig& cfg, std::uint64_t path_index) {
  return simulate_levy_skeleton(cfg, path_index, detail::max_steps(cfg));
}

/// X in self-similar time from a skeleton of xi.
struct LampertiPath {
  double h = 0.0;
  double alpha = 0.0;
  std::vector<double> log_x;  // log x0 + xi_k
  std::vector<double> clock;  // int_0^{kh} exp(alpha log_x) du, trapezoid per cell
  bool censored = false;      // clock ended before t_max

  [[nodiscard]] double horizon() const { return clock.back(); }

  /// X_t, inverting the clock linearly inside a cell.
  [[nodiscard]] double operator()(double t) const {
    if (!(t >= 0.0) || t > horizon()) detail::fail_validation("time beyond the simulated horizon");
    auto it = std::upper_bound(clock.begin(), clock.end(), t);
    if (it == clock.end()) return std::exp(log_x.back());
    const auto k = static_cast<std::size_t>(it - clock.begin()) - 1;
    const double w = (t - clock[k]) / (clock[k + 1] - clock[k]);
    return std::exp(log_x[k] + w * (log_x[k + 1] - log_x[k]));
  }

  /// A_t, the Levy time reached at self-similar time t.
  [[nodiscard]] double levy_time(double t) const {
    if (!(t >= 0.0) || t > horizon()) detail::fail_validation("time beyond the simulated horizon");
    auto it = std::upper_bound(clock.begin(), clock.end(), t);
    if (it == clock.end()) return h * static_cast<double>(clock.size() - 1);
    const auto k = static_cast<std::size_t>(it - clock.begin()) - 1;
    return h * (static_cast<double>(k) + (t - clock[k]) / (clock[k + 1] - clock[k]));
  }
};

inline LampertiPath lamperti_transform(const std::vector<double>& skeleton, double h, double alpha, double x0,
                                       double t_max = std::numeric_limits<double>::infinity()) {
  if (!(x0 > 0.0)) detail::fail_validation("start x0 must be > 0");
  if (!(h > 0.0)) detail::fail_validation("step h must be > 0");
  if (skeleton.empty()) detail::fail_validation("empty skeleton");
  LampertiPath p;
  p.h = h;
  p.alpha = alpha;
  const double shift = std::log(x0);
  p.log_x.reserve(skeleton.size());
  p.clock.reserve(skeleton.size());
  double prev = std::exp(alpha * (skeleton[0] + shift));
  p.log_x.push_back(skeleton[0] + shift);
  p.clock.push_back(0.0);
  for (std::size_t k = 1; k < skeleton.size(); ++k) {
    const double lx = skeleton[k] + shift;
    const double cur = std::exp(alpha * lx);
    p.log_x.push_back(lx);
    p.clock.push_back(p.clock.back() + 0.5 * h * (prev + cur));
    prev = cur;
  }
  p.censored = p.horizon() < t_max;
  return p;
}

/// Hitting time of a from a skeleton without within-cell correction, or
/// nullopt if the skeleton never reaches a.
inline std::optional<double> hit_time_from_skeleton(const std::vector<double>& skeleton, double h, double alpha,
                                                    double x0, double a) {
  const double b = std::log(a) - std::log(x0);
  const double ea = std::pow(a, alpha);
  const double scale = std::pow(x0, alpha);
  double clock = 0.0;
  double e0 = scale * std::exp(alpha * skeleton[0]);
  if (skeleton[0] >= b) return 0.0;
  for (std::size_t k = 1; k < skeleton.size(); ++k) {
    const double x1 = skeleton[k];
    if (x1 >= b) {
      const double th = (b - skeleton[k - 1]) / (x1 - skeleton[k - 1]);
      return clock + 0.5 * th * h * (e0 + ea);
    }
    const double e1 = scale * std::exp(alpha * x1);
    clock += 0.5 * h * (e0 + e1);
    e0 = e1;
  }
  return std::nullopt;
}

struct PathRecord {
  double value = 0.0;     // hit time or occupation (partial if censored)
  bool censored = false;  // horizon reached first
  bool terminal_below_a = false;
};

struct PathEnsemble {
  std::string kind;  // "hitting" or "occupation"
  SimConfig config;
  std::vector<PathRecord> records;
  double stop_height = 0.0;  // occupation: log-height above a where paths stop

  [[nodiscard]] std::size_t censored() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const PathRecord& r) { return r.censored; }));
  }
  [[nodiscard]] double censored_fraction() const {
    return static_cast<double>(censored()) / static_cast<double>(records.size());
  }
  [[nodiscard]] std::vector<double> uncensored_values() const {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records) {
      if (!r.censored) v.push_back(r.value);
    }
    return v;
  }
};

struct PassageRecord {
  bool passed = false;     // went below a
  bool censored = false;   // horizon reached before passing or escaping
  double undershoot = 0.0;  // log(X at passage / a) <= 0
};

/// Runs fn(i) for i < n on `workers` threads; results land in slot i.
template <class R, class F>
std::vector<R> run_paths(std::size_t n, unsigned workers, F&& fn) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<R> out(n);
  constexpr std::size_t kBatch = 64;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (;;) {
        const std::size_t lo = next.fetch_add(kBatch);
        if (lo >= n) return;
        const std::size_t hi = std::min(n, lo + kBatch);
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(n);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// One path of T_a under P_{x0}. Upward crossings inside a cell are located
/// by linear interpolation; with the bridge correction on, a cell whose
/// endpoints both sit below a still hits with the Brownian-bridge touch
/// probability, at the cell midpoint.
inline PathRecord hitting_path(const LevyStepper& law, const SimConfig& cfg, std::uint64_t index) {
  PathStream ps(law, cfg.h, cfg.seed, detail::stream_id(cfg, StreamPurpose::hitting), index);
  const double b = std::log(cfg.a);
  const double ea = std::pow(cfg.a, cfg.alpha);
  const double h = cfg.h;
  double xi = std::log(cfg.x0);
  if (xi >= b) return {0.0, false, false};
  double e0 = std::exp(cfg.alpha * xi);
  double clock = 0.0;
  const std::size_t n = detail::max_steps(cfg);
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = ps.next();
    const double x1 = xi + c.diffusive;
    if (x1 >= b) {
      const double th = (b - xi) / (x1 - xi);
      return {clock + 0.5 * th * h * (e0 + ea), false, false};
    }
    if (cfg.bridge) {
      const double p = detail::bridge_touch(b - xi, b - x1, law.sigma2(), h);
      if (p > 0.0 && ps.uniform() < p) return {clock + 0.25 * h * (e0 + ea), false, false};
    }
    const double e1 = std::exp(cfg.alpha * x1);
    clock += 0.5 * h * (e0 + e1);
    if (clock > cfg.t_max) return {cfg.t_max, true, true};
    xi = x1 - c.jump;
    e0 = c.jump_count > 0 ? std::exp(cfg.alpha * xi) : e1;
  }
  return {clock, true, true};
}

/// log-height above a from which the return probability 1 - phi'(0+) W(d)
/// of the process with exponent phi drops below tol.
inline double return_height(const ScaleFunction& W, double tol) {
  auto ret = [&](double d) { return 1.0 - W.drift_at_zero() * W(d); };
  double hi = 1.0;
  while (ret(hi) >= tol) {
    hi *= 2.0;
    if (hi > 1e4) detail::fail_numeric("return probability does not decay");
  }
  double lo = 0.0;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ret(mid) >= tol ? lo : hi) = mid;
  }
  return hi;
}

/// One path of int_0^inf 1{X_s <= a} ds, accumulated in Levy time as
/// int 1{xi_u <= log a} exp(alpha xi_u) du with linear interpolation in cells
/// that straddle the level. The path stops once xi exceeds log a + stop_height.
inline PathRecord occupation_path(const LevyStepper& law, const SimConfig& cfg, double stop_height,
                                  std::uint64_t index) {
  PathStream ps(law, cfg.h, cfg.seed, detail::stream_id(cfg, StreamPurpose::occupation), index);
  const double b = std::log(cfg.a);
  const double ea = std::pow(cfg.a, cfg.alpha);
  const double stop = b + stop_height;
  const double h = cfg.h;
  double xi = std::log(cfg.x0);
  CompensatedSum occ;
  const std::size_t n = detail::max_steps(cfg);
  for (std::size_t k = 0; k < n; ++k) {
    if (xi >= stop) return {occ.value(), false, false};
    const auto c = ps.next();
    const double x1 = xi + c.diffusive;
    if (xi <= b && x1 <= b) {
      occ += 0.5 * h * (std::exp(cfg.alpha * xi) + std::exp(cfg.alpha * x1));
    } else if (xi <= b) {
      occ += 0.5 * h * (b - xi) / (x1 - xi) * (std::exp(cfg.alpha * xi) + ea);
    } else if (x1 <= b) {
      occ += 0.5 * h * (b - x1) / (xi - x1) * (ea + std::exp(cfg.alpha * x1));
    }
    xi = x1 - c.jump;
  }
  return {occ.value(), true, xi <= b};
}

/// First passage below a from x0 > a. Continuous crossings (and bridge
/// touches) give undershoot 0; a jump across gives log(X/a) after the jump.
inline PassageRecord passage_path(const LevyStepper& law, const SimConfig& cfg, double stop_height,
                                  std::uint64_t index) {
  PathStream ps(law, cfg.h, cfg.seed, detail::stream_id(cfg, StreamPurpose::passage), index);
  const double b = std::log(cfg.a);
  const double stop = b + stop_height;
  double xi = std::log(cfg.x0);
  if (xi <= b) return {true, false, xi - b};
  const std::size_t n = detail::max_steps(cfg);
  for (std::size_t k = 0; k < n; ++k) {
    if (xi >= stop) return {false, false, 0.0};
    const auto c = ps.next();
    const double x1 = xi + c.diffusive;
    if (x1 <= b) return {true, false, 0.0};
    if (cfg.bridge) {
      const double p = detail::bridge_touch(xi - b, x1 - b, law.sigma2(), cfg.h);
      if (p > 0.0 && ps.uniform() < p) return {true, false, 0.0};
    }
    xi = x1 - c.jump;
    if (xi <= b) return {true, false, xi - b};
  }
  return {false, true, 0.0};
}

/// T_a under P^psi_{x0}, psi = cfg.exponent.
inline PathEnsemble estimate_hitting(const SimConfig& cfg) {
  validate(cfg);
  if (!(cfg.x0 < cfg.a)) detail::fail_validation("hitting runs need x0 < a");
  const LevyStepper law(cfg.exponent);
  if (law.mean() < 0.0) detail::fail_validation("hitting runs need psi'(0+) >= 0");
  PathEnsemble e{"hitting", cfg, {}, 0.0};
  e.records = run_paths<PathRecord>(cfg.n_paths, cfg.workers,
                                    [&](std::size_t i) { return hitting_path(law, cfg, i); });
  return e;
}

/// Occupation of [0, a] under P^phi_{x0}, phi = cfg.exponent (typically a
/// simplified T_alpha psi). Paths stop once the analytic return probability
/// falls below cfg.return_tol.
inline PathEnsemble estimate_occupation(const SimConfig& cfg) {
  validate(cfg);
  const LevyStepper law(cfg.exponent);
  const ScaleFunction W(cfg.exponent);
  PathEnsemble e{"occupation", cfg, {}, return_height(W, cfg.return_tol)};
  e.records = run_paths<PathRecord>(cfg.n_paths, cfg.workers,
                                    [&](std::size_t i) { return occupation_path(law, cfg, e.stop_height, i); });
  return e;
}

/// First passage below a from x0 > a under phi = cfg.exponent.
inline std::vector<PassageRecord> estimate_passage(const SimConfig& cfg, double* stop_height = nullptr) {
  validate(cfg);
  const LevyStepper law(cfg.exponent);
  const ScaleFunction W(cfg.exponent);
  const double stop = return_height(W, cfg.return_tol);
  if (stop_height) *stop_height = stop;
  return run_paths<PassageRecord>(cfg.n_paths, cfg.workers,
                                  [&](std::size_t i) { return passage_path(law, cfg, stop, i); });
}

struct ProportionEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::size_t n = 0;
  std::size_t censored = 0;
};

/// Frequency of never passing below a; censored paths count as survivors.
inline ProportionEstimate ruin_frequency(const std::vector<PassageRecord>& recs) {
  ProportionEstimate p;
  p.n = recs.size();
  std::size_t survived = 0;
  for (const auto& r : recs) {
    if (!r.passed) ++survived;
    if (r.censored) ++p.censored;
  }
  p.mean = static_cast<double>(survived) / static_cast<double>(p.n);
  p.std_err = std::sqrt(p.mean * (1.0 - p.mean) / static_cast<double>(p.n));
  return p;
}

/// Mean of exp(u * undershoot) 1{passed}, the empirical overshoot transform.
inline ProportionEstimate passage_laplace(const std::vector<PassageRecord>& recs, double u) {
  ProportionEstimate p;
  p.n = recs.size();
  CompensatedSum s;
  CompensatedSum s2;
  for (const auto& r : recs) {
    const double v = r.passed ? std::exp(u * r.undershoot) : 0.0;
    s += v;
    s2 += v * v;
    if (r.censored) ++p.censored;
  }
  const auto n = static_cast<double>(p.n);
  p.mean = s.value() / n;
  if (p.n > 1) p.std_err = std::sqrt(std::max(0.0, (s2.value() - n * p.mean * p.mean) / (n - 1.0)) / n);
  return p;
}

struct LaplaceEstimate {
  double q = 0.0;
  double mean = 0.0;    // censored samples contribute exp(-q * partial value)
  double std_err = 0.0;
  double lower = 0.0;   // censored samples contribute 0
  std::size_t n = 0;
  std::size_t censored = 0;
};

/// Plug-in mean and standard error of exp(-q S) for each q.
inline std::vector<LaplaceEstimate> empirical_laplace(const std::vector<double>& samples,
                                                      const std::vector<bool>& censored,
                                                      const std::vector<double>& q_grid) {
  if (samples.empty()) detail::fail_validation("no samples");
  if (!censored.empty() && censored.size() != samples.size()) detail::fail_validation("censoring flags size mismatch");
  std::vector<LaplaceEstimate> out;
  const auto n = static_cast<double>(samples.size());
  for (double q : q_grid) {
    if (!(q >= 0.0)) detail::fail_validation("q must be >= 0");
    LaplaceEstimate e;
    e.q = q;
    e.n = samples.size();
    CompensatedSum s;
    CompensatedSum s2;
    CompensatedSum lo;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double v = q == 0.0 ? 1.0 : std::exp(-q * samples[i]);
      s += v;
      s2 += v * v;
      if (!censored.empty() && censored[i]) {
        ++e.censored;
      } else {
        lo += v;
      }
    }
    e.mean = s.value() / n;
    e.lower = lo.value() / n;
    if (samples.size() > 1) {
      const double var = std::max(0.0, (s2.value() - n * e.mean * e.mean) / (n - 1.0));
      e.std_err = std::sqrt(var / n);
    }
    out.push_back(e);
  }
  return out;
}

inline std::vector<LaplaceEstimate> empirical_laplace(const PathEnsemble& e, const std::vector<double>& q_grid) {
  std::vector<double> v;
  std::vector<bool> c;
  v.reserve(e.records.size());
  c.reserve(e.records.size());
  for (const auto& r : e.records) {
    v.push_back(r.value);
    c.push_back(r.censored);
  }
  return empirical_laplace(v, c, q_grid);
}

}  // namespace ctid
