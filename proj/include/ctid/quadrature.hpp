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
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ctid/error.hpp"

namespace ctid {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

inline constexpr std::size_t kQuadratureMaxIntervals = 2000;

namespace detail {

struct GkPiece {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const GkPiece& o) const { return error < o.error; }
};

template <class F>
GkPiece gk_piece(F& f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  if (!std::isfinite(v)) {
    fail_numeric("quadrature failure: non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {a, b, v, err};
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod on [a, b]: the piece with the
/// largest error estimate is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol * |integral|) or the interval budget runs out, which
/// is reported as a failure with the achieved error.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol = 1e-11, double rel_tol = 1e-12) {
  if (a == b) return {};
  std::priority_queue<detail::GkPiece> heap;
  heap.push(detail::gk_piece(f, a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && heap.size() < kQuadratureMaxIntervals) {
    const auto worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      heap.push(worst);
      break;
    }
    const auto left = detail::gk_piece(f, worst.a, m);
    const auto right = detail::gk_piece(f, m, worst.b);
    heap.push(left);
    heap.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // resum to drop the drift of the running updates
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  const double tol = std::max(abs_tol, rel_tol * std::abs(value));
  if (!std::isfinite(value) || error > tol) {
    detail::fail_numeric("quadrature failure: achieved error " + std::to_string(error) + " above tolerance " +
                         std::to_string(tol) + " on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {value, error};
}

}  // namespace ctid
