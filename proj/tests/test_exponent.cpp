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


#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <gtest/gtest.h>

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"
#include "ctid/exponent_json.hpp"
#include "ctid/numerics.hpp"
#include "ctid/presets.hpp"

using namespace ctid;

namespace {

const std::vector<std::string> kPresets = {"bessel:1",       "bessel:3",   "killed-bessel:3,1", "stable:1.5",
                                           "tee-stable:1.5,0.5", "sawtooth:3,1", "sawtooth:1.5,0.7"};

void expect_same_on_grid(const LevyExponent& f, const LevyExponent& g, const std::vector<double>& grid,
                         double tol = 1e-12) {
  for (double u : grid) {
    const double a = f(u);
    const double b = g(u);
    EXPECT_LE(std::abs(a - b), tol * (1.0 + std::abs(b))) << "u = " << u;
  }
}

}  // namespace

TEST(Evaluate, BesselAtTwo) { EXPECT_DOUBLE_EQ(bessel_exponent(3.0)(2.0), 3.0); }

TEST(Evaluate, UnkilledFamiliesVanishAtZero) {
  for (const char* p : {"bessel:1", "tee-stable:1.5,0.5", "sawtooth:3,1"}) {
    EXPECT_EQ(parse_preset(p).exponent(0.0), 0.0) << p;
  }
  EXPECT_NEAR(stable_exponent(1.5)(0.0), 1.0 / std::tgamma(-0.5), 1e-15);
}

TEST(Evaluate, StableRemovableZero) {
  const auto psi = stable_exponent(1.5);
  EXPECT_EQ(psi(0.5), 0.0);
  EXPECT_NEAR(psi(0.5 + 1e-9), 1e-9 * std::tgamma(1.5) / std::tgamma(1.0), 1e-15);
}

TEST(Evaluate, StableMatchesGammaRatio) {
  const auto psi = stable_exponent(1.7);
  for (double u : {0.0, 0.2, 1.0, 3.3, 10.0}) {
    EXPECT_NEAR(psi(u), std::tgamma(u + 1.0) / std::tgamma(u - 0.7), 1e-12 * (1.0 + std::abs(psi(u))));
  }
}

TEST(Evaluate, NegativeArgumentRejected) { EXPECT_THROW((void)bessel_exponent(3.0)(-0.1), validation_error); }

TEST(Evaluate, PochhammerOverflowReported) {
  EXPECT_THROW((void)stable_exponent(1.5)(1e300), numeric_error);
}

TEST(Evaluate, InvalidComponentsRejected) {
  EXPECT_THROW(LevyExponent({ExpJumps{-1.0, 1.0}}), validation_error);
  EXPECT_THROW(LevyExponent({ExpJumps{1.0, 0.0}}), validation_error);
  EXPECT_THROW(LevyExponent({Quadratic{-1.0, 0.0}}), validation_error);
  EXPECT_THROW(LevyExponent({Pochhammer{1.0, 2.5}}), validation_error);
  EXPECT_THROW(LevyExponent({Killing{-0.1}}), validation_error);
  EXPECT_THROW(tee_transform(bessel_exponent(3.0), -1.0), validation_error);
}

TEST(KillingRate, Examples) {
  EXPECT_EQ(killing_rate(quadratic_exponent(1.0, 0.0)), 0.0);
  EXPECT_DOUBLE_EQ(killing_rate(killed_bessel_exponent(3.0, 0.5)), 0.5);
  EXPECT_EQ(killing_rate(tee_transform(killed_bessel_exponent(3.0, 0.5), 1.0)), 0.0);
}

TEST(RightDerivative, Examples) {
  EXPECT_EQ(right_derivative_at_zero(bessel_exponent(2.0)), 0.0);
  EXPECT_NEAR(right_derivative_at_zero(sawtooth_exponent(3.0, 1.0)), 0.5, 1e-15);
  for (const char* p : {"bessel:3", "killed-bessel:3,1", "stable:1.5", "sawtooth:3,1"}) {
    const auto pr = parse_preset(p);
    const double alpha = pr.alpha;
    EXPECT_NEAR(right_derivative_at_zero(tee_transform(pr.exponent, alpha)), pr.exponent(alpha) / alpha,
                1e-8 * pr.exponent(alpha))
        << p;
  }
}

TEST(RightDerivative, PochhammerAgainstDigamma) {
  // d/du Gamma(u+1)/Gamma(u+1-a) = ratio * (digamma(u+1) - digamma(u+1-a))
  for (double a : {1.2, 1.5, 1.8}) {
    const auto psi = stable_exponent(a);
    for (double u : {0.0, 1.0, 2.5}) {
      const double ratio = std::tgamma(u + 1.0) / std::tgamma(u + 1.0 - a);
      const double ref = ratio * (boost::math::digamma(u + 1.0) - boost::math::digamma(u + 1.0 - a));
      EXPECT_NEAR(psi.derivative(u), ref, 1e-8 * std::max(1.0, std::abs(ref))) << a << " " << u;
    }
  }
}

TEST(LargestRoot, Examples) {
  EXPECT_NEAR(largest_root(bessel_exponent(1.0)), 1.0, 1e-12);
  EXPECT_NEAR(largest_root(stable_exponent(1.5)), 0.5, 1e-12);
  EXPECT_EQ(largest_root(quadratic_exponent(1.0, 1.0)), 0.0);
  // killed Bessel: theta_+ = 1 - nu/2 + sqrt((nu/2 - 1)^2 + 2 kappa)
  const double nu = 3.0;
  const double kappa = 1.0;
  EXPECT_NEAR(largest_root(killed_bessel_exponent(nu, kappa)),
              1.0 - nu / 2.0 + std::sqrt((nu / 2.0 - 1.0) * (nu / 2.0 - 1.0) + 2.0 * kappa), 1e-12);
}

TEST(LargestRoot, RootProperty) {
  for (const auto& p : kPresets) {
    const auto psi = parse_preset(p).exponent;
    const double th = largest_root(psi);
    EXPECT_LT(std::abs(psi(th)), 1e-10) << p;
    if (th > 0.0) {
      EXPECT_GT(psi(th + 1e-6), 0.0) << p;
    }
  }
}

TEST(LargestRoot, NoRootBelowBound) {
  const LevyExponent psi({Quadratic{0.0, -1.0}});
  try {
    (void)largest_root(psi);
    FAIL() << "expected failure";
  } catch (const numeric_error& e) {
    EXPECT_NE(std::string(e.what()).find("root beyond search bound"), std::string::npos);
  }
}

TEST(Esscher, Examples) {
  const auto psi = quadratic_exponent(1.0, 0.0);
  expect_same_on_grid(esscher(psi, 0.0), psi, linspace(0.0, 10.0, 50), 0.0);
  EXPECT_DOUBLE_EQ(esscher(psi, 1.0)(1.0), 1.5);
  for (const auto& p : kPresets) EXPECT_EQ(esscher(parse_preset(p).exponent, 0.7)(0.0), 0.0) << p;
}

TEST(Esscher, RemovesKilling) {
  EXPECT_EQ(killing_rate(esscher(killed_bessel_exponent(3.0, 1.0), 2.0)), 0.0);
}

TEST(Tee, Examples) {
  const std::vector<double> grid{0.5, 1.0, 2.0, 5.0};
  expect_same_on_grid(tee_transform(bessel_exponent(3.0), 2.0), bessel_exponent(5.0), grid);
  const auto psi = parse_preset("sawtooth:3,1").exponent;
  expect_same_on_grid(tee_transform(tee_transform(psi, 1.0), 1.0), tee_transform(psi, 2.0), grid);
  EXPECT_DOUBLE_EQ(tee_transform(quadratic_exponent(1.0, 0.0), 1.0)(2.0), 3.0);
  for (const auto& p : kPresets) {
    const auto e = parse_preset(p).exponent;
    expect_same_on_grid(tee_transform(e, 0.0), e, linspace(0.0, 10.0, 50), 0.0);
  }
}

TEST(Tee, BesselClosure) {
  for (double nu : {1.0, 2.0, 3.0, 4.0}) {
    expect_same_on_grid(tee_transform(bessel_exponent(nu), 2.0), bessel_exponent(nu + 2.0), linspace(0.0, 10.0, 50));
  }
}

TEST(Tee, CompositionProperty) {
  const auto grid = linspace(0.0, 10.0, 50);
  for (const auto& p : kPresets) {
    const auto psi = parse_preset(p).exponent;
    for (double b : {0.5, 1.0, 2.0}) {
      for (double g : {0.5, 1.0, 2.0}) {
        expect_same_on_grid(tee_transform(tee_transform(psi, g), b), tee_transform(psi, b + g), grid);
      }
    }
  }
}

TEST(Tee, Linearity) {
  const auto p1 = parse_preset("sawtooth:3,1").exponent;
  const auto p2 = parse_preset("stable:1.5").exponent;
  const auto p3 = killed_bessel_exponent(3.0, 1.0);
  for (double b : {0.5, 2.0}) {
    for (double u : linspace(0.0, 10.0, 50)) {
      const double lhs = tee_transform(2.0 * p1 + 0.5 * p2 + p3, b)(u);
      const double rhs = 2.0 * tee_transform(p1, b)(u) + 0.5 * tee_transform(p2, b)(u) + tee_transform(p3, b)(u);
      EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs)));
    }
  }
}

TEST(Tee, ValidityPreservation) {
  const auto grid = linspace(0.0, 10.0, 101);
  for (const auto& p : kPresets) {
    const auto psi = parse_preset(p).exponent;
    for (double b : {0.5, 1.0, 2.0}) {
      const auto d = validate(tee_transform(psi, b), grid);
      EXPECT_TRUE(d.convex()) << p << " beta " << b;
      EXPECT_EQ(d.psi_at_zero, 0.0) << p;
      EXPECT_EQ(d.killing, 0.0) << p;
    }
  }
}

TEST(Tee, KilledQuadraticBecomesJumps) {
  const auto t = tee_transform(killed_bessel_exponent(3.0, 1.0), 2.0);
  const auto r = t.rational();
  ASSERT_TRUE(r.has_value());
  EXPECT_DOUBLE_EQ(r->sigma2, 1.0);
  EXPECT_DOUBLE_EQ(r->drift, 0.5 + 1.0);
  EXPECT_EQ(r->killing, 0.0);
  ASSERT_EQ(r->jumps.size(), 1U);
  EXPECT_DOUBLE_EQ(r->jumps[0].rate, 1.0);
  EXPECT_DOUBLE_EQ(r->jumps[0].jump_scale, 2.0);
}

TEST(Simplified, AgreesWithWrappedEvaluation) {
  const auto grid = linspace(0.0, 10.0, 50);
  for (const char* p : {"bessel:3", "killed-bessel:3,1", "sawtooth:3,1", "sawtooth:1.5,0.7"}) {
    const auto psi = parse_preset(p).exponent;
    for (const auto& w : {tee_transform(psi, 1.3), esscher(psi, 0.4), tee_transform(esscher(psi, 0.4), 2.0),
                          esscher(tee_transform(psi, 2.0), 0.7)}) {
      const auto s = w.simplified();
      EXPECT_TRUE(s.wrappers().empty());
      expect_same_on_grid(s, w, grid);
    }
  }
}

TEST(Simplified, NonRationalKeepsWrappers) {
  const auto t = tee_transform(stable_exponent(1.5), 1.5);
  EXPECT_FALSE(t.rational().has_value());
  EXPECT_EQ(t.simplified().wrappers().size(), 1U);
}

TEST(Validate, Examples) {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(0.1 * i);
  EXPECT_TRUE(validate(bessel_exponent(3.0), grid).convex());
  EXPECT_TRUE(validate(tee_transform(stable_exponent(1.5), 1.5), grid).convex());
  const auto d = validate(LevyExponent({Quadratic{0.0, -1.0}}), grid);
  EXPECT_TRUE(d.convex());
  EXPECT_FALSE(d.theta.has_value());
  EXPECT_NE(d.theta_error.find("root beyond search bound"), std::string::npos);
  EXPECT_LT(d.derivative_at_zero, 0.0);
}

TEST(Json, RoundTrip) {
  for (const auto& p : kPresets) {
    const auto psi = tee_transform(esscher(parse_preset(p).exponent, 0.3), 1.1);
    const auto back = exponent_from_json(nlohmann::json::parse(to_json(psi).dump()));
    expect_same_on_grid(back, psi, linspace(0.0, 10.0, 20), 0.0);
  }
}

TEST(Json, SchemaExample) {
  const auto j = nlohmann::json::parse(
      R"({"components":[{"kind":"quadratic","sigma2":1.0,"drift":0.5}],"wrappers":[{"kind":"tee","beta":2.0}]})");
  expect_same_on_grid(exponent_from_json(j), bessel_exponent(5.0), linspace(0.0, 10.0, 20));
}

TEST(Json, RejectsUnknownKind) {
  const auto j = nlohmann::json::parse(R"({"components":[{"kind":"cubic"}]})");
  EXPECT_THROW(exponent_from_json(j), validation_error);
}

TEST(Presets, ConstraintsNameTheCondition) {
  auto message = [](const char* p) {
    try {
      (void)parse_preset(p);
    } catch (const validation_error& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message("killed-bessel:3,4").find("kappa < nu"), std::string::npos);
  EXPECT_NE(message("stable:2").find("1 < alpha < 2"), std::string::npos);
  EXPECT_NE(message("sawtooth:1.5,0.2").find("gamma"), std::string::npos);
  EXPECT_NE(message("bessel:-1").find("nu > 0"), std::string::npos);
  EXPECT_NE(message("nonsense:1").find("unknown preset"), std::string::npos);
  EXPECT_NE(message("bessel:1,2").find("parameter"), std::string::npos);
}

TEST(Presets, SawtoothRecurrentRegime) {
  const auto psi = sawtooth_exponent(1.5, 0.7);
  EXPECT_LT(right_derivative_at_zero(psi), 0.0);
  EXPECT_GT(largest_root(psi), 0.0);
}

TEST(Concurrency, SharedExponentEvaluatesConsistently) {
  const auto psi = tee_transform(stable_exponent(1.5), 0.5);
  const auto grid = linspace(0.0, 20.0, 400);
  std::vector<double> ref;
  for (double u : grid) ref.push_back(psi(u));
  std::vector<std::thread> ts;
  std::vector<int> ok(4, 1);
  for (int t = 0; t < 4; ++t) {
    ts.emplace_back([&, t] {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (psi(grid[i]) != ref[i]) ok[t] = 0;
      }
    });
  }
  for (auto& t : ts) t.join();
  for (int v : ok) EXPECT_EQ(v, 1);
}
