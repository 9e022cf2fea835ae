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

// Named exponent families: Bessel, killed Bessel, Lamperti-stable,
// T-Lamperti-stable and the spectrally negative saw-tooth process.

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"

namespace ctid {

enum class Family { bessel, killed_bessel, stable, tee_stable, sawtooth };

struct Preset {
  Family family = Family::bessel;
  std::vector<double> params;
  LevyExponent exponent;
  double alpha = 2.0;  // self-similarity index the family is usually paired with
  std::string name;
};

/// psi_nu(u) = u^2/2 + (nu/2 - 1) u
inline LevyExponent bessel_exponent(double nu) {
  if (!(nu > 0.0)) detail::fail_validation("bessel preset requires nu > 0");
  return quadratic_exponent(1.0, nu / 2.0 - 1.0);
}

/// psi_nu(u) - kappa
inline LevyExponent killed_bessel_exponent(double nu, double kappa) {
  if (!(nu > 0.0)) detail::fail_validation("killed-bessel preset requires nu > 0");
  if (!(kappa > 0.0)) detail::fail_validation("killed-bessel preset requires kappa > 0");
  if (!(kappa < nu)) detail::fail_validation("killed-bessel preset requires kappa < nu (so that theta_+ < 2)");
  return LevyExponent({Quadratic{1.0, nu / 2.0 - 1.0}, Killing{kappa}});
}

/// psi_alpha(u) = (u + 1 - alpha)_alpha with unit scale
inline LevyExponent stable_exponent(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) detail::fail_validation("stable preset requires 1 < alpha < 2");
  return LevyExponent({Pochhammer{1.0, alpha}});
}

/// psi_{alpha,beta} = T_beta psi_alpha
inline LevyExponent tee_stable_exponent(double alpha, double beta) {
  if (!(beta > 0.0)) detail::fail_validation("tee-stable preset requires beta > 0");
  return tee_transform(stable_exponent(alpha), beta);
}

/// u (u + gamma - 2) / (u + gamma + kappa - 2): unit drift minus a compound
/// Poisson process of rate kappa with Exp(gamma + kappa - 2) jumps.
inline LevyExponent sawtooth_exponent(double gamma, double kappa) {
  const bool transient = gamma >= 2.0 && kappa > 0.0;
  const bool recurrent = gamma > 2.0 - kappa && gamma < 2.0 && kappa < 1.0 && kappa > 0.0;
  if (!transient && !recurrent) {
    detail::fail_validation(
        "sawtooth preset requires either gamma >= 2 and kappa > 0, or gamma in (2 - kappa, 2) with kappa < 1");
  }
  return LevyExponent({Quadratic{0.0, 1.0}, ExpJumps{kappa, gamma + kappa - 2.0}});
}

namespace detail {

inline std::vector<double> parse_number_list(std::string_view text, char sep = ',') {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      fail_validation("cannot parse number '" + item + "'");
    }
    if (used != item.size()) fail_validation("cannot parse number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Parses `bessel:3`, `killed-bessel:3,1`, `stable:1.5`, `tee-stable:1.5,0.5`,
/// `sawtooth:3,1`.
inline Preset parse_preset(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) detail::fail_validation("preset must look like name:params");
  const std::string_view name = spec.substr(0, colon);
  Preset p;
  p.name = std::string(spec);
  p.params = detail::parse_number_list(spec.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (p.params.size() != n) {
      detail::fail_validation("preset '" + std::string(name) + "' takes " + std::to_string(n) + " parameter(s)");
    }
  };
  if (name == "bessel") {
    need(1);
    p.family = Family::bessel;
    p.exponent = bessel_exponent(p.params[0]);
    p.alpha = 2.0;
  } else if (name == "killed-bessel") {
    need(2);
    p.family = Family::killed_bessel;
    p.exponent = killed_bessel_exponent(p.params[0], p.params[1]);
    p.alpha = 2.0;
  } else if (name == "stable") {
    need(1);
    p.family = Family::stable;
    p.exponent = stable_exponent(p.params[0]);
    p.alpha = p.params[0];
  } else if (name == "tee-stable") {
    need(2);
    p.family = Family::tee_stable;
    p.exponent = tee_stable_exponent(p.params[0], p.params[1]);
    p.alpha = p.params[0];
  } else if (name == "sawtooth") {
    need(2);
    p.family = Family::sawtooth;
    p.exponent = sawtooth_exponent(p.params[0], p.params[1]);
    p.alpha = 1.0;
  } else {
    detail::fail_validation("unknown preset '" + std::string(name) + "'");
  }
  return p;
}

}  // namespace ctid
