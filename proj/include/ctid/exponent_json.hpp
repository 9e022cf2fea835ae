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

// JSON descriptor for exponents:
// {"components":[{"kind":"quadratic","sigma2":1.0,"drift":0.5},
//                {"kind":"cp_exp_jumps","rate":1.0,"jump_scale":2.0},
//                {"kind":"pochhammer","scale":1.0,"index":1.5},
//                {"kind":"killing","q":0.5}],
//  "wrappers":[{"kind":"tee","beta":2.0},{"kind":"esscher","beta":1.0}]}

#include <string>

#include "json.hpp"

#include "ctid/error.hpp"
#include "ctid/exponent.hpp"

namespace ctid {

inline nlohmann::json to_json(const LevyExponent& psi) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : psi.components()) {
    if (const auto* q = std::get_if<Quadratic>(&c)) {
      comps.push_back({{"kind", "quadratic"}, {"sigma2", q->sigma2}, {"drift", q->drift}});
    } else if (const auto* j = std::get_if<ExpJumps>(&c)) {
      comps.push_back({{"kind", "cp_exp_jumps"}, {"rate", j->rate}, {"jump_scale", j->jump_scale}});
    } else if (const auto* p = std::get_if<Pochhammer>(&c)) {
      comps.push_back({{"kind", "pochhammer"}, {"scale", p->scale}, {"index", p->index}});
    } else {
      comps.push_back({{"kind", "killing"}, {"q", std::get<Killing>(c).q}});
    }
  }
  nlohmann::json wraps = nlohmann::json::array();
  for (const auto& w : psi.wrappers()) {
    wraps.push_back({{"kind", w.kind == WrapperKind::tee ? "tee" : "esscher"}, {"beta", w.beta}});
  }
  return {{"components", comps}, {"wrappers", wraps}};
}

namespace detail {

inline double number_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    fail_validation(std::string("exponent descriptor: missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace detail

inline LevyExponent exponent_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("components") || !j.at("components").is_array()) {
    detail::fail_validation("exponent descriptor needs a 'components' array");
  }
  std::vector<Component> cs;
  for (const auto& c : j.at("components")) {
    const std::string kind = c.value("kind", "");
    if (kind == "quadratic") {
      cs.emplace_back(Quadratic{c.value("sigma2", 0.0), c.value("drift", 0.0)});
    } else if (kind == "cp_exp_jumps") {
      cs.emplace_back(ExpJumps{detail::number_field(c, "rate"), detail::number_field(c, "jump_scale")});
    } else if (kind == "pochhammer") {
      cs.emplace_back(Pochhammer{c.value("scale", 1.0), detail::number_field(c, "index")});
    } else if (kind == "killing") {
      cs.emplace_back(Killing{detail::number_field(c, "q")});
    } else {
      detail::fail_validation("unknown component kind '" + kind + "'");
    }
  }
  std::vector<Wrapper> ws;
  if (j.contains("wrappers")) {
    for (const auto& w : j.at("wrappers")) {
      const std::string kind = w.value("kind", "");
      if (kind != "tee" && kind != "esscher") detail::fail_validation("unknown wrapper kind '" + kind + "'");
      ws.push_back({kind == "tee" ? WrapperKind::tee : WrapperKind::esscher, detail::number_field(w, "beta")});
    }
  }
  return LevyExponent(std::move(cs), std::move(ws));
}

}  // namespace ctid
