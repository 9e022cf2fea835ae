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

// Side-by-side analytic / empirical Laplace transforms with per-criterion
// verdicts, serialized as JSON.

#include <string>
#include <vector>

#include "json.hpp"

namespace ctid {

struct CriterionResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // observed statistic
  double threshold = 0.0;  // what it is compared against
  std::string detail;
};

/// Analytic comparison at one q: hitting transform vs occupation transform at x = 0.
struct AnalyticRow {
  double q = 0.0;
  double hitting = 0.0;     // E_0^psi[exp(-q T_a)]
  double occupation = 0.0;  // E_0^{T_alpha psi}[exp(-q int 1{X <= a})]
  double inverse_I = 0.0;   // 1 / I_{psi,alpha}(q a^alpha)
  double rel_discrepancy = 0.0;
};

/// Empirical comparison at one q.
struct EmpiricalRow {
  double q = 0.0;
  double target = 0.0;  // 1 / I_{psi,alpha}(q a^alpha)
  double hitting_mean = 0.0;
  double hitting_stderr = 0.0;
  double hitting_lower = 0.0;  // censored samples counted as 0
  double occupation_mean = 0.0;
  double occupation_stderr = 0.0;
  double occupation_lower = 0.0;
  double allowance = 0.0;  // 3 stderr + 2h
};

struct CTReport {
  std::string mode;  // "analytic" or "mc"
  nlohmann::json config;
  std::vector<AnalyticRow> analytic;
  std::vector<EmpiricalRow> empirical;
  std::vector<CriterionResult> criteria;
  nlohmann::json extras = nlohmann::json::object();

  [[nodiscard]] bool passed() const {
    for (const auto& c : criteria) {
      if (!c.passed) return false;
    }
    return true;
  }
};

inline nlohmann::json to_json(const CriterionResult& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold}, {"detail", c.detail}};
}

inline nlohmann::json to_json(const CTReport& r) {
  nlohmann::json j;
  j["mode"] = r.mode;
  j["config"] = r.config;
  if (!r.analytic.empty()) {
    auto rows = nlohmann::json::array();
    for (const auto& a : r.analytic) {
      rows.push_back({{"q", a.q},
                      {"hitting_laplace", a.hitting},
                      {"occupation_laplace", a.occupation},
                      {"inverse_I", a.inverse_I},
                      {"rel_discrepancy", a.rel_discrepancy}});
    }
    j["analytic"] = rows;
  }
  if (!r.empirical.empty()) {
    auto rows = nlohmann::json::array();
    for (const auto& e : r.empirical) {
      rows.push_back({{"q", e.q},
                      {"target", e.target},
                      {"hitting_mean", e.hitting_mean},
                      {"hitting_stderr", e.hitting_stderr},
                      {"hitting_lower_bound", e.hitting_lower},
                      {"occupation_mean", e.occupation_mean},
                      {"occupation_stderr", e.occupation_stderr},
                      {"occupation_lower_bound", e.occupation_lower},
                      {"allowance", e.allowance}});
    }
    j["empirical"] = rows;
  }
  auto cs = nlohmann::json::array();
  for (const auto& c : r.criteria) cs.push_back(to_json(c));
  j["criteria"] = cs;
  if (!r.extras.empty()) j["extras"] = r.extras;
  j["passed"] = r.passed();
  return j;
}

}  // namespace ctid
