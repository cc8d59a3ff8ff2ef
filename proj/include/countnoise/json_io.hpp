// Copyright 2026 The CountNoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COUNTNOISE_JSON_IO_H_
#define COUNTNOISE_JSON_IO_H_

#include <json.hpp>

#include "countnoise/lp_oracle.hpp"
#include "countnoise/noise_pmf.hpp"
#include "countnoise/optimal.hpp"
#include "countnoise/sampler.hpp"
#include "countnoise/simplex.hpp"

namespace countnoise {

inline void to_json(nlohmann::json& j, const NoisePmf& pmf) {
  nlohmann::json mass = nlohmann::json::array();
  for (int i = 0; i < pmf.support_size(); ++i) {
    mass.push_back({pmf.support_lo + i, pmf.mass[static_cast<size_t>(i)]});
  }
  j = nlohmann::json{{"n", pmf.true_count},
                     {"eta", pmf.eta},
                     {"D", pmf.half_width},
                     {"mass", std::move(mass)}};
}

inline void to_json(nlohmann::json& j, const OptimalSolution& solution) {
  j = nlohmann::json{{"eta", solution.config.eta},
                     {"D", solution.config.half_width},
                     {"epsilon", solution.config.epsilon},
                     {"regime", solution.regime},
                     {"delta_star", solution.delta_star},
                     {"dp_delta", solution.dp_delta},
                     {"alphas", solution.alphas},
                     {"variance", solution.variance}};
}

inline void to_json(nlohmann::json& j, const LpSolution& solution) {
  j = nlohmann::json{{"status", to_string(solution.status)},
                     {"optimum", solution.optimum},
                     {"assignment", solution.assignment},
                     {"iterations", solution.iterations}};
}

inline void to_json(nlohmann::json& j, const DeltaAudit& audit) {
  j = nlohmann::json{{"epsilon", audit.epsilon},
                     {"singular_delta", audit.singular_delta},
                     {"event_delta", audit.event_delta},
                     {"worst_singleton",
                      {{"n", audit.worst_count},
                       {"direction", audit.worst_direction},
                       {"y", audit.worst_output}}},
                     {"bound_2d1", audit.bound_2d1}};
}

inline void to_json(nlohmann::json& j, const AuditReport& report) {
  nlohmann::json mass = nlohmann::json::array();
  for (size_t i = 0; i < report.empirical_mass.size(); ++i) {
    mass.push_back(
        {report.support_lo + static_cast<int>(i), report.empirical_mass[i]});
  }
  j = nlohmann::json{{"trials", report.trials},
                     {"rng", report.rng_name},
                     {"seed", report.seed},
                     {"empirical_mass", std::move(mass)},
                     {"tv_distance", report.tv_distance},
                     {"empirical_correct_rate", report.empirical_correct_rate},
                     {"in_range_rate", report.in_range_rate}};
}

}  // namespace countnoise

#endif  // COUNTNOISE_JSON_IO_H_
