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

#ifndef COUNTNOISE_MECHANISM_CONFIG_H_
#define COUNTNOISE_MECHANISM_CONFIG_H_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace countnoise {

// One mechanism design problem: release a true count n as Y = n + Z, where Z
// is integer noise supported on [-min(n, D) : D] that returns the exact count
// with probability eta and has zero bias. epsilon is the privacy parameter the
// mechanism is tuned against; max_count (N) is only needed when posing the
// general data-dependent problem over all counts 1..N.
struct MechanismConfig {
  double eta = 0.5;       // probability of releasing the exact count, in (0,1)
  int half_width = 1;     // D, half-width of the noise support, >= 1
  double epsilon = 0.0;   // privacy parameter, >= 0
  std::optional<int> max_count;  // N, largest true count (data-dependent mode)

  // eta = 1 would be the deterministic mechanism and eta = 0 has no
  // distinguished correct-release mass, so both endpoints are rejected.
  void check_valid() const {
    if (!(eta > 0.0) || !(eta < 1.0)) {
      throw std::invalid_argument("eta must lie strictly inside (0, 1), got " +
                                  std::to_string(eta));
    }
    if (half_width < 1) {
      throw std::invalid_argument("half_width (D) must be >= 1, got " +
                                  std::to_string(half_width));
    }
    if (!(epsilon >= 0.0)) {
      throw std::invalid_argument("epsilon must be >= 0, got " +
                                  std::to_string(epsilon));
    }
    if (max_count.has_value() && *max_count < 1) {
      throw std::invalid_argument("max_count (N) must be >= 1, got " +
                                  std::to_string(*max_count));
    }
  }

  double eta_bar() const { return 1.0 - eta; }

  // E = e^epsilon. May overflow to +inf for epsilon > ~709; the solver
  // switches to log-domain evaluation long before that matters.
  double exp_epsilon() const { return std::exp(epsilon); }

  // B = 2 / (1 - eta), the factor translating delta into coefficient mass.
  double b_coeff() const { return 2.0 / eta_bar(); }

  // C = 2 eta / (1 - eta), the reliability ratio the regime selection keys on.
  double c_ratio() const { return 2.0 * eta / eta_bar(); }
};

}  // namespace countnoise

#endif  // COUNTNOISE_MECHANISM_CONFIG_H_
