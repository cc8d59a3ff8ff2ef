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

#ifndef COUNTNOISE_VERIFY_H_
#define COUNTNOISE_VERIFY_H_

#include <cstdint>
#include <vector>

#include "countnoise/mechanism_config.hpp"
#include "countnoise/sampler.hpp"
#include "countnoise/simplex.hpp"

namespace countnoise {

// Sampling box for randomized cross-checks. The defaults keep every draw in
// the range where both solution routes are exact.
struct RandomConfigBox {
  double eta_lo = 0.05;
  double eta_hi = 0.95;
  int half_width_lo = 1;
  int half_width_hi = 12;
  double epsilon_lo = 0.0;
  double epsilon_hi = 4.0;
};

MechanismConfig random_config(SplitMix64& rng,
                              const RandomConfigBox& box = {});

// Closed form versus the restricted linear program, over seeded random
// configs. Coefficients are only compared away from crossover boundaries,
// where the optimizer is unique.
struct EquivalenceReport {
  int configs = 0;
  int alpha_checked = 0;
  double max_delta_gap = 0.0;
  double max_alpha_gap = 0.0;
  double max_lp_violation = 0.0;
  MechanismConfig worst_config{};

  bool passed(double delta_tol = 1e-9, double alpha_tol = 1e-8) const {
    return max_delta_gap < delta_tol && max_alpha_gap < alpha_tol;
  }
};

EquivalenceReport oracle_equivalence(int configs, uint64_t seed);

// Singular <= event <= min(1, (2W+1) singular) over audited mechanism tables,
// ours and matched Gaussians. `corrupt_one` deliberately damages one table to
// prove the harness notices (negative control).
struct SandwichReport {
  int audits = 0;
  double worst_lower_slack = 0.0;  // max(singular - event), should stay <= 0
  double worst_upper_slack = 0.0;  // max(event - bound), should stay <= 0
  bool ok = true;
};

SandwichReport sandwich_check(int configs, uint64_t seed,
                              bool corrupt_one = false);

struct VerifyReport {
  EquivalenceReport equivalence;
  SandwichReport sandwich;
  LpStatus general_scale_status = LpStatus::kOptimal;
  double general_scale_delta = 0.0;
  bool passed = false;
};

// The full verification bundle: oracle equivalence, the sandwich sweep, and a
// desk-scale general-program solve (N = 3, D = 2, eta = 1/2).
VerifyReport run_verification(int configs, uint64_t seed,
                              bool corrupt_one = false);

}  // namespace countnoise

#endif  // COUNTNOISE_VERIFY_H_
