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

#include "countnoise/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "countnoise/gaussian.hpp"
#include "countnoise/lp_oracle.hpp"
#include "countnoise/optimal.hpp"

namespace countnoise {

MechanismConfig random_config(SplitMix64& rng, const RandomConfigBox& box) {
  MechanismConfig config;
  config.eta = box.eta_lo + (box.eta_hi - box.eta_lo) * rng.next_double();
  const int span = box.half_width_hi - box.half_width_lo + 1;
  config.half_width =
      box.half_width_lo +
      static_cast<int>(rng.next_double() * static_cast<double>(span)) % span;
  config.epsilon =
      box.epsilon_lo + (box.epsilon_hi - box.epsilon_lo) * rng.next_double();
  return config;
}

namespace {

// Distance of C from the nearest crossover, relative to max(1, C). Coefficient
// uniqueness fails on the crossover set itself; this margin keeps the
// comparison away from it.
double boundary_margin(const MechanismConfig& config) {
  const BoundSet bounds = compute_bound_set(config);
  double margin = std::numeric_limits<double>::infinity();
  for (double crossing : bounds.crossovers) {
    margin = std::min(margin, std::abs(bounds.c_ratio - crossing));
  }
  return margin / std::max(1.0, bounds.c_ratio);
}

// The optimizer is unique away from crossovers, but a floating-point solver
// can only tell two vertices apart when their objective values differ by more
// than its resolution. Once delta_star falls toward 1e-12 the whole optimal
// face is flat at solver precision, so coefficient comparison is meaningful
// only above this scale.
constexpr double kAlphaComparableDelta = 1e-10;

}  // namespace

EquivalenceReport oracle_equivalence(int configs, uint64_t seed) {
  EquivalenceReport report;
  SplitMix64 rng(seed);
  for (int trial = 0; trial < configs; ++trial) {
    const MechanismConfig config = random_config(rng);
    const OptimalSolution closed = optimal_alphas(config);
    const LinearProgram lp = restricted_lp(config);
    const LpSolution lp_solution = solve_simplex(lp);
    ++report.configs;

    const double delta_gap =
        std::abs(closed.delta_star - lp_solution.optimum);
    if (delta_gap > report.max_delta_gap) {
      report.max_delta_gap = delta_gap;
      report.worst_config = config;
    }
    report.max_lp_violation =
        std::max(report.max_lp_violation,
                 max_constraint_violation(lp, lp_solution.assignment));

    if (boundary_margin(config) > 1e-4 &&
        closed.delta_star > kAlphaComparableDelta) {
      ++report.alpha_checked;
      for (int i = 1; i <= config.half_width; ++i) {
        const double gap =
            std::abs(closed.alphas[static_cast<size_t>(i - 1)] -
                     lp_solution.assignment[static_cast<size_t>(i)]);
        report.max_alpha_gap = std::max(report.max_alpha_gap, gap);
      }
    }
  }
  return report;
}

SandwichReport sandwich_check(int configs, uint64_t seed, bool corrupt_one) {
  SandwichReport report;
  SplitMix64 rng(seed);
  for (int trial = 0; trial < configs; ++trial) {
    const MechanismConfig config = random_config(rng);
    const OptimalSolution solution = optimal_alphas(config);
    MechanismMatrix ours =
        data_independent_matrix(config.eta, config.half_width, solution.alphas,
                                config.half_width, config.half_width + 1);
    if (corrupt_one && trial == configs / 2) {
      // Push mass onto one output without renormalizing; the sandwich breaks.
      ours.columns[0][0] += 0.5;
      ours.half_width = 0;
    }

    const DiscreteGaussianPmf gaussian = discrete_gaussian_pmf(
        std::max(solution.variance, 1e-6));
    const MechanismMatrix matched = gaussian_adjacent_matrix(gaussian);

    for (const MechanismMatrix* matrix :
         {static_cast<const MechanismMatrix*>(&ours), &matched}) {
      // Audit at the design epsilon and at a couple of mismatched ones.
      for (double eps : {config.epsilon, 0.0, config.epsilon + 1.0}) {
        const DeltaAudit audit = audit_matrix(*matrix, eps);
        ++report.audits;
        report.worst_lower_slack =
            std::max(report.worst_lower_slack,
                     audit.singular_delta - audit.event_delta);
        report.worst_upper_slack = std::max(
            report.worst_upper_slack, audit.event_delta - audit.bound_2d1);
        if (audit.singular_delta < 0.0 || audit.event_delta > 1.0 + 1e-12) {
          report.ok = false;
        }
      }
    }
  }
  if (report.worst_lower_slack > 1e-12 || report.worst_upper_slack > 1e-12) {
    report.ok = false;
  }
  return report;
}

VerifyReport run_verification(int configs, uint64_t seed, bool corrupt_one) {
  VerifyReport report;
  report.equivalence = oracle_equivalence(configs, seed);
  report.sandwich = sandwich_check(std::max(1, configs / 10), seed + 1,
                                   corrupt_one);

  MechanismConfig example;
  example.eta = 0.5;
  example.half_width = 2;
  example.epsilon = std::log(2.0);
  example.max_count = 3;
  const GeneralLpResult general = solve_general_lp(3, example);
  report.general_scale_status = general.solution.status;
  report.general_scale_delta = general.solution.optimum;

  report.passed = report.equivalence.passed() && report.sandwich.ok &&
                  report.general_scale_status == LpStatus::kOptimal;
  return report;
}

}  // namespace countnoise
