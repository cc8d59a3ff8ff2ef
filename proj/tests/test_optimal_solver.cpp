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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "countnoise/noise_pmf.hpp"
#include "countnoise/optimal.hpp"
#include "countnoise/sampler.hpp"
#include "countnoise/verify.hpp"

using countnoise::compute_bound_set;
using countnoise::crossover;
using countnoise::MechanismConfig;
using countnoise::optimal_alphas;
using countnoise::OptimalSolution;
using countnoise::select_regime;
using countnoise::type1_bound;
using countnoise::type2_bound;

namespace {

MechanismConfig make_config(double eta, int d, double eps) {
  MechanismConfig config;
  config.eta = eta;
  config.half_width = d;
  config.epsilon = eps;
  return config;
}

// Independent oracle: naive bound evaluation with std::pow, no shared code
// with the implementation's recurrences.
double naive_type1(int k, double e, double b, double c) {
  double geo = 0.0, ramp = 0.0;
  for (int j = 0; j < k; ++j) {
    geo += std::pow(e, j);
    ramp += std::pow(e, j) * (j + 1);
  }
  return (c * geo - std::pow(e, k)) / (b * ramp);
}

double naive_type2(int d, double e, double b) {
  double ramp = 0.0;
  for (int j = 0; j < d; ++j) ramp += std::pow(e, j) * (d - j);
  return 1.0 / (b * ramp);
}

// argmax over the explicit bound list, ties resolved to the larger index.
int argmax_regime(const MechanismConfig& config) {
  const double e = config.exp_epsilon();
  const double b = config.b_coeff();
  const double c = config.c_ratio();
  int best = 1;
  double best_value = naive_type1(1, e, b, c);
  for (int k = 2; k <= config.half_width; ++k) {
    const double v = naive_type1(k, e, b, c);
    if (v >= best_value) {
      best_value = v;
      best = k;
    }
  }
  const double tail = naive_type2(config.half_width, e, b);
  if (tail >= best_value) best = config.half_width + 1;
  return best;
}

// Largest violation of the defining inequality system at (delta, alphas).
double feasibility_violation(const MechanismConfig& config,
                             const std::vector<double>& alphas, double delta) {
  const double e = config.exp_epsilon();
  const double half_err = config.eta_bar() / 2.0;
  const int d = config.half_width;
  double worst = half_err * alphas[static_cast<size_t>(d - 1)] - delta;
  for (int i = 1; i <= d - 1; ++i) {
    worst = std::max(worst, half_err * alphas[static_cast<size_t>(i - 1)] -
                                e * half_err * alphas[static_cast<size_t>(i)] -
                                delta);
  }
  worst = std::max(worst, config.eta - e * half_err * alphas[0] - delta);
  for (double a : alphas) worst = std::max(worst, -a);
  double sum = 0.0;
  for (double a : alphas) sum += a;
  worst = std::max(worst, std::abs(sum - 1.0));
  return worst;
}

}  // namespace

TEST_CASE("worked design point: eta 0.8, D 6, eps 2.18") {
  const MechanismConfig config = make_config(0.8, 6, 2.18);
  CHECK(config.exp_epsilon() == doctest::Approx(8.8463).epsilon(1e-3 / 8.8));
  CHECK(std::abs(config.c_ratio() - 8.0) < 1e-12);
  CHECK(config.b_coeff() == doctest::Approx(10.0).epsilon(1e-12));

  const double e = config.exp_epsilon();
  CHECK(crossover(2, e) == doctest::Approx(8.1229).epsilon(2e-4));
  CHECK(crossover(3, e) == doctest::Approx(7.8867).epsilon(2e-4));
  CHECK(select_regime(config.c_ratio(), e, 6) == 3);

  const OptimalSolution solution = optimal_alphas(config);
  CHECK(solution.regime == 3);
  CHECK(solution.delta_star == doctest::Approx(0.0049).epsilon(0.05));
  CHECK(type1_bound(3, e, 10.0, 8.0) ==
        doctest::Approx(solution.delta_star).epsilon(1e-12));

  const double half_err = config.eta_bar() / 2.0;
  CHECK(half_err * solution.alphas[0] == doctest::Approx(0.08987).epsilon(6e-4));
  CHECK(half_err * solution.alphas[1] == doctest::Approx(0.00960).epsilon(6e-3));
  CHECK(solution.alphas[0] / solution.alphas[1] ==
        doctest::Approx(9.3617).epsilon(1.1e-3));
  CHECK(solution.alphas[2] > 0.0);
  CHECK(solution.alphas[3] == 0.0);
  CHECK(solution.alphas[4] == 0.0);
  CHECK(solution.alphas[5] == 0.0);
  CHECK(solution.variance == doctest::Approx(0.2660).epsilon(1e-3));
}

TEST_CASE("frozen bound arithmetic") {
  // eps = 0, so delta_1 = (C - 1)/B.
  CHECK(type1_bound(1, 1.0, 4.0, 2.0) == doctest::Approx(0.25).epsilon(1e-12));
  // Direct substitution, cross-checked against the restricted program
  // elsewhere: (2*3 - 4) / (4*(1 + 2*2)) = 0.1.
  CHECK(type1_bound(2, 2.0, 4.0, 2.0) == doctest::Approx(0.1).epsilon(1e-12));
  // Worked design point.
  CHECK(type1_bound(3, 8.8463, 10.0, 8.0) ==
        doctest::Approx(0.0049).epsilon(0.05));

  // D = 1 collapses to 1/B for any E.
  CHECK(type2_bound(1, 1.0, 4.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(type2_bound(1, 17.3, 4.0) == doctest::Approx(0.25).epsilon(1e-12));
  // eps = 0 arithmetic: 1/(4 * (2 + 1)).
  CHECK(type2_bound(2, 1.0, 4.0) == doctest::Approx(1.0 / 12).epsilon(1e-12));
  // At the worked point the tail bound loses to the type-I bound.
  const double tail = type2_bound(6, 8.8463, 10.0);
  CHECK(tail > 0.0);
  CHECK(tail < 0.0049);

  // First crossover is always 1 + E.
  CHECK(crossover(1, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(crossover(1, 8.8463) == doctest::Approx(9.8463).epsilon(1e-12));
}

TEST_CASE("regime selection on a hand-solved case") {
  // eta = 0.5, eps = ln 2, D = 2: C1 = 3, C2 = 7/4, C = 2 lands in between.
  CHECK(crossover(1, 2.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(crossover(2, 2.0) == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(select_regime(2.0, 2.0, 2) == 2);

  const OptimalSolution solution = optimal_alphas(make_config(0.5, 2, std::log(2.0)));
  CHECK(solution.regime == 2);
  CHECK(solution.delta_star == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(solution.alphas[0] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(solution.alphas[1] == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("sentinel interval: tiny C selects the tail regime") {
  // C <= C_D picks D + 1.
  CHECK(select_regime(0.01, 2.0, 4) == 5);
  const OptimalSolution solution = optimal_alphas(make_config(0.05, 4, 0.5));
  CHECK(solution.regime == 5);
  for (double a : solution.alphas) CHECK(a > 0.0);
  for (size_t i = 1; i < solution.alphas.size(); ++i) {
    CHECK(solution.alphas[i] < solution.alphas[i - 1]);
  }
}

TEST_CASE("regime equals the argmax of the explicit bound list") {
  countnoise::SplitMix64 rng(101);
  for (int trial = 0; trial < 10000; ++trial) {
    const MechanismConfig config = countnoise::random_config(rng);
    const OptimalSolution solution = optimal_alphas(config);
    CHECK(solution.regime == argmax_regime(config));
    // And the solved delta is that maximum.
    const countnoise::BoundSet bounds = compute_bound_set(config);
    double best = bounds.type2;
    for (double v : bounds.type1) best = std::max(best, v);
    CHECK(std::abs(solution.delta_star - best) < 1e-12);
  }
}

TEST_CASE("bound ordering flips exactly at the crossover") {
  countnoise::SplitMix64 rng(77);
  for (int trial = 0; trial < 4000; ++trial) {
    const MechanismConfig config = countnoise::random_config(rng);
    const countnoise::BoundSet bounds = compute_bound_set(config);
    const int d = config.half_width;
    for (int k = 1; k <= d; ++k) {
      const double here = bounds.bound(k);
      const double next = bounds.bound(k + 1);
      const double crossing = bounds.crossover_at(k);
      // Skip the measure-zero sliver where rounding decides the comparison.
      if (std::abs(bounds.c_ratio - crossing) < 1e-9) continue;
      if (bounds.c_ratio > crossing) {
        CHECK(here >= next - 1e-12);
      } else {
        CHECK(here <= next + 1e-12);
      }
    }
  }
}

TEST_CASE("crossovers decrease strictly across D <= 64, eps <= 10") {
  // The analytic gap C_k - C_{k+1} equals
  //   sum_{j<=k} E^j (j+1) / (rampdown_k * rampdown_{k+1}),
  // a ratio of positive sums, so strict decrease holds identically. Past
  // roughly eps * k ~ 40 the gap shrinks below one ulp of C_k and two
  // separately rounded values cannot resolve it, so the strict comparison is
  // only asserted where the gap is representable; everywhere else the ladder
  // must still be nonincreasing up to rounding noise.
  for (double eps : {0.0, 0.1, 0.3, 1.0, 2.5, 5.0, 10.0}) {
    const double e = std::exp(eps);
    for (int d : {2, 3, 8, 16, 33, 64}) {
      for (int k = 1; k < d; ++k) {
        const double here = crossover(k, e);
        const double next = crossover(k + 1, e);

        double gap_num = 0.0, ramp_k = 0.0, ramp_k1 = 0.0;
        for (int j = 0; j <= k; ++j) gap_num += std::pow(e, j) * (j + 1);
        for (int j = 0; j < k; ++j) ramp_k += std::pow(e, j) * (k - j);
        for (int j = 0; j < k + 1; ++j) ramp_k1 += std::pow(e, j) * (k + 1 - j);
        CHECK(gap_num > 0.0);
        const double log_gap =
            std::log(gap_num) - std::log(ramp_k) - std::log(ramp_k1);

        if (log_gap > std::log(here) + std::log(1e-13)) {
          CHECK(here > next);
          // And the direct difference agrees with the formula.
          CHECK(here - next ==
                doctest::Approx(std::exp(log_gap)).epsilon(1e-6));
        } else {
          CHECK(next <= here * (1.0 + 1e-12));
        }
      }
    }
  }
}

TEST_CASE("solution saturates its inequality system") {
  countnoise::SplitMix64 rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const MechanismConfig config = countnoise::random_config(rng);
    const OptimalSolution s = optimal_alphas(config);
    CHECK(feasibility_violation(config, s.alphas, s.delta_star) < 1e-10);

    // Simplex validity.
    double sum = 0.0;
    for (double a : s.alphas) {
      CHECK(a >= 0.0);
      sum += a;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    // Monotone coefficients in the leading block.
    const int lead = std::min(s.regime, config.half_width);
    for (int j = 1; j < lead; ++j) {
      CHECK(s.alphas[static_cast<size_t>(j)] <=
            s.alphas[static_cast<size_t>(j - 1)]);
    }
    if (s.regime <= config.half_width) {
      for (int j = s.regime; j < config.half_width; ++j) {
        CHECK(s.alphas[static_cast<size_t>(j)] == 0.0);
      }
    }
  }
}

TEST_CASE("binding pattern follows the regime") {
  struct Case {
    double eta;
    int d;
    double eps;
  };
  // All three sit comfortably away from crossover boundaries.
  for (const Case& c : {Case{0.8, 6, 2.18}, Case{0.5, 2, std::log(2.0)},
                        Case{0.5, 8, 1.5}}) {
    const MechanismConfig config = make_config(c.eta, c.d, c.eps);
    const OptimalSolution s = optimal_alphas(config);
    const double e = config.exp_epsilon();
    const double half_err = config.eta_bar() / 2.0;

    const double eta_residual =
        config.eta - e * half_err * s.alphas[0] - s.delta_star;
    auto chain_residual = [&](int i) {
      return half_err * s.alphas[static_cast<size_t>(i - 1)] -
             e * half_err * s.alphas[static_cast<size_t>(i)] - s.delta_star;
    };
    const double tail_residual =
        half_err * s.alphas[static_cast<size_t>(c.d - 1)] - s.delta_star;

    if (s.regime <= c.d) {
      CHECK(std::abs(eta_residual) < 1e-9);
      for (int i = 1; i < s.regime; ++i) CHECK(std::abs(chain_residual(i)) < 1e-9);
      for (int i = s.regime; i <= c.d - 1; ++i) CHECK(chain_residual(i) < -1e-6);
      CHECK(tail_residual < -1e-6);
    } else {
      CHECK(eta_residual < -1e-6);
      for (int i = 1; i <= c.d - 1; ++i) CHECK(std::abs(chain_residual(i)) < 1e-9);
      CHECK(std::abs(tail_residual) < 1e-9);
    }
  }
}

TEST_CASE("degenerate D = 1") {
  for (double eta : {0.2, 0.5, 0.9}) {
    for (double eps : {0.0, 0.4, 2.0}) {
      const MechanismConfig config = make_config(eta, 1, eps);
      const OptimalSolution s = optimal_alphas(config);
      const double expected = std::max(
          (1 - eta) / 2.0, eta - config.exp_epsilon() * (1 - eta) / 2.0);
      CHECK(s.delta_star == doctest::Approx(expected).epsilon(1e-12));
      CHECK(s.alphas[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("privacy pair and clamping") {
  // Published sweep anchors: D = 8 at (1.1, 0.5) and (2.2, 0.8).
  const OptimalSolution loose = optimal_alphas(make_config(0.5, 8, 1.1));
  CHECK(loose.dp_delta <= 0.001);
  CHECK(loose.dp_delta > 0.001 / 1.5);

  const OptimalSolution tight = optimal_alphas(make_config(0.8, 8, 2.2));
  CHECK(tight.dp_delta <= 2.0 * 5e-7);
  CHECK(tight.dp_delta >= 0.5 * 5e-7);

  // eta near one makes the design vacuous and the delta clamps at 1.
  const OptimalSolution vacuous = optimal_alphas(make_config(0.95, 8, 1.1));
  CHECK(vacuous.dp_delta == 1.0);
  CHECK(vacuous.delta_star >= 1.0 / 17.0);

  const auto [eps, dp_delta] = countnoise::dp_parameters(loose);
  CHECK(eps == doctest::Approx(1.1));
  CHECK(dp_delta == doctest::Approx(loose.dp_delta).epsilon(1e-15));
}

TEST_CASE("variance equals the pmf second moment") {
  countnoise::SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const MechanismConfig config = countnoise::random_config(rng);
    const OptimalSolution s = optimal_alphas(config);
    CHECK(countnoise::noise_variance(s) ==
          doctest::Approx(s.variance).epsilon(1e-15));
    const countnoise::NoisePmf pmf = countnoise::symmetric_noise_pmf(
        config.eta, config.half_width, s.alphas, config.half_width);
    CHECK(std::abs(pmf.second_moment() - s.variance) < 1e-12);
    CHECK(std::abs(pmf.mean()) < 1e-12);
  }
  // All mass on the first coefficient gives variance 1 - eta.
  const OptimalSolution s = optimal_alphas(make_config(0.5, 1, 1.0));
  CHECK(s.variance == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("log-domain evaluation far past double overflow") {
  // eps * D = 720 would overflow E^D; the solver must stay finite and the
  // solution must still satisfy its system (E itself is small here).
  const MechanismConfig config = make_config(0.5, 80, 9.0);
  const OptimalSolution s = optimal_alphas(config);
  CHECK(s.regime == 81);
  CHECK(std::isfinite(s.delta_star));
  CHECK(s.delta_star >= 0.0);
  double sum = 0.0;
  for (double a : s.alphas) {
    CHECK(a >= 0.0);
    CHECK(std::isfinite(a));
    sum += a;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(feasibility_violation(config, s.alphas, s.delta_star) < 1e-10);

  // The crossover ladder stays finite and nonincreasing in log mode as well
  // (the strict gaps are far below double resolution at this scale).
  const countnoise::BoundSet bounds = compute_bound_set(config);
  for (size_t k = 1; k < bounds.crossovers.size(); ++k) {
    CHECK(std::isfinite(bounds.crossovers[k]));
    CHECK(bounds.crossovers[k] <= bounds.crossovers[k - 1] * (1.0 + 1e-12));
  }
}
