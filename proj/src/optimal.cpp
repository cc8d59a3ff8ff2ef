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

#include "countnoise/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace countnoise {

namespace {

// Past this, E^k no longer fits a double and the geometric sums are evaluated
// as log-sum-exp instead. log(DBL_MAX) is ~709.78; 700 leaves headroom for the
// polynomial weights.
constexpr double kLogDirectLimit = 700.0;

// sum_{j=0}^{m-1} E^j by forward recurrence.
double geom_sum(double exp_eps, int m) {
  double acc = 0.0;
  double term = 1.0;
  for (int j = 0; j < m; ++j) {
    acc += term;
    term *= exp_eps;
  }
  return acc;
}

// sum_{j=0}^{m-1} E^j (j+1).
double ramp_up_sum(double exp_eps, int m) {
  double acc = 0.0;
  double term = 1.0;
  for (int j = 0; j < m; ++j) {
    acc += term * static_cast<double>(j + 1);
    term *= exp_eps;
  }
  return acc;
}

// sum_{j=0}^{m-1} E^j (m-j).
double ramp_down_sum(double exp_eps, int m) {
  double acc = 0.0;
  double term = 1.0;
  for (int j = 0; j < m; ++j) {
    acc += term * static_cast<double>(m - j);
    term *= exp_eps;
  }
  return acc;
}

double pow_int(double base, int k) {
  double acc = 1.0;
  for (int j = 0; j < k; ++j) acc *= base;
  return acc;
}

// log(sum_{j=0}^{m-1} w(j) e^{j*log_e}) for positive integer-ish weights,
// evaluated as a shifted exponential sum so nothing overflows.
template <typename WeightFn>
double log_weighted_geom_sum(double log_e, int m, WeightFn weight) {
  double max_term = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    max_term = std::max(max_term,
                        static_cast<double>(j) * log_e + std::log(weight(j)));
  }
  double acc = 0.0;
  for (int j = 0; j < m; ++j) {
    acc += std::exp(static_cast<double>(j) * log_e + std::log(weight(j)) -
                    max_term);
  }
  return max_term + std::log(acc);
}

double log_geom_sum(double log_e, int m) {
  return log_weighted_geom_sum(log_e, m, [](int) { return 1.0; });
}

double log_ramp_up_sum(double log_e, int m) {
  return log_weighted_geom_sum(
      log_e, m, [](int j) { return static_cast<double>(j + 1); });
}

double log_ramp_down_sum(double log_e, int m) {
  return log_weighted_geom_sum(
      log_e, m, [m](int j) { return static_cast<double>(m - j); });
}

// exp(a) - exp(b) without forming either exponential; returns a signed value.
double exp_difference(double log_a, double log_b, double log_scale) {
  if (log_a >= log_b) {
    return std::exp(log_a + std::log1p(-std::exp(log_b - log_a)) - log_scale);
  }
  return -std::exp(log_b + std::log1p(-std::exp(log_a - log_b)) - log_scale);
}

double type1_bound_eps(int k, double epsilon, double b_coeff, double c_ratio) {
  if (epsilon * static_cast<double>(k + 1) <= kLogDirectLimit) {
    return type1_bound(k, std::exp(epsilon), b_coeff, c_ratio);
  }
  const double log_pos = std::log(c_ratio) + log_geom_sum(epsilon, k);
  const double log_neg = static_cast<double>(k) * epsilon;
  const double log_den = std::log(b_coeff) + log_ramp_up_sum(epsilon, k);
  return exp_difference(log_pos, log_neg, log_den);
}

double type2_bound_eps(int half_width, double epsilon, double b_coeff) {
  if (epsilon * static_cast<double>(half_width + 1) <= kLogDirectLimit) {
    return type2_bound(half_width, std::exp(epsilon), b_coeff);
  }
  return std::exp(-std::log(b_coeff) - log_ramp_down_sum(epsilon, half_width));
}

double crossover_eps(int k, double epsilon) {
  if (epsilon * static_cast<double>(k + 2) <= kLogDirectLimit) {
    return crossover(k, std::exp(epsilon));
  }
  return std::exp(log_geom_sum(epsilon, k + 1) - log_ramp_down_sum(epsilon, k));
}

int select_regime_eps(double c_ratio, double epsilon, int half_width) {
  for (int k = 1; k <= half_width; ++k) {
    if (c_ratio > crossover_eps(k, epsilon)) return k;
  }
  return half_width + 1;
}

}  // namespace

double BoundSet::crossover_at(int k) const {
  if (k <= 0) return std::numeric_limits<double>::infinity();
  if (k > static_cast<int>(crossovers.size())) return 0.0;
  return crossovers[static_cast<size_t>(k - 1)];
}

double type1_bound(int k, double exp_eps, double b_coeff, double c_ratio) {
  if (k < 1) throw std::invalid_argument("type1_bound needs k >= 1");
  return (c_ratio * geom_sum(exp_eps, k) - pow_int(exp_eps, k)) /
         (b_coeff * ramp_up_sum(exp_eps, k));
}

double type2_bound(int half_width, double exp_eps, double b_coeff) {
  if (half_width < 1) throw std::invalid_argument("type2_bound needs D >= 1");
  return 1.0 / (b_coeff * ramp_down_sum(exp_eps, half_width));
}

double crossover(int k, double exp_eps) {
  if (k < 1) throw std::invalid_argument("crossover needs k >= 1");
  return geom_sum(exp_eps, k + 1) / ramp_down_sum(exp_eps, k);
}

int select_regime(double c_ratio, double exp_eps, int half_width) {
  for (int k = 1; k <= half_width; ++k) {
    if (c_ratio > crossover(k, exp_eps)) return k;
  }
  return half_width + 1;
}

BoundSet compute_bound_set(const MechanismConfig& config) {
  config.check_valid();
  const int d = config.half_width;
  BoundSet bounds;
  bounds.exp_eps = config.exp_epsilon();
  bounds.b_coeff = config.b_coeff();
  bounds.c_ratio = config.c_ratio();
  bounds.type1.reserve(static_cast<size_t>(d));
  bounds.crossovers.reserve(static_cast<size_t>(d));
  for (int k = 1; k <= d; ++k) {
    bounds.type1.push_back(
        type1_bound_eps(k, config.epsilon, bounds.b_coeff, bounds.c_ratio));
    bounds.crossovers.push_back(crossover_eps(k, config.epsilon));
  }
  bounds.type2 = type2_bound_eps(d, config.epsilon, bounds.b_coeff);
  return bounds;
}

OptimalSolution optimal_alphas(const MechanismConfig& config) {
  config.check_valid();
  const int d = config.half_width;
  const double b_coeff = config.b_coeff();
  const double c_ratio = config.c_ratio();

  OptimalSolution solution;
  solution.config = config;
  solution.regime = select_regime_eps(c_ratio, config.epsilon, d);
  solution.alphas.assign(static_cast<size_t>(d), 0.0);

  if (solution.regime == d + 1) {
    if (config.epsilon * static_cast<double>(d) <= kLogDirectLimit) {
      const double exp_eps = config.exp_epsilon();
      const double den = ramp_down_sum(exp_eps, d);
      solution.delta_star = 1.0 / (b_coeff * den);
      for (int j = 1; j <= d; ++j) {
        solution.alphas[static_cast<size_t>(j - 1)] =
            geom_sum(exp_eps, d - j + 1) / den;
      }
    } else {
      const double log_den = log_ramp_down_sum(config.epsilon, d);
      solution.delta_star = std::exp(-std::log(b_coeff) - log_den);
      for (int j = 1; j <= d; ++j) {
        solution.alphas[static_cast<size_t>(j - 1)] =
            std::exp(log_geom_sum(config.epsilon, d - j + 1) - log_den);
      }
    }
  } else {
    const int k = solution.regime;
    solution.delta_star =
        type1_bound_eps(k, config.epsilon, b_coeff, c_ratio);
    // A type-I regime forces C > C_D > E - 1, so E is finite here and the
    // defining recurrence can run directly.
    const double exp_eps = config.exp_epsilon();
    const double b_delta = b_coeff * solution.delta_star;
    solution.alphas[0] = (c_ratio - b_delta) / exp_eps;
    for (int j = 2; j <= k; ++j) {
      solution.alphas[static_cast<size_t>(j - 1)] =
          (solution.alphas[static_cast<size_t>(j - 2)] - b_delta) / exp_eps;
    }
    // The tail coefficient is non-negative analytically; tiny negatives are
    // rounding artifacts and get snapped to zero.
    for (int j = 1; j <= k; ++j) {
      double& a = solution.alphas[static_cast<size_t>(j - 1)];
      if (a > -1e-12 && a < 0.0) a = 0.0;
    }
  }

  double weighted_square = 0.0;
  for (int i = 1; i <= d; ++i) {
    weighted_square += solution.alphas[static_cast<size_t>(i - 1)] *
                       static_cast<double>(i) * static_cast<double>(i);
  }
  solution.variance = config.eta_bar() * weighted_square;
  solution.dp_delta = std::min(
      1.0, static_cast<double>(2 * d + 1) * solution.delta_star);
  return solution;
}

std::pair<double, double> dp_parameters(const OptimalSolution& solution) {
  const double factor =
      static_cast<double>(2 * solution.config.half_width + 1);
  return {solution.config.epsilon,
          std::min(1.0, factor * solution.delta_star)};
}

double noise_variance(const OptimalSolution& solution) {
  double weighted_square = 0.0;
  for (size_t i = 0; i < solution.alphas.size(); ++i) {
    const double offset = static_cast<double>(i + 1);
    weighted_square += solution.alphas[i] * offset * offset;
  }
  return solution.config.eta_bar() * weighted_square;
}

}  // namespace countnoise
