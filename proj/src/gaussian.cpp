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

#include "countnoise/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "countnoise/optimal.hpp"

namespace countnoise {

double DiscreteGaussianPmf::total_mass() const {
  double acc = 0.0;
  for (int z = truncation; z >= 1; --z) acc += mass_pos[static_cast<size_t>(z)];
  return 2.0 * acc + mass_pos[0];
}

double DiscreteGaussianPmf::realized_variance() const {
  double acc = 0.0;
  for (int z = truncation; z >= 1; --z) {
    acc += static_cast<double>(z) * static_cast<double>(z) *
           mass_pos[static_cast<size_t>(z)];
  }
  return 2.0 * acc;
}

double DiscreteGaussianPmf::tail_outside(int window) const {
  double acc = 0.0;
  for (int z = truncation; z > window; --z) {
    acc += mass_pos[static_cast<size_t>(z)];
  }
  return 2.0 * acc;
}

DiscreteGaussianPmf discrete_gaussian_pmf(double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("sigma2 must be positive");
  }
  DiscreteGaussianPmf pmf;
  pmf.sigma2 = sigma2;
  // Twelve standard deviations put the untruncated tail far below 1e-15.
  pmf.truncation =
      static_cast<int>(std::ceil(12.0 * std::sqrt(sigma2))) + 2;
  pmf.mass_pos.assign(static_cast<size_t>(pmf.truncation + 1), 0.0);

  const double inv_two_sigma2 = 1.0 / (2.0 * sigma2);
  for (int z = 0; z <= pmf.truncation; ++z) {
    pmf.mass_pos[static_cast<size_t>(z)] =
        std::exp(-static_cast<double>(z) * static_cast<double>(z) *
                 inv_two_sigma2);
  }
  // Normalize, accumulating from the far tail inward.
  double norm = 0.0;
  for (int z = pmf.truncation; z >= 1; --z) {
    norm += pmf.mass_pos[static_cast<size_t>(z)];
  }
  norm = 2.0 * norm + pmf.mass_pos[0];
  for (double& m : pmf.mass_pos) m /= norm;
  return pmf;
}

namespace {

// P(Z > threshold), summed from the far tail inward.
double upper_tail(const DiscreteGaussianPmf& pmf, double threshold) {
  const int z_min = static_cast<int>(std::floor(threshold)) + 1;
  double acc = 0.0;
  for (int z = pmf.truncation; z >= z_min; --z) {
    acc += pmf.mass_at(z);
  }
  return acc;
}

}  // namespace

double gaussian_delta(double epsilon_g, const DiscreteGaussianPmf& pmf) {
  if (!(epsilon_g >= 0.0)) {
    throw std::invalid_argument("epsilon_g must be >= 0");
  }
  const double center = epsilon_g * pmf.sigma2;
  const double delta = upper_tail(pmf, center - 0.5) -
                       std::exp(epsilon_g) * upper_tail(pmf, center + 0.5);
  return std::max(0.0, delta);
}

double gaussian_delta(double epsilon_g, double sigma2) {
  return gaussian_delta(epsilon_g, discrete_gaussian_pmf(sigma2));
}

std::vector<ComparisonRow> compare_mechanisms(
    double eta, int half_width, const std::vector<double>& epsilon_grid) {
  if (epsilon_grid.empty()) {
    throw std::invalid_argument("epsilon grid must not be empty");
  }
  std::vector<ComparisonRow> rows;
  rows.reserve(epsilon_grid.size());
  for (double eps : epsilon_grid) {
    MechanismConfig config;
    config.eta = eta;
    config.half_width = half_width;
    config.epsilon = eps;
    const OptimalSolution solution = optimal_alphas(config);
    ComparisonRow row;
    row.epsilon = eps;
    row.our_dp_delta = solution.dp_delta;
    row.sigma2 = solution.variance;
    row.gaussian_delta = gaussian_delta(eps, solution.variance);
    row.regime = solution.regime;
    rows.push_back(row);
  }
  return rows;
}

MechanismMatrix gaussian_adjacent_matrix(const DiscreteGaussianPmf& pmf,
                                         int base_count) {
  const int n = base_count > 0 ? base_count : pmf.truncation;
  if (n < pmf.truncation) {
    throw std::invalid_argument(
        "base count below the truncation would clip Gaussian mass");
  }
  MechanismMatrix matrix;
  matrix.first_count = n;
  matrix.half_width = pmf.truncation;
  const int y_count = n + 1 + pmf.truncation + 1;
  for (int col = 0; col < 2; ++col) {
    std::vector<double> column(static_cast<size_t>(y_count), 0.0);
    for (int z = -pmf.truncation; z <= pmf.truncation; ++z) {
      column[static_cast<size_t>(n + col + z)] = pmf.mass_at(z);
    }
    matrix.columns.push_back(std::move(column));
  }
  return matrix;
}

}  // namespace countnoise
