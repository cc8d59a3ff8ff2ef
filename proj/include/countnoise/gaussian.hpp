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

#ifndef COUNTNOISE_GAUSSIAN_H_
#define COUNTNOISE_GAUSSIAN_H_

#include <vector>

#include "countnoise/noise_pmf.hpp"

namespace countnoise {

// Integer noise with mass proportional to exp(-z^2 / (2 sigma2)), normalized
// over a truncated support wide enough that the neglected tail is below 1e-15.
// Masses are computed once per |z|, so the symmetry is exact.
struct DiscreteGaussianPmf {
  double sigma2 = 1.0;
  int truncation = 0;            // Z_max; support is [-Z_max : Z_max]
  std::vector<double> mass_pos;  // mass_pos[z] = P(Z = z) = P(Z = -z)

  double mass_at(int z) const {
    const int a = z < 0 ? -z : z;
    return a <= truncation ? mass_pos[static_cast<size_t>(a)] : 0.0;
  }
  double total_mass() const;
  // Second moment of the constructed pmf; at most sigma2, approaching it from
  // below as sigma2 grows.
  double realized_variance() const;
  // Mass outside [-window : window], reported rather than hidden when the
  // Gaussian is compared against a hard-support mechanism.
  double tail_outside(int window) const;
};

DiscreteGaussianPmf discrete_gaussian_pmf(double sigma2);

// Privacy delta of the discrete Gaussian at shift sensitivity one:
//   delta = P(Z > eps * sigma2 - 0.5) - e^eps P(Z > eps * sigma2 + 0.5)
// with tails accumulated from the far end inward and the result floored at 0.
double gaussian_delta(double epsilon_g, const DiscreteGaussianPmf& pmf);
double gaussian_delta(double epsilon_g, double sigma2);

// One row of the matched-variance comparison: our event-level delta against
// the discrete Gaussian's delta at the same epsilon and the same variance
// parameter.
struct ComparisonRow {
  double epsilon = 0.0;
  double our_dp_delta = 0.0;
  double gaussian_delta = 0.0;
  double sigma2 = 0.0;
  int regime = 0;
};

// For each epsilon on the grid: solve our mechanism, take its variance as the
// Gaussian's parameter, and evaluate both deltas.
std::vector<ComparisonRow> compare_mechanisms(
    double eta, int half_width, const std::vector<double>& epsilon_grid);

// Two adjacent output columns of the additive Gaussian mechanism, for the
// audit routines. The base count defaults to Z_max so no mass is clipped.
MechanismMatrix gaussian_adjacent_matrix(const DiscreteGaussianPmf& pmf,
                                         int base_count = -1);

}  // namespace countnoise

#endif  // COUNTNOISE_GAUSSIAN_H_
