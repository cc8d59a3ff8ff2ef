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

#ifndef COUNTNOISE_OPTIMAL_H_
#define COUNTNOISE_OPTIMAL_H_

#include <utility>
#include <vector>

#include "countnoise/mechanism_config.hpp"

namespace countnoise {

// All candidate lower bounds on the optimal per-output delta for one config,
// plus the crossover values that decide which bound is binding. Written with
// E = e^eps, B = 2/(1-eta), C = 2*eta/(1-eta):
//
//   type-I   delta_k    = (C sum_{j<k} E^j - E^k) / (B sum_{j<k} E^j (j+1))
//   type-II  delta_{D+1} = 1 / (B sum_{j<D} E^j (D-j))
//   crossover C_k        = sum_{j<=k} E^j / sum_{j<k} E^j (k-j)
//
// delta_k >= delta_{k+1} holds exactly when C >= C_k, and the C_k are strictly
// decreasing, so the maximum of the D+1 bounds sits at the unique k with
// C_k < C <= C_{k-1} (sentinels C_0 = +inf, C_{D+1} = 0).
struct BoundSet {
  double exp_eps = 1.0;  // E
  double b_coeff = 0.0;  // B
  double c_ratio = 0.0;  // C
  std::vector<double> type1;       // delta_1 .. delta_D (may be negative)
  double type2 = 0.0;              // delta_{D+1}, always > 0
  std::vector<double> crossovers;  // C_1 .. C_D, strictly decreasing

  // k in [1 : D+1].
  double bound(int k) const {
    return k <= static_cast<int>(type1.size())
               ? type1[static_cast<size_t>(k - 1)]
               : type2;
  }
  // k in [0 : D+1] with the two sentinels.
  double crossover_at(int k) const;
};

// Closed-form optimum for the symmetric data-independent mechanism: the
// binding regime, the minimal per-output delta, the coefficients achieving it,
// the noise variance and the event-level privacy delta.
struct OptimalSolution {
  MechanismConfig config;
  int regime = 1;            // k* in [1 : D+1], index of the binding bound
  double delta_star = 0.0;   // max of the D+1 lower bounds, achieved exactly
  std::vector<double> alphas;  // coefficients for offsets 1..D, simplex-valid
  double variance = 0.0;     // (1-eta) * sum alphas[i-1] * i^2
  double dp_delta = 0.0;     // min(1, (2D+1) * delta_star)
};

// The individual bound formulas, evaluated directly from E. Valid whenever
// E^k is representable; the solver itself switches to log-domain sums when
// eps * D grows past ~700 and direct powers would overflow.
double type1_bound(int k, double exp_eps, double b_coeff, double c_ratio);
double type2_bound(int half_width, double exp_eps, double b_coeff);
double crossover(int k, double exp_eps);

// The unique k in [1 : D+1] with C_k < c_ratio <= C_{k-1}. A tie
// c_ratio == C_{k-1} makes delta_{k-1} == delta_k, and we return the larger
// index k for determinism.
int select_regime(double c_ratio, double exp_eps, int half_width);

BoundSet compute_bound_set(const MechanismConfig& config);

// Builds the optimal coefficients for the binding regime:
//   regime k <= D:  alpha_1 = (C - B delta)/E, alpha_j = (alpha_{j-1} - B delta)/E
//   regime D+1:     alpha_j = sum_{l<=D-j} E^l / sum_{l<D} E^l (D-l)
// The result saturates the defining inequality chain with equality and is a
// point on the probability simplex.
OptimalSolution optimal_alphas(const MechanismConfig& config);

// (epsilon, min(1, (2D+1) * delta_star)): the event-level privacy pair. The
// factor 2D+1 is the support size of any output column, which caps how many
// terms a worst-case event can accumulate.
std::pair<double, double> dp_parameters(const OptimalSolution& solution);

// (1-eta) * sum alphas[i-1] * i^2. Equals the second moment of the symmetric
// noise pmf, since the mean is zero.
double noise_variance(const OptimalSolution& solution);

}  // namespace countnoise

#endif  // COUNTNOISE_OPTIMAL_H_
