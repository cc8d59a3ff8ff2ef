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

#ifndef COUNTNOISE_NOISE_PMF_H_
#define COUNTNOISE_NOISE_PMF_H_

#include <string>
#include <vector>

namespace countnoise {

// Finite integer-supported noise distribution for one true count n. Offsets z
// run over [support_lo : half_width] with support_lo = -min(n, half_width), so
// the released value n + z can never go negative. Masses are plain doubles;
// every consistency check in this library uses absolute tolerance 1e-12.
struct NoisePmf {
  int true_count = 1;   // n >= 1; n = 0 cannot satisfy zero bias and is rejected
  double eta = 0.5;     // mass pinned at z = 0
  int half_width = 1;   // D
  int support_lo = -1;  // -min(n, D)
  std::vector<double> mass;  // mass[i] = P(Z = support_lo + i)

  int support_hi() const { return half_width; }
  int support_size() const { return static_cast<int>(mass.size()); }

  double mass_at(int z) const {
    const int idx = z - support_lo;
    if (idx < 0 || idx >= support_size()) return 0.0;
    return mass[static_cast<size_t>(idx)];
  }

  double total_mass() const;
  double mean() const;
  double second_moment() const;
};

// Which of the three noise axioms (or plain normalization) a pmf violates.
enum class NoiseProperty {
  kSupport,        // P1: no mass outside [-min(n,D) : D]
  kCorrectRelease, // P2: mass at z = 0 equals eta
  kZeroBias,       // P3: E[Z] = 0
  kNormalization,  // masses are >= 0 and sum to 1
};

std::string to_string(NoiseProperty property);

struct PropertyViolation {
  NoiseProperty property;
  double offending_value;  // the z or the measured quantity, see magnitude
  double magnitude;        // absolute size of the violation
};

struct ValidationReport {
  bool passed = true;
  std::vector<PropertyViolation> violations;
};

// Three-point distribution: eta at 0, and masses at a negative offset i1 and a
// positive offset i2 balanced so the mean is exactly zero:
//   P(Z = i1) = (1-eta) * i2 / (i2 + |i1|)
//   P(Z = i2) = (1-eta) * |i1| / (i2 + |i1|)
// Requires i1 in [-min(n,D) : -1] and i2 in [1 : D]; throws otherwise.
NoisePmf make_elementary_pmf(int true_count, int i1, int i2, double eta,
                             int half_width);

// Pointwise convex combination of pmfs sharing (n, eta, D). Weights must be
// non-negative and sum to 1 within 1e-12. The three axioms are closed under
// mixing, so the result is again a valid noise pmf.
NoisePmf mix_pmfs(const std::vector<double>& weights,
                  const std::vector<NoisePmf>& pmfs);

// Checks support containment, correct-release mass, zero bias and
// normalization, each at absolute tolerance 1e-12. Violations are collected,
// never thrown.
ValidationReport validate_properties(const NoisePmf& pmf);

// Symmetric data-independent pmf: mass (1-eta)/2 * alphas[i-1] at each of -i
// and +i, eta at 0. Only valid for true_count >= half_width, where the hard
// support constraint stops depending on n.
NoisePmf symmetric_noise_pmf(double eta, int half_width,
                             const std::vector<double>& alphas, int true_count);

// Output distribution of Y = n + Z over y in [0 : N + D]. Requires
// pmf.true_count == true_count <= max_count.
std::vector<double> mechanism_column(const NoisePmf& pmf, int true_count,
                                     int max_count);

// Table of output distributions p_Y(.|n) for consecutive true counts. This is
// the object the privacy constraints quantify over: the audit routines compare
// adjacent columns.
struct MechanismMatrix {
  int first_count = 1;  // n of columns[0]; column i belongs to first_count + i
  int half_width = 1;   // support half-width, used for the event-level factor
  std::vector<std::vector<double>> columns;  // each over y = 0 .. y_count-1

  int y_count() const {
    return columns.empty() ? 0 : static_cast<int>(columns.front().size());
  }
  int count_of(int column_index) const { return first_count + column_index; }
  double prob(int y, int column_index) const {
    return columns[static_cast<size_t>(column_index)][static_cast<size_t>(y)];
  }
};

// Matrix with columns n_lo .. n_hi built from one data-independent coefficient
// vector (all columns are shifts of the same symmetric pmf). Requires
// n_lo >= half_width.
MechanismMatrix data_independent_matrix(double eta, int half_width,
                                        const std::vector<double>& alphas,
                                        int n_lo, int n_hi);

// Interprets an output column back as a noise pmf for the given count, so the
// axioms can be validated on solutions of the general program.
NoisePmf column_to_noise_pmf(const std::vector<double>& column, int true_count,
                             double eta, int half_width);

}  // namespace countnoise

#endif  // COUNTNOISE_NOISE_PMF_H_
