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

#include "countnoise/noise_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace countnoise {

namespace {

constexpr double kTol = 1e-12;

void check_count_eta_d(int n, double eta, int half_width) {
  if (n < 1) {
    throw std::invalid_argument("true count must be >= 1, got " +
                                std::to_string(n));
  }
  if (!(eta > 0.0) || !(eta < 1.0)) {
    throw std::invalid_argument("eta must lie strictly inside (0, 1)");
  }
  if (half_width < 1) {
    throw std::invalid_argument("half_width (D) must be >= 1");
  }
}

}  // namespace

double NoisePmf::total_mass() const {
  double sum = 0.0;
  for (double m : mass) sum += m;
  return sum;
}

double NoisePmf::mean() const {
  double acc = 0.0;
  for (int i = 0; i < support_size(); ++i) {
    acc += static_cast<double>(support_lo + i) * mass[static_cast<size_t>(i)];
  }
  return acc;
}

double NoisePmf::second_moment() const {
  double acc = 0.0;
  for (int i = 0; i < support_size(); ++i) {
    const double z = static_cast<double>(support_lo + i);
    acc += z * z * mass[static_cast<size_t>(i)];
  }
  return acc;
}

std::string to_string(NoiseProperty property) {
  switch (property) {
    case NoiseProperty::kSupport:
      return "P1";
    case NoiseProperty::kCorrectRelease:
      return "P2";
    case NoiseProperty::kZeroBias:
      return "P3";
    case NoiseProperty::kNormalization:
      return "NORMALIZATION";
  }
  return "?";
}

NoisePmf make_elementary_pmf(int true_count, int i1, int i2, double eta,
                             int half_width) {
  check_count_eta_d(true_count, eta, half_width);
  const int reach_down = std::min(true_count, half_width);  // A = min(n, D)
  if (i1 < -reach_down || i1 > -1) {
    throw std::invalid_argument("elementary index i1 = " + std::to_string(i1) +
                                " outside [-" + std::to_string(reach_down) +
                                " : -1]");
  }
  if (i2 < 1 || i2 > half_width) {
    throw std::invalid_argument("elementary index i2 = " + std::to_string(i2) +
                                " outside [1 : " + std::to_string(half_width) +
                                "]");
  }

  NoisePmf pmf;
  pmf.true_count = true_count;
  pmf.eta = eta;
  pmf.half_width = half_width;
  pmf.support_lo = -reach_down;
  pmf.mass.assign(static_cast<size_t>(half_width + reach_down + 1), 0.0);

  const double eta_bar = 1.0 - eta;
  const double span = static_cast<double>(i2 + std::abs(i1));
  pmf.mass[static_cast<size_t>(i1 - pmf.support_lo)] =
      eta_bar * static_cast<double>(i2) / span;
  pmf.mass[static_cast<size_t>(-pmf.support_lo)] = eta;
  pmf.mass[static_cast<size_t>(i2 - pmf.support_lo)] =
      eta_bar * static_cast<double>(std::abs(i1)) / span;
  return pmf;
}

NoisePmf mix_pmfs(const std::vector<double>& weights,
                  const std::vector<NoisePmf>& pmfs) {
  if (weights.size() != pmfs.size() || pmfs.empty()) {
    throw std::invalid_argument("mix_pmfs needs equally many weights and pmfs");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("mixture weights must be >= 0");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > kTol) {
    throw std::invalid_argument("mixture weights must sum to 1, got " +
                                std::to_string(weight_sum));
  }
  const NoisePmf& first = pmfs.front();
  for (const NoisePmf& p : pmfs) {
    if (p.true_count != first.true_count || p.eta != first.eta ||
        p.half_width != first.half_width) {
      throw std::invalid_argument(
          "mix_pmfs components must share true_count, eta and half_width");
    }
  }

  NoisePmf out;
  out.true_count = first.true_count;
  out.eta = first.eta;
  out.half_width = first.half_width;
  const int reach_down = std::min(first.true_count, first.half_width);
  out.support_lo = -reach_down;
  out.mass.assign(static_cast<size_t>(first.half_width + reach_down + 1), 0.0);
  for (size_t k = 0; k < pmfs.size(); ++k) {
    for (int z = out.support_lo; z <= out.support_hi(); ++z) {
      out.mass[static_cast<size_t>(z - out.support_lo)] +=
          weights[k] * pmfs[k].mass_at(z);
    }
  }
  return out;
}

ValidationReport validate_properties(const NoisePmf& pmf) {
  ValidationReport report;
  auto flag = [&report](NoiseProperty prop, double value, double magnitude) {
    report.violations.push_back({prop, value, magnitude});
  };

  const int reach_down = std::min(pmf.true_count, pmf.half_width);
  for (int i = 0; i < pmf.support_size(); ++i) {
    const int z = pmf.support_lo + i;
    const double m = pmf.mass[static_cast<size_t>(i)];
    if (m < -kTol) {
      flag(NoiseProperty::kNormalization, static_cast<double>(z), -m);
    }
    if ((z < -reach_down || z > pmf.half_width) && std::abs(m) > kTol) {
      flag(NoiseProperty::kSupport, static_cast<double>(z), std::abs(m));
    }
  }

  const double at_zero = pmf.mass_at(0);
  if (std::abs(at_zero - pmf.eta) > kTol) {
    flag(NoiseProperty::kCorrectRelease, at_zero, std::abs(at_zero - pmf.eta));
  }

  const double bias = pmf.mean();
  if (std::abs(bias) > kTol) {
    flag(NoiseProperty::kZeroBias, bias, std::abs(bias));
  }

  const double total = pmf.total_mass();
  if (std::abs(total - 1.0) > kTol) {
    flag(NoiseProperty::kNormalization, total, std::abs(total - 1.0));
  }

  report.passed = report.violations.empty();
  return report;
}

NoisePmf symmetric_noise_pmf(double eta, int half_width,
                             const std::vector<double>& alphas,
                             int true_count) {
  check_count_eta_d(true_count, eta, half_width);
  if (true_count < half_width) {
    throw std::invalid_argument(
        "symmetric noise needs true_count >= half_width (got n = " +
        std::to_string(true_count) + ", D = " + std::to_string(half_width) +
        ")");
  }
  if (static_cast<int>(alphas.size()) != half_width) {
    throw std::invalid_argument("expected one coefficient per 1..D");
  }
  // The symmetric family is the mixture of the elementary pairs (-i, i).
  std::vector<NoisePmf> components;
  components.reserve(alphas.size());
  for (int i = 1; i <= half_width; ++i) {
    components.push_back(
        make_elementary_pmf(true_count, -i, i, eta, half_width));
  }
  return mix_pmfs(alphas, components);
}

std::vector<double> mechanism_column(const NoisePmf& pmf, int true_count,
                                     int max_count) {
  if (pmf.true_count != true_count) {
    throw std::invalid_argument("pmf was built for a different true count");
  }
  if (true_count > max_count) {
    throw std::invalid_argument("true_count exceeds max_count");
  }
  std::vector<double> column(
      static_cast<size_t>(max_count + pmf.half_width + 1), 0.0);
  for (int i = 0; i < pmf.support_size(); ++i) {
    const int y = true_count + pmf.support_lo + i;
    column[static_cast<size_t>(y)] += pmf.mass[static_cast<size_t>(i)];
  }
  return column;
}

MechanismMatrix data_independent_matrix(double eta, int half_width,
                                        const std::vector<double>& alphas,
                                        int n_lo, int n_hi) {
  if (n_lo < half_width || n_hi < n_lo) {
    throw std::invalid_argument("need half_width <= n_lo <= n_hi");
  }
  MechanismMatrix matrix;
  matrix.first_count = n_lo;
  matrix.half_width = half_width;
  for (int n = n_lo; n <= n_hi; ++n) {
    const NoisePmf pmf = symmetric_noise_pmf(eta, half_width, alphas, n);
    matrix.columns.push_back(mechanism_column(pmf, n, n_hi));
  }
  return matrix;
}

NoisePmf column_to_noise_pmf(const std::vector<double>& column, int true_count,
                             double eta, int half_width) {
  check_count_eta_d(true_count, eta, half_width);
  NoisePmf pmf;
  pmf.true_count = true_count;
  pmf.eta = eta;
  pmf.half_width = half_width;
  const int reach_down = std::min(true_count, half_width);
  pmf.support_lo = -reach_down;
  pmf.mass.assign(static_cast<size_t>(half_width + reach_down + 1), 0.0);
  for (int z = pmf.support_lo; z <= pmf.support_hi(); ++z) {
    const int y = true_count + z;
    if (y >= 0 && y < static_cast<int>(column.size())) {
      pmf.mass[static_cast<size_t>(z - pmf.support_lo)] =
          column[static_cast<size_t>(y)];
    }
  }
  return pmf;
}

}  // namespace countnoise
