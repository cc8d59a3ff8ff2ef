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

#include "countnoise/lp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace countnoise {

namespace {

// Probability the elementary pair (i1, i2) for count n puts on offset z.
double elementary_mass(int i1, int i2, double eta, int z) {
  if (z == 0) return eta;
  const double span = static_cast<double>(i2 - i1);  // i2 + |i1|
  if (z == i1) return (1.0 - eta) * static_cast<double>(i2) / span;
  if (z == i2) return (1.0 - eta) * static_cast<double>(-i1) / span;
  return 0.0;
}

}  // namespace

LinearProgram restricted_lp(const MechanismConfig& config) {
  config.check_valid();
  const int d = config.half_width;
  const double half_err = config.eta_bar() / 2.0;
  const double exp_eps = config.exp_epsilon();
  const int n_vars = d + 1;  // delta, alpha_1..alpha_D

  LinearProgram lp;
  lp.objective.assign(static_cast<size_t>(n_vars), 0.0);
  lp.objective[0] = 1.0;
  lp.variable_names.push_back("delta");
  for (int i = 1; i <= d; ++i) {
    lp.variable_names.push_back("alpha_" + std::to_string(i));
  }

  auto zero_row = [n_vars]() {
    return std::vector<double>(static_cast<size_t>(n_vars), 0.0);
  };

  // (1-eta)/2 alpha_D - delta <= 0
  {
    LinearConstraint c;
    c.coeffs = zero_row();
    c.coeffs[static_cast<size_t>(d)] = half_err;
    c.coeffs[0] = -1.0;
    c.rhs = 0.0;
    lp.constraints.push_back(std::move(c));
  }
  // (1-eta)/2 alpha_i - E (1-eta)/2 alpha_{i+1} - delta <= 0
  for (int i = 1; i <= d - 1; ++i) {
    LinearConstraint c;
    c.coeffs = zero_row();
    c.coeffs[static_cast<size_t>(i)] = half_err;
    c.coeffs[static_cast<size_t>(i + 1)] = -exp_eps * half_err;
    c.coeffs[0] = -1.0;
    c.rhs = 0.0;
    lp.constraints.push_back(std::move(c));
  }
  // eta - E (1-eta)/2 alpha_1 - delta <= 0
  {
    LinearConstraint c;
    c.coeffs = zero_row();
    c.coeffs[1] = -exp_eps * half_err;
    c.coeffs[0] = -1.0;
    c.rhs = -config.eta;
    lp.constraints.push_back(std::move(c));
  }
  // sum alpha_i = 1
  {
    LinearConstraint c;
    c.coeffs = zero_row();
    for (int i = 1; i <= d; ++i) c.coeffs[static_cast<size_t>(i)] = 1.0;
    c.rel = Relation::kEqual;
    c.rhs = 1.0;
    lp.constraints.push_back(std::move(c));
  }
  return lp;
}

LpSolution solve_restricted_lp(const MechanismConfig& config) {
  return solve_simplex(restricted_lp(config));
}

LinearProgram general_lp(int max_count, const MechanismConfig& config,
                         GeneralLpLayout* layout, int variable_budget) {
  config.check_valid();
  if (max_count < 1) throw std::invalid_argument("max_count must be >= 1");
  const int d = config.half_width;
  const long long nominal =
      static_cast<long long>(max_count) * d * d + 1;
  if (nominal > variable_budget) {
    throw std::invalid_argument(
        "general program too large for the oracle: " +
        std::to_string(nominal) + " nominal variables exceed the budget of " +
        std::to_string(variable_budget));
  }

  GeneralLpLayout lay;
  lay.max_count = max_count;
  lay.half_width = d;
  lay.eta = config.eta;
  lay.epsilon = config.epsilon;
  // first_var[n-1] = variable index of column n's first coefficient.
  std::vector<int> first_var(static_cast<size_t>(max_count), 0);
  for (int n = 1; n <= max_count; ++n) {
    first_var[static_cast<size_t>(n - 1)] = lay.variable_count();
    const int reach_down = std::min(n, d);
    for (int i1 = -reach_down; i1 <= -1; ++i1) {
      for (int i2 = 1; i2 <= d; ++i2) {
        lay.entries.emplace_back(n, i1, i2);
      }
    }
  }

  const int n_vars = lay.variable_count();
  LinearProgram lp;
  lp.objective.assign(static_cast<size_t>(n_vars), 0.0);
  lp.objective[0] = 1.0;
  lp.variable_names.push_back("delta");
  for (const auto& [n, i1, i2] : lay.entries) {
    lp.variable_names.push_back("a_" + std::to_string(i1) + "_" +
                                std::to_string(i2) + "_" + std::to_string(n));
  }

  // Adds the coefficients of p_Y(y|n), scaled, into the row.
  auto add_column_coeffs = [&](std::vector<double>& row, int n, int y,
                               double scale) {
    const int base = first_var[static_cast<size_t>(n - 1)];
    const int reach_down = std::min(n, d);
    int v = base;
    for (int i1 = -reach_down; i1 <= -1; ++i1) {
      for (int i2 = 1; i2 <= d; ++i2, ++v) {
        const double mass = elementary_mass(i1, i2, config.eta, y - n);
        if (mass != 0.0) row[static_cast<size_t>(v)] += scale * mass;
      }
    }
  };

  const double exp_eps = config.exp_epsilon();
  auto add_neighbor_rows = [&](int n, int neighbor) {
    for (int y = 0; y <= max_count + d; ++y) {
      LinearConstraint c;
      c.coeffs.assign(static_cast<size_t>(n_vars), 0.0);
      add_column_coeffs(c.coeffs, n, y, 1.0);
      add_column_coeffs(c.coeffs, neighbor, y, -exp_eps);
      bool all_zero = true;
      for (int v = 1; v < n_vars; ++v) {
        if (c.coeffs[static_cast<size_t>(v)] != 0.0) {
          all_zero = false;
          break;
        }
      }
      // A row with no coefficients reads 0 <= delta and cannot bind.
      if (all_zero) continue;
      c.coeffs[0] = -1.0;
      c.rhs = 0.0;
      lp.constraints.push_back(std::move(c));
    }
  };
  for (int n = 1; n <= max_count - 1; ++n) add_neighbor_rows(n, n + 1);
  for (int n = 2; n <= max_count; ++n) add_neighbor_rows(n, n - 1);

  // One simplex row per column.
  for (int n = 1; n <= max_count; ++n) {
    LinearConstraint c;
    c.coeffs.assign(static_cast<size_t>(n_vars), 0.0);
    const int base = first_var[static_cast<size_t>(n - 1)];
    const int count = std::min(n, d) * d;
    for (int v = base; v < base + count; ++v) {
      c.coeffs[static_cast<size_t>(v)] = 1.0;
    }
    c.rel = Relation::kEqual;
    c.rhs = 1.0;
    lp.constraints.push_back(std::move(c));
  }

  if (layout != nullptr) *layout = std::move(lay);
  return lp;
}

GeneralLpResult solve_general_lp(int max_count, const MechanismConfig& config,
                                 int variable_budget) {
  GeneralLpResult result;
  const LinearProgram lp =
      general_lp(max_count, config, &result.layout, variable_budget);
  result.solution = solve_simplex(lp);

  result.matrix.first_count = 1;
  result.matrix.half_width = result.layout.half_width;
  if (result.solution.status == LpStatus::kOptimal) {
    const int d = result.layout.half_width;
    result.matrix.columns.assign(
        static_cast<size_t>(max_count),
        std::vector<double>(static_cast<size_t>(max_count + d + 1), 0.0));
    for (size_t e = 0; e < result.layout.entries.size(); ++e) {
      const auto& [n, i1, i2] = result.layout.entries[e];
      const double weight = result.solution.assignment[e + 1];
      if (weight == 0.0) continue;
      auto& column = result.matrix.columns[static_cast<size_t>(n - 1)];
      for (int z : {i1, 0, i2}) {
        column[static_cast<size_t>(n + z)] +=
            weight * elementary_mass(i1, i2, config.eta, z);
      }
    }
  }
  return result;
}

DeltaAudit audit_matrix(const MechanismMatrix& matrix, double epsilon) {
  if (matrix.columns.size() < 2) {
    throw std::invalid_argument("audit needs at least two adjacent columns");
  }
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");

  DeltaAudit audit;
  audit.epsilon = epsilon;
  const double exp_eps = std::exp(epsilon);
  const int pairs = static_cast<int>(matrix.columns.size()) - 1;
  const int y_count = matrix.y_count();

  for (int p = 0; p < pairs; ++p) {
    // direction +1: column n against n+1; direction -1: n+1 against n.
    for (int dir : {+1, -1}) {
      const auto& from = dir > 0 ? matrix.columns[static_cast<size_t>(p)]
                                 : matrix.columns[static_cast<size_t>(p + 1)];
      const auto& to = dir > 0 ? matrix.columns[static_cast<size_t>(p + 1)]
                               : matrix.columns[static_cast<size_t>(p)];
      const int from_count = matrix.first_count + (dir > 0 ? p : p + 1);
      double event_sum = 0.0;
      for (int y = 0; y < y_count; ++y) {
        const double gap = from[static_cast<size_t>(y)] -
                           exp_eps * to[static_cast<size_t>(y)];
        if (gap <= 0.0) continue;
        event_sum += gap;
        if (gap > audit.singular_delta) {
          audit.singular_delta = gap;
          audit.worst_count = from_count;
          audit.worst_direction = dir;
          audit.worst_output = y;
        }
      }
      audit.event_delta = std::max(audit.event_delta, event_sum);
    }
  }
  audit.bound_2d1 = std::min(
      1.0, static_cast<double>(2 * matrix.half_width + 1) * audit.singular_delta);
  return audit;
}

DeltaAudit singular_delta(const MechanismMatrix& matrix, double epsilon) {
  return audit_matrix(matrix, epsilon);
}

DeltaAudit event_delta(const MechanismMatrix& matrix, double epsilon) {
  return audit_matrix(matrix, epsilon);
}

double min_epsilon_for_delta(const MechanismMatrix& matrix,
                             double target_delta) {
  if (audit_matrix(matrix, 0.0).singular_delta <= target_delta) return 0.0;
  double lo = 0.0;
  double hi = 20.0;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (audit_matrix(matrix, mid).singular_delta <= target_delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace countnoise
