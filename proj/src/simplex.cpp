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

#include "countnoise/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace countnoise {

namespace {

// Tableau entries below this are treated as zero in pivot selection.
constexpr double kPivotTol = 1e-10;
// A column may enter only below this reduced cost. Finer than the pivot
// tolerance: the optimality gap at termination is bounded by roughly the
// column count times this value, and the solver is held to 1e-9 agreement
// with the closed form.
constexpr double kReducedCostTol = 1e-12;
// Residual artificial mass above this means the program is infeasible.
constexpr double kFeasTol = 1e-8;

struct NormalizedRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
  bool needs_artificial = false;  // true for rows standardized as >=
};

void append_row(std::vector<NormalizedRow>& rows, std::vector<double> coeffs,
                double rhs) {
  NormalizedRow row;
  if (rhs < 0.0) {
    for (double& v : coeffs) v = -v;
    rhs = -rhs;
    row.needs_artificial = true;  // flipped <= becomes >= with positive rhs
  }
  row.coeffs = std::move(coeffs);
  row.rhs = rhs;
  rows.push_back(std::move(row));
}

}  // namespace

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "OPTIMAL";
    case LpStatus::kInfeasible:
      return "INFEASIBLE";
    case LpStatus::kUnbounded:
      return "UNBOUNDED";
  }
  return "?";
}

LpSolution solve_simplex(const LinearProgram& lp) {
  const size_t n_vars = lp.objective.size();
  if (n_vars == 0) throw std::invalid_argument("linear program has no variables");
  if (lp.constraints.empty()) {
    throw std::invalid_argument("linear program has no constraints");
  }
  for (const LinearConstraint& c : lp.constraints) {
    if (c.coeffs.size() != n_vars) {
      throw std::invalid_argument("constraint width does not match variables");
    }
  }

  // Standardize: every row becomes a <= with rhs >= 0, equalities as a pair of
  // opposing inequalities. Rows whose rhs had to be flipped start from an
  // artificial basis.
  std::vector<NormalizedRow> rows;
  for (const LinearConstraint& c : lp.constraints) {
    append_row(rows, c.coeffs, c.rhs);
    if (c.rel == Relation::kEqual) {
      std::vector<double> negated(c.coeffs.size());
      for (size_t j = 0; j < c.coeffs.size(); ++j) negated[j] = -c.coeffs[j];
      append_row(rows, std::move(negated), -c.rhs);
    }
  }

  const size_t n_rows = rows.size();
  size_t n_artificial = 0;
  for (const NormalizedRow& r : rows) n_artificial += r.needs_artificial ? 1 : 0;
  const size_t total = n_vars + n_rows + n_artificial;

  // Column layout: original variables, one slack/surplus per row, then the
  // artificial columns in row order.
  std::vector<std::vector<double>> tab(n_rows, std::vector<double>(total, 0.0));
  std::vector<double> rhs(n_rows, 0.0);
  std::vector<size_t> basic(n_rows, 0);
  std::vector<char> is_artificial(total, 0);
  std::vector<char> banned(total, 0);

  size_t next_artificial = n_vars + n_rows;
  for (size_t i = 0; i < n_rows; ++i) {
    for (size_t j = 0; j < n_vars; ++j) tab[i][j] = rows[i].coeffs[j];
    rhs[i] = rows[i].rhs;
    if (!rows[i].needs_artificial) {
      tab[i][n_vars + i] = 1.0;
      basic[i] = n_vars + i;
    } else {
      tab[i][n_vars + i] = -1.0;
      const size_t art = next_artificial++;
      tab[i][art] = 1.0;
      is_artificial[art] = 1;
      basic[i] = art;
    }
  }

  // Two reduced-cost rows: the real objective and the artificial (phase-one)
  // objective. Basic artificials get eliminated from the latter up front.
  std::vector<double> reduced_cost(total, 0.0);
  std::vector<double> reduced_art(total, 0.0);
  for (size_t j = 0; j < n_vars; ++j) reduced_cost[j] = lp.objective[j];
  for (size_t j = 0; j < total; ++j) {
    if (is_artificial[j]) reduced_art[j] = 1.0;
  }
  for (size_t i = 0; i < n_rows; ++i) {
    if (is_artificial[basic[i]]) {
      for (size_t j = 0; j < total; ++j) reduced_art[j] -= tab[i][j];
    }
  }

  LpSolution solution;
  const int iteration_cap = 5000 + 200 * static_cast<int>(n_rows + total);
  bool found_ray = false;
  const size_t kNone = std::numeric_limits<size_t>::max();

  while (true) {
    if (solution.iterations > iteration_cap) {
      throw std::runtime_error("simplex exceeded its iteration cap");
    }

    // Entering column, smallest index first (Bland). Columns that lower the
    // artificial objective take absolute priority; only once that row is
    // optimal may a column that improves the real objective enter, and it must
    // leave the artificial objective untouched. Columns whose tableau entries
    // are all below the pivot tolerance cannot be pivoted; they only signal a
    // ray when their reduced cost is decisively negative.
    auto pivotable = [&](size_t j) {
      for (size_t i = 0; i < n_rows; ++i) {
        if (tab[i][j] > kPivotTol) return true;
      }
      return false;
    };
    size_t enter = kNone;
    bool saw_ray = false;
    for (size_t j = 0; j < total && enter == kNone; ++j) {
      if (banned[j]) continue;
      if (reduced_art[j] < -kReducedCostTol) {
        if (pivotable(j)) {
          enter = j;
        } else if (reduced_art[j] < -1e-9) {
          saw_ray = true;
        }
      }
    }
    if (enter == kNone) {
      for (size_t j = 0; j < total && enter == kNone; ++j) {
        if (banned[j]) continue;
        if (std::abs(reduced_art[j]) <= kPivotTol &&
            reduced_cost[j] < -kReducedCostTol) {
          if (pivotable(j)) {
            enter = j;
          } else if (reduced_cost[j] < -1e-9) {
            saw_ray = true;
          }
        }
      }
    }
    if (enter == kNone) {
      found_ray = saw_ray;
      break;
    }

    // Ratio test. Bland's anticycling argument needs exact ties broken by the
    // smallest basic index; near-ties take the strictly smaller ratio.
    double best_ratio = std::numeric_limits<double>::infinity();
    size_t leave = kNone;
    size_t leave_basic = kNone;
    for (size_t i = 0; i < n_rows; ++i) {
      const double pivot = tab[i][enter];
      if (pivot > kPivotTol) {
        const double ratio = rhs[i] / pivot;
        if (ratio < best_ratio ||
            (ratio == best_ratio && basic[i] < leave_basic)) {
          best_ratio = ratio;
          leave = i;
          leave_basic = basic[i];
        }
      }
    }
    if (leave == kNone) {
      found_ray = true;
      break;
    }

    // Pivot.
    if (is_artificial[basic[leave]]) banned[basic[leave]] = 1;
    const double pivot_value = tab[leave][enter];
    for (size_t j = 0; j < total; ++j) tab[leave][j] /= pivot_value;
    rhs[leave] /= pivot_value;
    for (size_t i = 0; i < n_rows; ++i) {
      if (i == leave) continue;
      const double factor = tab[i][enter];
      if (factor == 0.0) continue;
      for (size_t j = 0; j < total; ++j) tab[i][j] -= factor * tab[leave][j];
      tab[i][enter] = 0.0;
      rhs[i] -= factor * rhs[leave];
      if (rhs[i] < 0.0 && rhs[i] > -1e-12) rhs[i] = 0.0;
    }
    const double cost_factor = reduced_cost[enter];
    const double art_factor = reduced_art[enter];
    for (size_t j = 0; j < total; ++j) {
      reduced_cost[j] -= cost_factor * tab[leave][j];
      reduced_art[j] -= art_factor * tab[leave][j];
    }
    reduced_cost[enter] = 0.0;
    reduced_art[enter] = 0.0;
    basic[leave] = enter;
    ++solution.iterations;
  }

  double artificial_residual = 0.0;
  for (size_t i = 0; i < n_rows; ++i) {
    if (is_artificial[basic[i]]) artificial_residual += std::abs(rhs[i]);
  }

  if (artificial_residual > kFeasTol) {
    solution.status = LpStatus::kInfeasible;
    return solution;
  }
  if (found_ray) {
    solution.status = LpStatus::kUnbounded;
    return solution;
  }

  solution.status = LpStatus::kOptimal;
  solution.assignment.assign(n_vars, 0.0);
  for (size_t i = 0; i < n_rows; ++i) {
    if (basic[i] < n_vars) solution.assignment[basic[i]] = rhs[i];
  }
  double objective_value = 0.0;
  for (size_t j = 0; j < n_vars; ++j) {
    objective_value += lp.objective[j] * solution.assignment[j];
  }
  solution.optimum = objective_value;
  return solution;
}

double max_constraint_violation(const LinearProgram& lp,
                                const std::vector<double>& assignment) {
  double worst = 0.0;
  for (const LinearConstraint& c : lp.constraints) {
    double lhs = 0.0;
    for (size_t j = 0; j < c.coeffs.size(); ++j) lhs += c.coeffs[j] * assignment[j];
    const double gap = lhs - c.rhs;
    if (c.rel == Relation::kLessEq) {
      worst = std::max(worst, gap);
    } else {
      worst = std::max(worst, std::abs(gap));
    }
  }
  for (double x : assignment) worst = std::max(worst, -x);
  return worst;
}

std::string dump_tableau(const LinearProgram& lp) {
  auto name = [&lp](size_t j) {
    return j < lp.variable_names.size() ? lp.variable_names[j]
                                        : "x" + std::to_string(j);
  };
  std::string out = "minimize:";
  char buf[64];
  for (size_t j = 0; j < lp.objective.size(); ++j) {
    std::snprintf(buf, sizeof(buf), " %+.6g*%s", lp.objective[j], name(j).c_str());
    out += buf;
  }
  out += "\n";
  for (const LinearConstraint& c : lp.constraints) {
    for (size_t j = 0; j < c.coeffs.size(); ++j) {
      if (c.coeffs[j] == 0.0) continue;
      std::snprintf(buf, sizeof(buf), " %+.6g*%s", c.coeffs[j], name(j).c_str());
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), " %s %.6g\n",
                  c.rel == Relation::kLessEq ? "<=" : "==", c.rhs);
    out += buf;
  }
  return out;
}

}  // namespace countnoise
