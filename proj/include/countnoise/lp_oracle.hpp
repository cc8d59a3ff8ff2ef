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

#ifndef COUNTNOISE_LP_ORACLE_H_
#define COUNTNOISE_LP_ORACLE_H_

#include <tuple>
#include <vector>

#include "countnoise/mechanism_config.hpp"
#include "countnoise/noise_pmf.hpp"
#include "countnoise/simplex.hpp"

namespace countnoise {

// Restricted program over (delta, alpha_1..alpha_D): minimize delta subject to
//   (1-eta)/2 * alpha_D                                  <= delta
//   (1-eta)/2 * alpha_i - E (1-eta)/2 * alpha_{i+1}      <= delta   i < D
//   eta - E (1-eta)/2 * alpha_1                          <= delta
//   alpha_i >= 0, sum alpha_i = 1.
// This is the independent check of the closed-form solver: both must land on
// the same optimum.
LinearProgram restricted_lp(const MechanismConfig& config);
LpSolution solve_restricted_lp(const MechanismConfig& config);

// Variable layout for the general data-dependent program: delta first, then
// one coefficient per (true count n, elementary pair (i1, i2)).
struct GeneralLpLayout {
  int max_count = 1;   // N
  int half_width = 1;  // D
  double eta = 0.5;
  double epsilon = 0.0;
  // entries[v-1] = (n, i1, i2) for variable index v >= 1; variable 0 is delta.
  std::vector<std::tuple<int, int, int>> entries;

  int variable_count() const { return static_cast<int>(entries.size()) + 1; }
};

struct GeneralLpResult {
  LpSolution solution;
  GeneralLpLayout layout;
  // Output table induced by the solved coefficients, columns n = 1..N.
  MechanismMatrix matrix;
};

// Builds the general program: for every pair of adjacent counts and every
// output y in [0 : N+D], the column probability must stay within a factor E of
// its neighbor plus delta. Rows whose coefficients are all structurally zero
// reduce to 0 <= delta and are dropped. Instances above the variable budget
// (default N*D^2 + 1 <= 2000) are rejected.
LinearProgram general_lp(int max_count, const MechanismConfig& config,
                         GeneralLpLayout* layout,
                         int variable_budget = 2000);
GeneralLpResult solve_general_lp(int max_count, const MechanismConfig& config,
                                 int variable_budget = 2000);

// Exact privacy audit of a mechanism table at a given epsilon. The singular
// value scans singleton outputs; the event value sums all positive gaps of an
// adjacent pair, which is the worst event exactly. The two always sandwich:
//   singular <= event <= min(1, (2W+1) * singular)
// with W the table's half-width.
struct DeltaAudit {
  double epsilon = 0.0;
  double singular_delta = 0.0;
  double event_delta = 0.0;
  int worst_count = 0;      // n of the worst singleton gap
  int worst_direction = 0;  // +1 compares against n+1, -1 against n-1
  int worst_output = 0;     // y of the worst singleton gap
  double bound_2d1 = 0.0;   // min(1, (2W+1) * singular_delta)
};

DeltaAudit audit_matrix(const MechanismMatrix& matrix, double epsilon);
DeltaAudit singular_delta(const MechanismMatrix& matrix, double epsilon);
DeltaAudit event_delta(const MechanismMatrix& matrix, double epsilon);

// Smallest epsilon in [0, 20] whose singular delta is at most target, found by
// 60 bisection steps (the singular delta is nonincreasing in epsilon).
double min_epsilon_for_delta(const MechanismMatrix& matrix,
                             double target_delta);

}  // namespace countnoise

#endif  // COUNTNOISE_LP_ORACLE_H_
