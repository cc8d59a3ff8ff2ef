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

#ifndef COUNTNOISE_SIMPLEX_H_
#define COUNTNOISE_SIMPLEX_H_

#include <string>
#include <vector>

namespace countnoise {

enum class Relation { kLessEq, kEqual };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation rel = Relation::kLessEq;
  double rhs = 0.0;
};

// minimize objective . x  subject to the constraints and x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<std::string> variable_names;  // diagnostics only; may be empty
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double optimum = 0.0;
  std::vector<double> assignment;  // original variables only
  int iterations = 0;              // pivot count, identical across reruns
};

// Dense primal simplex over the standard-form tableau. Equality rows are
// split into opposing inequalities; rows that then need a starting basis get
// an artificial variable whose cost is kept on a separate reduced-cost row,
// so the phase-one priority is exact instead of a large numeric penalty.
// Bland's smallest-index rule picks both the entering column and, among tied
// ratios, the leaving row, which rules out cycling and makes every run of the
// same program pivot identically.
LpSolution solve_simplex(const LinearProgram& lp);

// Largest violation of the original constraints at the given point; handy for
// checking OPTIMAL solutions independently.
double max_constraint_violation(const LinearProgram& lp,
                                const std::vector<double>& assignment);

// Human-readable dump of the objective and rows, for debugging.
std::string dump_tableau(const LinearProgram& lp);

}  // namespace countnoise

#endif  // COUNTNOISE_SIMPLEX_H_
