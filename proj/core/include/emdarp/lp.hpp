// Copyright 2026 The emdarp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstddef>
#include <vector>

namespace emdarp {

// Small dense LP: minimize c'x subject to rows, x >= 0.
struct LpRow {
  std::vector<std::pair<std::size_t, double>> coefs;
  char sense = 'L';  // 'L' <=, 'G' >=, 'E' =
  double rhs = 0.0;
};

struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<double> cost;
  std::vector<LpRow> rows;
  // Optional finite upper bounds (infinity = none), turned into rows.
  std::vector<double> upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

// Two-phase primal simplex on a dense tableau. Dantzig pricing, falling back
// to Bland's rule after a run of degenerate pivots.
LpResult solve_lp(const LpProblem& problem, double tol = 1e-9);

}  // namespace emdarp
