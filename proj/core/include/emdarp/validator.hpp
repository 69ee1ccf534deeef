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
#include <map>
#include <string>
#include <vector>

#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"
#include "emdarp/plan.hpp"

namespace emdarp {

struct Violation {
  // Constraint family ("6".."42", "41a".."41f", "fix-y", "hub", "omega") or
  // "objective" for a mismatch against the reported value.
  std::string tag;
  std::string index;
  double lhs = 0.0;
  double rhs = 0.0;
  double magnitude = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  double recomputed_objective = 0.0;
  double reported_objective = 0.0;
  double objective_delta = 0.0;
  std::map<std::string, std::size_t> counts;

  bool ok() const { return violations.empty(); }
};

// Checks every routing, timing, capacity and battery rule on the plan from
// instance data alone, with recomputed loads, and recomputes the objective.
// Throws DecodeError when the plan does not fit the instance's shape.
ValidationReport validate(const Instance& instance, const ExpandedGraph& graph,
                          const RoutePlan& plan, double tol = 1e-6);

std::string dump_report(const ValidationReport& report);

}  // namespace emdarp
