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
#include <cstdint>
#include <string>

#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"
#include "emdarp/plan.hpp"

namespace emdarp {

struct SolveConfig {
  // 0 disables the limit.
  std::uint64_t node_limit = 0;
  double time_limit = 0.0;  // seconds
  // Single-threaded depth-first order; identical plans across runs.
  bool deterministic = true;
  unsigned threads = 1;
};

struct SolveResult {
  bool has_plan = false;
  // True when the whole tree was exhausted.
  bool proven = false;
  RoutePlan plan;
  double objective = 0.0;
  // Best proven lower bound (the root bound unless the search finished).
  double bound = 0.0;
  // Relative gap (objective - bound) / max(1, |objective|); 0 when proven.
  double gap = 0.0;
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  double seconds = 0.0;
  // Set when a limit stopped the search: "node limit" or "time limit".
  std::string limit;
};

// Exact search over acceptance, assignment, visit order and station visits.
// Resource limits end the search early; they are reported, never thrown.
SolveResult branch_and_bound(const Instance& instance, const ExpandedGraph& graph,
                             const SolveConfig& config = {});

struct OracleCaps {
  std::size_t max_requests = 4;
  std::size_t max_agents = 2;
  std::size_t max_station_visits = 2;
};

struct OracleResult {
  bool feasible = false;
  RoutePlan plan;
  double objective = 0.0;
  std::uint64_t evaluated = 0;
};

// Brute force over every acceptance set, assignment, interleaving, station
// insertion, duplicate labelling and final depot. Ties go to the smallest
// encoding (serving agent per request, rejected = K, then the routes).
// Throws LimitError("oracle caps exceeded") outside the caps.
OracleResult exhaustive_oracle(const Instance& instance, const ExpandedGraph& graph,
                               const OracleCaps& caps = {});

}  // namespace emdarp
