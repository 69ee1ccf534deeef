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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"
#include "emdarp/plan.hpp"

namespace emdarp {

// Visited pickup, delivery and station nodes per agent, excluding the start
// node and the final depot.
using RouteSet = std::vector<std::vector<NodeId>>;

struct ScheduleResult {
  bool feasible = false;
  // Why the route set was rejected; empty when feasible.
  std::string reason;
  double objective = 0.0;
  RoutePlan plan;
};

// Onboard loads after each visit; nullopt when a capacity, empty-at-station
// or precedence rule breaks.
std::optional<std::vector<std::pair<int, int>>> route_loads(const Instance& instance,
                                                            const ExpandedGraph& graph,
                                                            std::size_t agent,
                                                            const std::vector<NodeId>& visits);

// Depot an agent ends at after `last`: its terminal hub, else the cheapest
// one (lowest index on ties).
NodeId pick_hub(const Instance& instance, const ExpandedGraph& graph, std::size_t agent,
                NodeId last);

// Optimal timing, slack and charging decisions for fixed routes. Solves the
// continuous subproblem as one LP over all agents (station duplicates couple
// their times). `hubs`, when non-empty, fixes the final depot per agent
// instead of pick_hub.
ScheduleResult schedule_routes(const Instance& instance, const ExpandedGraph& graph,
                               const RouteSet& routes, std::span<const NodeId> hubs = {});

}  // namespace emdarp
