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

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"

namespace emdarp {

// One visited node with the continuous state the formulation attaches to it.
// Loads are taken on leaving the node; SoC on arriving. At a station, soc is
// the arrival level the charging logic starts from and xi/z describe the
// charge taken there.
struct Stop {
  NodeId node = 0;
  double t = 0.0;
  double tau = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double soc = 0.0;
  std::array<double, 3> xi{};
  std::array<int, 2> z{};

  double charge_time() const { return xi[0] + xi[1] + xi[2]; }
};

struct AgentRoute {
  // stops.front() is the agent's start node (t = initial delay, soc = initial).
  std::vector<Stop> stops;
  // Final depot node; empty for an idle agent.
  std::optional<NodeId> hub;
  double hub_soc = 0.0;
  double duration = 0.0;

  bool idle() const { return stops.size() <= 1; }
};

enum class PlanStatus { Optimal, Feasible, Infeasible, Unknown };

std::string_view to_string(PlanStatus s);
PlanStatus plan_status_from(std::string_view s);

struct RoutePlan {
  std::vector<AgentRoute> routes;
  std::vector<bool> accepted;
  // Serving agent per request; empty when rejected.
  std::vector<std::optional<std::size_t>> served_by;
  double mission = 0.0;
  double objective = 0.0;
  PlanStatus status = PlanStatus::Unknown;

  // Node sequence of one agent: start, visited nodes and, unless the route
  // is open, the final depot.
  std::vector<NodeId> sequence(std::size_t agent, bool open_vrp) const;
};

// Readable route listing such as "[v0, p5, d5, f0^0, p1, d1, h0]".
std::string format_route(const ExpandedGraph& graph, const RoutePlan& plan, std::size_t agent,
                         bool open_vrp);

// Objective terms evaluated on the plan's own values.
double plan_objective(const Instance& instance, const ExpandedGraph& graph, const RoutePlan& plan);

std::string dump_plan(const ExpandedGraph& graph, const RoutePlan& plan);
RoutePlan parse_plan(std::string_view text, const ExpandedGraph& graph);
void save_plan(const ExpandedGraph& graph, const RoutePlan& plan, const std::filesystem::path& path);
RoutePlan load_plan(const std::filesystem::path& path, const ExpandedGraph& graph);

}  // namespace emdarp
