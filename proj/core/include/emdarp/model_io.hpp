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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"
#include "emdarp/milp.hpp"
#include "emdarp/plan.hpp"

namespace emdarp {

enum class SolutionSource { Builtin, External };

struct Solution {
  std::map<std::string, double> values;
  std::optional<double> objective_reported;
  PlanStatus status = PlanStatus::Unknown;
  SolutionSource source = SolutionSource::External;
  std::vector<std::string> warnings;
};

// Free-format MPS. Rows keep the model order, columns the catalog order; the
// constant objective part is recorded in a comment since MPS has no slot
// every reader agrees on.
void write_mps(const MilpModel& model, std::ostream& out);
std::string to_mps(const MilpModel& model);
void write_mps(const MilpModel& model, const std::filesystem::path& path);

// "name value" lines, '#' comments, optional "objective <v>" line. With a
// catalog, names outside it are rejected.
Solution parse_solution(std::string_view text, const VariableCatalog* catalog = nullptr);
Solution load_solution(const std::filesystem::path& path, const VariableCatalog* catalog = nullptr);
void save_solution(const MilpModel& model, std::span<const double> values,
                   const std::filesystem::path& path);

struct ExternalConfig {
  // Shell command with {model} and {solution} placeholders.
  std::string command;
  // Wall-clock limit in seconds; 0 disables it.
  double timeout_seconds = 0.0;
  // Exit code to status. The defaults match tools/highs_solve.py; codes not
  // listed mean optimal (0) or feasible with a solution file, unknown
  // without one.
  std::map<int, PlanStatus> exit_codes{
      {2, PlanStatus::Infeasible}, {3, PlanStatus::Feasible}, {4, PlanStatus::Unknown}};
  // Keep the temporary directory for inspection.
  bool keep_files = false;
};

// EMDARP_SOLVER_CMD, or empty when unset.
std::string default_solver_command();

// JSON: {"command": "...", "timeout_seconds": 60, "exit_codes": {"2": "infeasible"}}
ExternalConfig load_external_config(const std::filesystem::path& path);

// Writes the model to a fresh temporary directory, runs the command through
// /bin/sh and parses what it leaves behind. Throws SpawnError when the
// executable cannot be resolved or started.
Solution run_external(const MilpModel& model, const ExternalConfig& config);

// Dense value vector in catalog order; absent variables are 0 and reported
// in warnings.
std::vector<double> solution_values(const MilpModel& model, const Solution& solution,
                                    std::vector<std::string>* warnings = nullptr);

// Follows the x arcs out of every start node. Throws DecodeError on
// fractional binaries, branching, broken chains and detached cycles.
RoutePlan decode_solution(const MilpModel& model, std::span<const double> values,
                          const Instance& instance, const ExpandedGraph& graph,
                          PlanStatus status = PlanStatus::Feasible);
RoutePlan decode_solution(const MilpModel& model, const Solution& solution,
                          const Instance& instance, const ExpandedGraph& graph);

struct EncodeOptions {
  // Lower SoC at pickups and deliveries to the least level that still
  // finishes the route. Useful when checking plans against the SoC rows of
  // arcs the route does not take.
  bool minimal_soc = false;
};

// Inverse of decode_solution: MILP values that reproduce the plan.
std::vector<double> encode_plan(const MilpModel& model, const Instance& instance,
                                const ExpandedGraph& graph, const RoutePlan& plan,
                                EncodeOptions options = {});

}  // namespace emdarp
