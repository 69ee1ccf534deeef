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


#include <benchmark/benchmark.h>

#include "emdarp/scenario.hpp"
#include "emdarp/schedule.hpp"
#include "emdarp/solver.hpp"
#include "emdarp/validator.hpp"

using namespace emdarp;

namespace {

Instance small(std::uint64_t seed, int requests) {
  GenConfig c;
  c.seed = seed;
  c.n_requests = requests;
  c.n_agents = 2;
  c.n_stations = 1;
  c.duplicate_visits = 1;
  c.preset = BatteryPreset::HighDischarge;
  return generate(c);
}

void BM_BranchAndBound(benchmark::State& state) {
  const Instance in = small(5, static_cast<int>(state.range(0)));
  const ExpandedGraph g = ExpandedGraph::build(in);
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const SolveResult r = branch_and_bound(in, g);
    nodes = r.nodes;
    benchmark::DoNotOptimize(r.objective);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_BranchAndBound)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_StationScenario(benchmark::State& state) {
  const Instance in = generate(selective_closed_scenario(static_cast<std::uint64_t>(state.range(0))));
  const ExpandedGraph g = ExpandedGraph::build(in);
  for (auto _ : state) benchmark::DoNotOptimize(branch_and_bound(in, g).objective);
}
BENCHMARK(BM_StationScenario)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Oracle(benchmark::State& state) {
  const Instance in = small(5, static_cast<int>(state.range(0)));
  const ExpandedGraph g = ExpandedGraph::build(in);
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_oracle(in, g).objective);
}
BENCHMARK(BM_Oracle)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ScheduleRoutes(benchmark::State& state) {
  const Instance in = small(9, 4);
  const ExpandedGraph g = ExpandedGraph::build(in);
  const RouteSet routes{{g.pickup_node(0), g.delivery_node(0), g.pickup_node(1), g.delivery_node(1)},
                        {g.pickup_node(2), g.delivery_node(2), g.pickup_node(3), g.delivery_node(3)}};
  for (auto _ : state) benchmark::DoNotOptimize(schedule_routes(in, g, routes).objective);
}
BENCHMARK(BM_ScheduleRoutes)->Unit(benchmark::kMicrosecond);

void BM_Validate(benchmark::State& state) {
  const Instance in = generate(selective_closed_scenario(1));
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult r = branch_and_bound(in, g);
  for (auto _ : state) benchmark::DoNotOptimize(validate(in, g, r.plan).ok());
}
BENCHMARK(BM_Validate)->Unit(benchmark::kMicrosecond);

}  // namespace
