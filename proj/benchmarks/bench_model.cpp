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

#include "emdarp/charging.hpp"
#include "emdarp/milp.hpp"
#include "emdarp/model_io.hpp"
#include "emdarp/scenario.hpp"

using namespace emdarp;

namespace {

Instance sized(int requests, int agents, int stations, int dups) {
  GenConfig c;
  c.seed = 17;
  c.n_requests = requests;
  c.n_agents = agents;
  c.n_stations = stations;
  c.duplicate_visits = dups;
  return generate(c);
}

void BM_Generate(benchmark::State& state) {
  GenConfig c;
  c.n_requests = static_cast<int>(state.range(0));
  c.n_agents = 3;
  for (auto _ : state) {
    ++c.seed;
    benchmark::DoNotOptimize(generate(c));
  }
}
BENCHMARK(BM_Generate)->Arg(8)->Arg(32)->Arg(128);

void BM_ExpandGraph(benchmark::State& state) {
  const Instance in = sized(static_cast<int>(state.range(0)), 3, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ExpandedGraph::build(in));
}
BENCHMARK(BM_ExpandGraph)->Arg(6)->Arg(20)->Arg(50);

void BM_BuildModel(benchmark::State& state) {
  const Instance in = sized(static_cast<int>(state.range(0)), 3, 2, 2);
  const ExpandedGraph g = ExpandedGraph::build(in);
  std::size_t rows = 0;
  for (auto _ : state) {
    MilpModel m = build_model(in, g);
    rows = m.rows.size();
    benchmark::DoNotOptimize(m);
  }
  state.counters["rows"] = static_cast<double>(rows);
}
BENCHMARK(BM_BuildModel)->Arg(6)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_WriteMps(benchmark::State& state) {
  const Instance in = sized(static_cast<int>(state.range(0)), 3, 2, 2);
  const MilpModel m = build_model(in);
  std::size_t bytes = 0;
  for (auto _ : state) {
    const std::string s = to_mps(m);
    bytes = s.size();
    benchmark::DoNotOptimize(s.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * bytes));
}
BENCHMARK(BM_WriteMps)->Arg(6)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_ChargeCurve(benchmark::State& state) {
  const BatteryModel b = generate(GenConfig{}).battery;
  double a = 0.0;
  for (auto _ : state) {
    a += 0.0001;
    if (a > 0.85) a = 0.0;
    benchmark::DoNotOptimize(charge_curve(a, 3.0, b));
  }
}
BENCHMARK(BM_ChargeCurve);

}  // namespace
