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


#include <doctest.h>

#include <cmath>

#include "emdarp/errors.hpp"
#include "emdarp/scenario.hpp"
#include "emdarp/solver.hpp"
#include "emdarp/validator.hpp"
#include "support.hpp"

using namespace emdarp;

namespace {

GenConfig small(std::uint64_t seed) {
  GenConfig c;
  c.seed = seed;
  c.n_requests = 2 + static_cast<int>(seed % 2);
  c.n_agents = 1 + static_cast<int>(seed % 3 == 0);
  c.n_stations = static_cast<int>(seed % 2);
  c.duplicate_visits = 0;
  c.preset = seed % 4 == 1 ? BatteryPreset::HighDischarge : BatteryPreset::Typical;
  c.selective = seed % 5 != 0;
  c.open_vrp = seed % 7 == 0;
  return c;
}

}  // namespace

TEST_CASE("branch and bound matches brute force on small instances") {
  std::size_t served = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    const Instance in = generate(small(seed));
    const ExpandedGraph g = ExpandedGraph::build(in);
    const OracleResult o = exhaustive_oracle(in, g);
    const SolveResult r = branch_and_bound(in, g);
    REQUIRE(r.has_plan == o.feasible);
    if (!o.feasible) continue;
    CHECK(r.proven);
    CHECK(r.objective == doctest::Approx(o.objective).epsilon(1e-7));
    const ValidationReport rep = validate(in, g, r.plan);
    CHECK_MESSAGE(rep.ok(), dump_report(rep));
    for (bool a : r.plan.accepted) served += a;
  }
  // The sweep is only meaningful when plans actually route requests.
  CHECK(served >= 10);
}

TEST_CASE("one seat forces sequential service") {
  Instance in = testing::line_instance();
  in.agents[0].cap_passengers = 1;
  in.requests[0].tw_hi = 1000.0;
  testing::add_request(in, 12, 18);
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult r = branch_and_bound(in, g);
  REQUIRE(r.has_plan);
  CHECK(r.plan.accepted == std::vector<bool>{true, true});
  const auto seq = r.plan.sequence(0, false);
  REQUIRE(seq.size() == 6);
  // Each pickup is followed directly by its own delivery.
  for (std::size_t i : {1u, 3u}) {
    REQUIRE(g.kind(seq[i]) == NodeKind::Pickup);
    CHECK(seq[i + 1] == g.delivery_node(g.request_of(seq[i])));
  }
}

TEST_CASE("oversized request is rejected at its penalty") {
  Instance in = testing::line_instance();
  in.requests[0].passengers = 3;
  in.requests[0].priority = 2.0;
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult r = branch_and_bound(in, g);
  REQUIRE(r.has_plan);
  CHECK_FALSE(r.plan.accepted[0]);
  CHECK_FALSE(r.plan.served_by[0]);
  CHECK(r.objective == doctest::Approx(2.0 * in.weights.eta));
  CHECK(r.plan.routes[0].idle());

  in.variant.selective = false;
  CHECK_FALSE(branch_and_bound(in, ExpandedGraph::build(in)).has_plan);
}

TEST_CASE("forced request is served even when expensive") {
  Instance in = testing::line_instance();
  in.weights.eta = 1.0;
  const ExpandedGraph g = ExpandedGraph::build(in);
  CHECK_FALSE(branch_and_bound(in, g).plan.accepted[0]);
  in.requests[0].force_accept = true;
  CHECK(branch_and_bound(in, g).plan.accepted[0]);
}

TEST_CASE("identical agents: the first one serves") {
  Instance in = testing::line_instance();
  in.agents.push_back(in.agents[0]);
  in.agents[1].id = 1;
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult r = branch_and_bound(in, g);
  REQUIRE(r.has_plan);
  REQUIRE(r.plan.served_by[0]);
  CHECK(*r.plan.served_by[0] == 0);
  CHECK(r.plan.routes[1].idle());
  const OracleResult o = exhaustive_oracle(in, g);
  CHECK(*o.plan.served_by[0] == 0);
}

TEST_CASE("oracle refuses large instances") {
  GenConfig c = small(3);
  c.n_requests = 5;
  const Instance in = generate(c);
  CHECK_THROWS_AS(exhaustive_oracle(in, ExpandedGraph::build(in)), LimitError);
}

TEST_CASE("node limit stops early and says so") {
  GenConfig c = small(2);
  c.n_requests = 4;
  c.n_agents = 2;
  const Instance in = generate(c);
  const ExpandedGraph g = ExpandedGraph::build(in);
  SolveConfig cfg;
  cfg.node_limit = 3;
  const SolveResult r = branch_and_bound(in, g, cfg);
  CHECK(r.limit == "node limit");
  CHECK_FALSE(r.proven);
  CHECK(r.nodes <= 4);
  if (r.has_plan) CHECK(r.bound <= r.objective + 1e-9);
}

TEST_CASE("repeat runs give the same plan") {
  const Instance in = generate(small(4));
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult a = branch_and_bound(in, g);
  const SolveResult b = branch_and_bound(in, g);
  REQUIRE(a.has_plan);
  CHECK(dump_plan(g, a.plan) == dump_plan(g, b.plan));
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("threaded search reaches the same optimum") {
  const Instance in = generate(small(6));
  const ExpandedGraph g = ExpandedGraph::build(in);
  SolveConfig cfg;
  cfg.deterministic = false;
  cfg.threads = 2;
  const SolveResult a = branch_and_bound(in, g);
  const SolveResult b = branch_and_bound(in, g, cfg);
  REQUIRE(a.has_plan == b.has_plan);
  if (a.has_plan) CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-7));
}
