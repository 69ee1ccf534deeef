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

#include "emdarp/errors.hpp"
#include "emdarp/schedule.hpp"
#include "emdarp/validator.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace emdarp;

namespace {

struct Fixture {
  Instance in;
  ExpandedGraph g;
  RoutePlan plan;
};

// One request then a recharge before the depot.
Fixture charged() {
  Instance in = testing::line_instance();
  in.battery.alpha0 = 0.026;
  in.stations.push_back({0, Point{20, 0}, 0.0});
  ExpandedGraph g = ExpandedGraph::build(in);
  ScheduleResult r = schedule_routes(
      in, g, RouteSet{{g.pickup_node(0), g.delivery_node(0), g.station_node(0, 0)}});
  REQUIRE(r.feasible);
  return {std::move(in), std::move(g), std::move(r.plan)};
}

Stop& stop_at(RoutePlan& p, NodeId n) {
  for (Stop& s : p.routes[0].stops) {
    if (s.node == n) return s;
  }
  FAIL("node not on route");
  return p.routes[0].stops[0];
}

}  // namespace

TEST_CASE("scheduled plan is clean") {
  Fixture f = charged();
  const ValidationReport rep = validate(f.in, f.g, f.plan);
  CHECK_MESSAGE(rep.ok(), dump_report(rep));
  CHECK(rep.objective_delta == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rep.recomputed_objective == doctest::Approx(f.plan.objective));
}

TEST_CASE("loaded arrival at a station") {
  Fixture f = charged();
  auto& stops = f.plan.routes[0].stops;
  std::swap(stops[2], stops[3]);  // p, f, d
  const ValidationReport rep = validate(f.in, f.g, f.plan);
  CHECK(rep.counts.count("27") == 1);
}

TEST_CASE("charging above the first break without the flag") {
  Fixture f = charged();
  Stop& st = stop_at(f.plan, f.g.station_node(0, 0));
  st.soc = 0.90;
  st.z = {0, 0};
  const ValidationReport rep = validate(f.in, f.g, f.plan);
  CHECK(rep.counts.count("41a") == 1);
}

TEST_CASE("state of charge under the floor") {
  Fixture f = charged();
  stop_at(f.plan, f.g.delivery_node(0)).soc = 0.1;
  const ValidationReport rep = validate(f.in, f.g, f.plan);
  REQUIRE(rep.counts.count("40") == 1);
  bool cited = false;
  for (const Violation& v : rep.violations) {
    if (v.tag == "40") {
      cited = true;
      CHECK(v.magnitude == doctest::Approx(f.in.agents[0].soc_min - 0.1));
    }
  }
  CHECK(cited);
}

TEST_CASE("reported objective off by five") {
  Fixture f = charged();
  f.plan.objective += 5.0;
  const ValidationReport rep = validate(f.in, f.g, f.plan);
  CHECK(rep.counts.at("objective") == 1);
  CHECK(rep.objective_delta == doctest::Approx(-5.0));
  CHECK(validate(f.in, f.g, f.plan, 10.0).ok());
}

TEST_CASE("early service without slack") {
  Fixture f = charged();
  f.in.requests[0].tw_lo = 30.0;
  const ValidationReport rep = validate(f.in, f.g, f.plan);
  CHECK(rep.counts.count("18") == 1);
}

TEST_CASE("forced request left out") {
  Instance in = testing::line_instance();
  in.requests[0].force_accept = true;
  const ExpandedGraph g = ExpandedGraph::build(in);
  RoutePlan p;
  p.routes.resize(1);
  p.routes[0].stops.push_back({g.start_node(0), 0.0, 0.0, 0, 0, 1.0, {}, {}});
  p.accepted = {false};
  p.served_by = {std::nullopt};
  p.objective = in.weights.eta;
  const ValidationReport rep = validate(in, g, p);
  CHECK(rep.counts.count("fix-y") == 1);
}

TEST_CASE("plan shaped for another instance") {
  Fixture f = charged();
  f.plan.accepted.push_back(true);
  CHECK_THROWS_AS(validate(f.in, f.g, f.plan), DecodeError);
}

TEST_CASE("report json") {
  Fixture f = charged();
  f.plan.objective += 1.0;
  const auto doc = nlohmann::json::parse(dump_report(validate(f.in, f.g, f.plan)));
  CHECK(doc.at("ok") == false);
  CHECK(doc.at("violations").size() == 1);
  CHECK(doc.at("violations")[0].at("tag") == "objective");
  CHECK(doc.at("objective_delta").get<double>() == doctest::Approx(-1.0));
}
