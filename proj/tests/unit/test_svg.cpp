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

#include <string>

#include "emdarp/errors.hpp"
#include "emdarp/solver.hpp"
#include "emdarp/svg.hpp"
#include "support.hpp"

using namespace emdarp;

namespace {

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("instance only") {
  Instance in = testing::line_instance();
  in.stations.push_back({0, Point{25, 5}, 0.0});
  in.duplicate_visits = 2;
  const ExpandedGraph g = ExpandedGraph::build(in);
  PlotSpec spec;
  spec.title = "a < b";
  const std::string svg = render_svg(in, g, nullptr, spec);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<title>a &lt; b</title>") != std::string::npos);
  CHECK(count(svg, "<line") == 0);
  // Start, pickup, delivery, one station glyph (first visit only), depot.
  CHECK(count(svg, "<text") == 5);
  CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
}

TEST_CASE("plan draws one line per leg") {
  const Instance in = testing::line_instance();
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult r = branch_and_bound(in, g);
  REQUIRE(r.has_plan);
  const std::string svg = render_svg(in, g, &r.plan);
  // v0 -> p0 -> d0 -> h0
  CHECK(count(svg, "<line") == 3);
  CHECK(count(svg, "id=\"arrow0\"") == 1);
  CHECK(svg == render_svg(in, g, &r.plan));
}

TEST_CASE("rejected requests fade") {
  Instance in = testing::line_instance();
  in.requests[0].passengers = 3;
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult r = branch_and_bound(in, g);
  REQUIRE(r.has_plan);
  REQUIRE_FALSE(r.plan.accepted[0]);
  const std::string svg = render_svg(in, g, &r.plan);
  CHECK(svg.find("opacity=\"0.3\"") != std::string::npos);
}

TEST_CASE("matrix instances have no coordinates") {
  Instance in = testing::line_instance();
  in.costs.mode = CostSpec::Mode::Matrix;
  in.costs.matrix = {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}};
  in.agents[0].start = std::size_t{0};
  in.requests[0].pickup = std::size_t{1};
  in.requests[0].delivery = std::size_t{2};
  in.depots[0].pos = std::size_t{3};
  CHECK_THROWS_AS(render_svg(in, ExpandedGraph::build(in), nullptr), ValidationError);
}
