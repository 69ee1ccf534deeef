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

#include "emdarp/graph.hpp"
#include "support.hpp"

using namespace emdarp;

namespace {

Instance shaped(std::size_t K, std::size_t R, std::size_t m, int n, std::size_t H) {
  Instance in = testing::line_instance();
  in.requests.clear();
  for (std::size_t r = 0; r < R; ++r) testing::add_request(in, 1.0 + r, 50.0 + r);
  in.agents.resize(K, in.agents[0]);
  for (std::size_t k = 0; k < K; ++k) in.agents[k].id = k;
  for (std::size_t i = 0; i < m; ++i) in.stations.push_back({i, Point{5.0 + i, 5}, 0.0});
  in.duplicate_visits = n;
  in.depots.clear();
  for (std::size_t h = 0; h < H; ++h) in.depots.push_back({h, Point{60.0 + h, 0}});
  validate_instance(in);
  return in;
}

}  // namespace

TEST_CASE("station duplicates") {
  SUBCASE("one station, two extra visits") {
    const ExpandedGraph g = expand_graph(shaped(1, 1, 1, 2, 1));
    REQUIRE(g.stations().size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      const StationVisit sv = g.station_of(g.stations().first + j);
      CHECK(sv.station == 0);
      CHECK(sv.visit == j);
    }
  }
  SUBCASE("two stations, single visit") {
    const ExpandedGraph g = expand_graph(shaped(1, 1, 2, 0, 1));
    CHECK(g.stations().size() == 2);
    CHECK(g.station_of(g.station_node(1, 0)).station == 1);
  }
}

TEST_CASE("node count of the worked scenario shape") {
  const ExpandedGraph g = expand_graph(shaped(2, 6, 1, 2, 1));
  CHECK(g.num_nodes() == 2 + 12 + 3 + 1);
}

TEST_CASE("arc count matches the closed form") {
  for (std::size_t K : {1u, 2u, 3u}) {
    for (std::size_t R : {1u, 2u, 4u}) {
      for (std::size_t m : {0u, 1u, 2u}) {
        for (int n : {0, 1}) {
          for (std::size_t H : {1u, 2u}) {
            const ExpandedGraph g = expand_graph(shaped(K, R, m, n, H));
            const std::size_t F = m * static_cast<std::size_t>(n + 1);
            const std::size_t expect = R * (R - 1) + R * R + R * (R - 1) + R * (R - 1) + R * F +
                                       R * H + F * R + F * H + K * R;
            CAPTURE(K);
            CAPTURE(R);
            CAPTURE(m);
            CAPTURE(n);
            CAPTURE(H);
            CHECK(g.arcs().size() == expect);
          }
        }
      }
    }
  }
}

TEST_CASE("arc topology") {
  const ExpandedGraph g = expand_graph(shaped(2, 3, 2, 1, 2));
  for (const Arc& a : g.arcs()) {
    const NodeKind from = g.kind(a.from);
    const NodeKind to = g.kind(a.to);
    CHECK(to != NodeKind::Start);
    CHECK(from != NodeKind::Depot);
    CHECK(a.from != a.to);
    if (from == NodeKind::Start) CHECK(to == NodeKind::Pickup);
    if (to == NodeKind::Station) CHECK(from == NodeKind::Delivery);
    if (from == NodeKind::Station) CHECK((to == NodeKind::Pickup || to == NodeKind::Depot));
    if (from == NodeKind::Delivery && to == NodeKind::Pickup) {
      CHECK(g.request_of(a.from) != g.request_of(a.to));
    }
  }
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(g.admissible(g.pickup_node(r), g.delivery_node(r)));
    CHECK_FALSE(g.admissible(g.delivery_node(r), g.pickup_node(r)));
  }
  CHECK(g.load_sign(g.pickup_node(1)) == 1);
  CHECK(g.load_sign(g.delivery_node(1)) == -1);
  CHECK(g.label(g.station_node(1, 1)) == "f1^1");
}

TEST_CASE("open routing without depots gets a virtual sink") {
  Instance in = shaped(1, 1, 0, 0, 1);
  in.depots.clear();
  in.variant.open_vrp = true;
  const ExpandedGraph g = expand_graph(in);
  CHECK(g.has_virtual_sink());
  REQUIRE(g.depots().size() == 1);
  const NodeId sink = g.depots().first;
  CHECK(g.cost(g.delivery_node(0), sink) == 0.0);
  CHECK(g.admissible(g.delivery_node(0), sink));
}

TEST_CASE("self cost is zero") {
  const ExpandedGraph g = expand_graph(shaped(1, 2, 1, 0, 1));
  for (NodeId n = 0; n < g.num_nodes(); ++n) CHECK(g.cost(n, n) == 0.0);
}
