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

#include "emdarp/graph.hpp"

#include <algorithm>
#include <cassert>

namespace emdarp {

ExpandedGraph ExpandedGraph::build(const Instance& in) {
  ExpandedGraph g;
  const std::size_t K = in.num_agents();
  const std::size_t R = in.num_requests();
  const std::size_t F = in.num_station_nodes();
  g.num_stations_ = in.num_stations();
  g.visits_per_station_ = static_cast<std::size_t>(in.duplicate_visits) + 1;
  g.virtual_sink_ = in.variant.open_vrp && in.depots.empty();
  const std::size_t H = g.virtual_sink_ ? 1 : in.depots.size();

  g.starts_ = {0, K};
  g.pickups_ = {K, K + R};
  g.deliveries_ = {K + R, K + 2 * R};
  g.stations_ = {K + 2 * R, K + 2 * R + F};
  g.depots_ = {K + 2 * R + F, K + 2 * R + F + H};
  const std::size_t N = g.depots_.last;

  // Location of every node; nullopt only for the virtual sink.
  std::vector<std::optional<Location>> where(N);
  g.kinds_.resize(N);
  g.station_earliest_.assign(N, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    g.kinds_[g.start_node(k)] = NodeKind::Start;
    where[g.start_node(k)] = in.agents[k].start;
  }
  for (std::size_t r = 0; r < R; ++r) {
    g.kinds_[g.pickup_node(r)] = NodeKind::Pickup;
    g.kinds_[g.delivery_node(r)] = NodeKind::Delivery;
    where[g.pickup_node(r)] = in.requests[r].pickup;
    where[g.delivery_node(r)] = in.requests[r].delivery;
  }
  for (std::size_t j = 0; j < g.visits_per_station_; ++j) {
    for (std::size_t i = 0; i < g.num_stations_; ++i) {
      const NodeId n = g.station_node(i, j);
      g.kinds_[n] = NodeKind::Station;
      where[n] = in.stations[i].pos;
      g.station_earliest_[n] = in.stations[i].earliest_available;
    }
  }
  for (std::size_t h = 0; h < H; ++h) {
    g.kinds_[g.depot_node(h)] = NodeKind::Depot;
    if (!g.virtual_sink_) where[g.depot_node(h)] = in.depots[h].pos;
  }

  g.positions_.resize(N);
  for (NodeId n = 0; n < N; ++n) {
    if (where[n]) {
      if (const auto* p = std::get_if<Point>(&*where[n])) g.positions_[n] = *p;
    }
  }

  const CostModel costs = derive_costs(in);
  g.cost_.assign(N * N, 0.0);
  for (NodeId a = 0; a < N; ++a) {
    for (NodeId b = 0; b < N; ++b) {
      if (a == b || !where[a] || !where[b]) continue;
      const double c = costs.travel_time(*where[a], *where[b]);
      g.cost_[a * N + b] = c;
      g.max_cost_ = std::max(g.max_cost_, c);
    }
  }

  g.adjacency_.assign(N * N, 0);
  auto add = [&](NodeId a, NodeId b) { g.adjacency_[a * N + b] = 1; };
  for (std::size_t k = 0; k < K; ++k) {
    for (NodeId p : g.pickups_) add(g.start_node(k), p);
  }
  for (NodeId i : g.pickups_) {
    for (NodeId j : g.pickups_) {
      if (i != j) add(i, j);
    }
    for (NodeId j : g.deliveries_) add(i, j);
  }
  for (NodeId i : g.deliveries_) {
    const std::size_t r = g.request_of(i);
    for (NodeId j : g.pickups_) {
      if (g.request_of(j) != r) add(i, j);
    }
    for (NodeId j : g.deliveries_) {
      if (i != j) add(i, j);
    }
    for (NodeId j : g.stations_) add(i, j);
    for (NodeId j : g.depots_) add(i, j);
  }
  for (NodeId i : g.stations_) {
    for (NodeId j : g.pickups_) add(i, j);
    for (NodeId j : g.depots_) add(i, j);
  }

  g.successors_.resize(N);
  g.predecessors_.resize(N);
  for (NodeId a = 0; a < N; ++a) {
    for (NodeId b = 0; b < N; ++b) {
      if (!g.adjacency_[a * N + b]) continue;
      g.arcs_.push_back({a, b});
      g.successors_[a].push_back(b);
      g.predecessors_[b].push_back(a);
    }
  }
  return g;
}

std::size_t ExpandedGraph::request_of(NodeId n) const {
  if (pickups_.contains(n)) return n - pickups_.first;
  assert(deliveries_.contains(n));
  return n - deliveries_.first;
}

int ExpandedGraph::load_sign(NodeId n) const {
  if (pickups_.contains(n)) return 1;
  if (deliveries_.contains(n)) return -1;
  return 0;
}

StationVisit ExpandedGraph::station_of(NodeId n) const {
  assert(stations_.contains(n));
  const std::size_t offset = n - stations_.first;
  return {offset % num_stations_, offset / num_stations_};
}

double ExpandedGraph::station_earliest(NodeId n) const { return station_earliest_[n]; }

std::string ExpandedGraph::label(NodeId n) const {
  switch (kinds_[n]) {
    case NodeKind::Start:
      return "v" + std::to_string(agent_of(n));
    case NodeKind::Pickup:
      return "p" + std::to_string(request_of(n));
    case NodeKind::Delivery:
      return "d" + std::to_string(request_of(n));
    case NodeKind::Station: {
      const StationVisit sv = station_of(n);
      return "f" + std::to_string(sv.station) + "^" + std::to_string(sv.visit);
    }
    case NodeKind::Depot:
      return "h" + std::to_string(depot_of(n));
  }
  return "?";
}

}  // namespace emdarp
