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
#include <string>
#include <vector>

#include "emdarp/instance.hpp"

namespace emdarp {

using NodeId = std::size_t;

enum class NodeKind { Start, Pickup, Delivery, Station, Depot };

// Half-open block [first, last) of node ids belonging to one class.
struct NodeRange {
  NodeId first = 0;
  NodeId last = 0;

  std::size_t size() const { return last - first; }
  bool empty() const { return first == last; }
  bool contains(NodeId n) const { return n >= first && n < last; }

  struct iterator {
    NodeId n;
    NodeId operator*() const { return n; }
    iterator& operator++() {
      ++n;
      return *this;
    }
    bool operator!=(const iterator& o) const { return n != o.n; }
  };
  iterator begin() const { return {first}; }
  iterator end() const { return {last}; }
};

struct Arc {
  NodeId from = 0;
  NodeId to = 0;
  friend bool operator==(const Arc&, const Arc&) = default;
};

struct StationVisit {
  std::size_t station = 0;
  std::size_t visit = 0;
};

// The indexed node universe: agent starts, pickups, deliveries, station
// visits (m stations times n+1 visits), final depots. Ids are contiguous per
// class in exactly that order. Station visit j of station i has id
// stations().first + j * m + i, so the first visits form one block.
//
// Immutable after build(); safe to share across threads.
class ExpandedGraph {
 public:
  static ExpandedGraph build(const Instance& instance);

  std::size_t num_nodes() const { return kinds_.size(); }
  std::size_t num_agents() const { return starts_.size(); }
  std::size_t num_requests() const { return pickups_.size(); }
  std::size_t num_physical_stations() const { return num_stations_; }
  std::size_t visits_per_station() const { return visits_per_station_; }

  NodeRange starts() const { return starts_; }
  NodeRange pickups() const { return pickups_; }
  NodeRange deliveries() const { return deliveries_; }
  NodeRange stations() const { return stations_; }
  NodeRange depots() const { return depots_; }

  NodeId start_node(std::size_t agent) const { return starts_.first + agent; }
  NodeId pickup_node(std::size_t request) const { return pickups_.first + request; }
  NodeId delivery_node(std::size_t request) const { return deliveries_.first + request; }
  NodeId station_node(std::size_t station, std::size_t visit) const {
    return stations_.first + visit * num_stations_ + station;
  }
  NodeId depot_node(std::size_t depot) const { return depots_.first + depot; }

  NodeKind kind(NodeId n) const { return kinds_[n]; }
  bool is_location(NodeId n) const {
    return kinds_[n] == NodeKind::Pickup || kinds_[n] == NodeKind::Delivery;
  }

  // Request served at a pickup or delivery node.
  std::size_t request_of(NodeId n) const;
  // Agent owning a start node.
  std::size_t agent_of(NodeId n) const { return n - starts_.first; }
  // +1 at pickups, -1 at deliveries.
  int load_sign(NodeId n) const;
  StationVisit station_of(NodeId n) const;
  std::size_t depot_of(NodeId n) const { return n - depots_.first; }

  double cost(NodeId from, NodeId to) const { return cost_[from * num_nodes() + to]; }
  double max_cost() const { return max_cost_; }
  // Earliest availability inherited from the physical station.
  double station_earliest(NodeId n) const;

  // True when the open variant had no depots and a zero-cost sink was added.
  bool has_virtual_sink() const { return virtual_sink_; }
  // Planar position when known (euclidean instances); used for plotting.
  std::optional<Point> position(NodeId n) const { return positions_[n]; }

  // Admissible arcs, sorted by (from, to). Start arcs are emitted only from
  // the owning agent's start node.
  const std::vector<Arc>& arcs() const { return arcs_; }
  bool admissible(NodeId from, NodeId to) const { return adjacency_[from * num_nodes() + to]; }
  const std::vector<NodeId>& successors(NodeId n) const { return successors_[n]; }
  const std::vector<NodeId>& predecessors(NodeId n) const { return predecessors_[n]; }

  // Short readable label such as "v0", "p3", "d3", "f0^1", "h0".
  std::string label(NodeId n) const;

 private:
  NodeRange starts_, pickups_, deliveries_, stations_, depots_;
  std::size_t num_stations_ = 0;
  std::size_t visits_per_station_ = 1;
  bool virtual_sink_ = false;
  std::vector<NodeKind> kinds_;
  std::vector<std::optional<Point>> positions_;
  std::vector<double> station_earliest_;
  std::vector<double> cost_;
  double max_cost_ = 0.0;
  std::vector<Arc> arcs_;
  std::vector<char> adjacency_;
  std::vector<std::vector<NodeId>> successors_;
  std::vector<std::vector<NodeId>> predecessors_;
};

inline ExpandedGraph expand_graph(const Instance& instance) {
  return ExpandedGraph::build(instance);
}

}  // namespace emdarp
