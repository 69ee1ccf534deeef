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

#include <algorithm>
#include <string>

#include "emdarp/milp.hpp"

namespace emdarp {
namespace {

class RowSink {
 public:
  explicit RowSink(std::vector<Constraint>& out) : out_(out) {}

  void add(std::string tag, std::string index, LinearExpr expr, Sense sense, double rhs) {
    out_.push_back({std::move(tag), std::move(index), std::move(expr), sense, rhs});
  }

 private:
  std::vector<Constraint>& out_;
};

std::string idx(std::initializer_list<std::pair<const char*, std::size_t>> parts) {
  std::string s;
  for (const auto& [key, value] : parts) {
    if (!s.empty()) s += ',';
    s += key;
    s += '=';
    s += std::to_string(value);
  }
  return s;
}

// Sum over agents of x(k, from, to).
void add_arc_all_agents(LinearExpr& e, const BuildContext& ctx, NodeId from, NodeId to,
                        double coef) {
  for (std::size_t k = 0; k < ctx.graph.num_agents(); ++k) e.add_if(ctx.vars.x(k, from, to), coef);
}

// Sum over predecessors of `to` in `range` for agent k.
void add_inflow(LinearExpr& e, const BuildContext& ctx, std::size_t k, NodeRange range, NodeId to,
                double coef) {
  for (NodeId i : ctx.graph.predecessors(to)) {
    if (range.contains(i)) e.add_if(ctx.vars.x(k, i, to), coef);
  }
}

double service_at(const BuildContext& ctx, NodeId n) {
  return ctx.instance.requests[ctx.graph.request_of(n)].service_time;
}

// Travel time charged to the duration rows; zero toward depots in open mode.
double duration_cost(const BuildContext& ctx, NodeId i, NodeId j) {
  if (ctx.instance.variant.open_vrp && ctx.graph.kind(j) == NodeKind::Depot) return 0.0;
  return ctx.graph.cost(i, j);
}

// Travel time charged to the SoC rows.
double energy_cost(const BuildContext& ctx, NodeId i, NodeId j) {
  const auto& v = ctx.instance.variant;
  if (v.open_vrp && !v.open_vrp_soc_to_hub && ctx.graph.kind(j) == NodeKind::Depot) return 0.0;
  return ctx.graph.cost(i, j);
}

}  // namespace

ObjectiveRows build_objective(const BuildContext& ctx) {
  ObjectiveRows out;
  RowSink rows(out.rows);
  const auto& g = ctx.graph;
  const auto& v = ctx.vars;
  const auto& w = ctx.instance.weights;
  const double M = ctx.big_m.objective;

  out.objective.add(v.mission(), 1.0);
  for (std::size_t r = 0; r < g.num_requests(); ++r) {
    const double lambda = ctx.instance.requests[r].priority;
    out.objective.add(v.tr(r), lambda * w.epsilon);
    out.objective.add(v.dr(r), lambda * w.zeta);
    out.objective.add(v.y(r), -lambda * w.eta);
    out.offset += lambda * w.eta;

    const NodeId p = g.pickup_node(r);
    const NodeId d = g.delivery_node(r);
    const std::string i = idx({{"r", r}});
    auto pinch = [&](const char* tag, VarIndex aux, VarIndex a, VarIndex b) {
      LinearExpr lo;
      lo.add(aux, 1.0).add(a, -1.0).add(b, -1.0).add(v.y(r), -M);
      rows.add(tag, i, std::move(lo), Sense::GreaterEqual, -M);
      LinearExpr hi;
      hi.add(aux, 1.0).add(a, -1.0).add(b, -1.0);
      rows.add(tag, i, std::move(hi), Sense::LessEqual, 0.0);
    };
    auto gate = [&](const char* tag, VarIndex aux) {
      LinearExpr e;
      e.add(aux, 1.0).add(v.y(r), -M);
      rows.add(tag, i, std::move(e), Sense::LessEqual, 0.0);
    };
    pinch("2", v.tr(r), v.t(p), v.t(d));
    gate("3", v.tr(r));
    pinch("4", v.dr(r), v.tau(p), v.tau(d));
    gate("5", v.dr(r));
  }
  return out;
}

std::vector<Constraint> build_flow(const BuildContext& ctx) {
  std::vector<Constraint> out;
  RowSink rows(out);
  const auto& in = ctx.instance;
  const auto& g = ctx.graph;
  const auto& v = ctx.vars;
  const std::size_t K = g.num_agents();

  for (std::size_t r = 0; r < g.num_requests(); ++r) {
    LinearExpr e;
    e.add(v.y(r), 1.0);
    rows.add("6", idx({{"r", r}}), std::move(e), in.variant.selective ? Sense::LessEqual : Sense::Equal,
             1.0);
    if (in.requests[r].force_accept) {
      LinearExpr f;
      f.add(v.y(r), 1.0);
      rows.add("fix-y", idx({{"r", r}}), std::move(f), Sense::Equal, 1.0);
    }
  }

  for (std::size_t r = 0; r < g.num_requests(); ++r) {
    const NodeId p = g.pickup_node(r);
    const NodeId d = g.delivery_node(r);
    LinearExpr ep;
    ep.add(v.y(r), 1.0);
    LinearExpr ed;
    ed.add(v.y(r), 1.0);
    for (std::size_t k = 0; k < K; ++k) {
      for (NodeId i : g.predecessors(p)) ep.add_if(v.x(k, i, p), -1.0);
      for (NodeId i : g.predecessors(d)) ed.add_if(v.x(k, i, d), -1.0);
    }
    rows.add("7", idx({{"r", r}}), std::move(ep), Sense::Equal, 0.0);
    rows.add("8", idx({{"r", r}}), std::move(ed), Sense::Equal, 0.0);
  }

  for (std::size_t r = 0; r < g.num_requests(); ++r) {
    const NodeId p = g.pickup_node(r);
    const NodeId d = g.delivery_node(r);
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr e;
      for (NodeId i : g.predecessors(p)) e.add_if(v.x(k, i, p), 1.0);
      for (NodeId i : g.predecessors(d)) e.add_if(v.x(k, i, d), -1.0);
      rows.add("9", idx({{"r", r}, {"k", k}}), std::move(e), Sense::Equal, 0.0);
    }
  }

  for (std::size_t i = 0; i < g.num_physical_stations(); ++i) {
    for (std::size_t j = 1; j < g.visits_per_station(); ++j) {
      const NodeId cur = g.station_node(i, j);
      const NodeId prev = g.station_node(i, j - 1);
      const std::string ix = idx({{"i", i}, {"j", j}});
      LinearExpr order;
      LinearExpr once;
      for (std::size_t k = 0; k < K; ++k) {
        add_inflow(order, ctx, k, g.deliveries(), cur, 1.0);
        add_inflow(order, ctx, k, g.deliveries(), prev, -1.0);
        add_inflow(once, ctx, k, g.deliveries(), prev, 1.0);
      }
      rows.add("10", ix, std::move(order), Sense::LessEqual, 0.0);
      rows.add("10", ix, std::move(once), Sense::LessEqual, 1.0);
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    LinearExpr e;
    const NodeId s = g.start_node(k);
    for (NodeId j : g.successors(s)) e.add_if(v.x(k, s, j), 1.0);
    rows.add("11", idx({{"k", k}}), std::move(e), Sense::LessEqual, 1.0);
  }

  auto conserve = [&](const char* tag, NodeRange range) {
    for (NodeId h : range) {
      for (std::size_t k = 0; k < K; ++k) {
        LinearExpr e;
        for (NodeId i : g.predecessors(h)) e.add_if(v.x(k, i, h), 1.0);
        for (NodeId j : g.successors(h)) e.add_if(v.x(k, h, j), -1.0);
        rows.add(tag, idx({{"h", h}, {"k", k}}), std::move(e), Sense::Equal, 0.0);
      }
    }
  };
  conserve("12", g.pickups());
  conserve("13", g.deliveries());
  conserve("13", g.stations());
  return out;
}

std::vector<Constraint> build_timing(const BuildContext& ctx) {
  std::vector<Constraint> out;
  RowSink rows(out);
  const auto& in = ctx.instance;
  const auto& g = ctx.graph;
  const auto& v = ctx.vars;
  const std::size_t K = g.num_agents();
  const double M = ctx.big_m.time;

  for (NodeId j : g.pickups()) {
    LinearExpr e;
    e.add(v.t(j), 1.0);
    for (std::size_t k = 0; k < K; ++k) {
      const NodeId s = g.start_node(k);
      e.add_if(v.x(k, s, j), -(in.agents[k].initial_delay + g.cost(s, j)));
    }
    rows.add("14", idx({{"j", j}}), std::move(e), Sense::GreaterEqual, 0.0);
  }

  for (const Arc& a : g.arcs()) {
    if (!g.is_location(a.from) || !g.is_location(a.to)) continue;
    LinearExpr e;
    e.add(v.t(a.to), 1.0).add(v.t(a.from), -1.0);
    add_arc_all_agents(e, ctx, a.from, a.to, -M);
    rows.add("15", idx({{"i", a.from}, {"j", a.to}}), std::move(e), Sense::GreaterEqual,
             service_at(ctx, a.from) + g.cost(a.from, a.to) - M);
  }

  for (std::size_t r = 0; r < g.num_requests(); ++r) {
    LinearExpr e;
    e.add(v.t(g.delivery_node(r)), 1.0).add(v.t(g.pickup_node(r)), -1.0);
    rows.add("16", idx({{"r", r}}), std::move(e), Sense::GreaterEqual, in.requests[r].service_time);
  }

  for (std::size_t r = 0; r < g.num_requests(); ++r) {
    const Request& req = in.requests[r];
    const bool at_pickup = req.tw_kind == TimeWindowKind::Pickup;
    const NodeId n = at_pickup ? g.pickup_node(r) : g.delivery_node(r);
    const char* tag = at_pickup ? "17" : "18";
    LinearExpr lo;
    lo.add(v.t(n), 1.0).add(v.tau(n), 1.0);
    rows.add(tag, idx({{"r", r}}), std::move(lo), Sense::GreaterEqual, req.tw_lo);
    LinearExpr hi;
    hi.add(v.t(n), 1.0).add(v.tau(n), -1.0);
    rows.add(tag, idx({{"r", r}}), std::move(hi), Sense::LessEqual, req.tw_hi);
  }

  for (const Arc& a : g.arcs()) {
    const NodeKind from = g.kind(a.from);
    const NodeKind to = g.kind(a.to);
    if (from == NodeKind::Delivery && to == NodeKind::Station) {
      LinearExpr e;
      e.add(v.t(a.to), 1.0).add(v.t(a.from), -1.0);
      add_arc_all_agents(e, ctx, a.from, a.to, -M);
      rows.add("19", idx({{"i", a.from}, {"j", a.to}}), std::move(e), Sense::GreaterEqual,
               service_at(ctx, a.from) + g.cost(a.from, a.to) - M);
    } else if (from == NodeKind::Station && to == NodeKind::Pickup) {
      LinearExpr e;
      e.add(v.t(a.to), 1.0).add(v.t(a.from), -1.0);
      for (std::size_t k = 0; k < K; ++k) {
        e.add_if(v.x(k, a.from, a.to), -(in.agents[k].station_service_time + M));
      }
      for (int l = 1; l <= 3; ++l) e.add(v.xi(a.from, l), -1.0);
      rows.add("19", idx({{"i", a.from}, {"j", a.to}}), std::move(e), Sense::GreaterEqual,
               g.cost(a.from, a.to) - M);
    }
  }

  for (std::size_t i = 0; i < g.num_physical_stations(); ++i) {
    for (std::size_t j = 1; j < g.visits_per_station(); ++j) {
      const NodeId cur = g.station_node(i, j);
      const NodeId prev = g.station_node(i, j - 1);
      LinearExpr e;
      e.add(v.t(cur), 1.0).add(v.t(prev), -1.0);
      for (int l = 1; l <= 3; ++l) e.add(v.xi(prev, l), -1.0);
      for (std::size_t k = 0; k < K; ++k) {
        add_inflow(e, ctx, k, g.deliveries(), prev, -(in.agents[k].station_service_time + M));
        add_inflow(e, ctx, k, g.deliveries(), cur, -M);
      }
      rows.add("20", idx({{"i", i}, {"j", j}}), std::move(e), Sense::GreaterEqual, -2.0 * M);
    }
  }

  for (std::size_t i = 0; i < g.num_physical_stations(); ++i) {
    const double omega = in.stations[i].earliest_available;
    if (omega <= 0.0) continue;
    LinearExpr e;
    e.add(v.t(g.station_node(i, 0)), 1.0);
    rows.add("omega", idx({{"i", i}}), std::move(e), Sense::GreaterEqual, omega);
  }

  for (std::size_t k = 0; k < K; ++k) {
    LinearExpr e;
    e.add(v.tk(k), 1.0);
    rows.add("21", idx({{"k", k}}), std::move(e), Sense::LessEqual, in.agents[k].max_duration);
  }

  for (NodeId i : g.deliveries()) {
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr e;
      e.add(v.tk(k), 1.0).add(v.t(i), -1.0);
      for (NodeId h : g.depots()) e.add_if(v.x(k, i, h), -(duration_cost(ctx, i, h) + M));
      rows.add("22", idx({{"i", i}, {"k", k}}), std::move(e), Sense::GreaterEqual,
               service_at(ctx, i) - M);
    }
  }

  for (NodeId i : g.stations()) {
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr e;
      e.add(v.tk(k), 1.0).add(v.t(i), -1.0);
      for (int l = 1; l <= 3; ++l) e.add(v.xi(i, l), -1.0);
      for (NodeId h : g.depots()) e.add_if(v.x(k, i, h), -(duration_cost(ctx, i, h) + M));
      rows.add("23", idx({{"i", i}, {"k", k}}), std::move(e), Sense::GreaterEqual,
               in.agents[k].station_service_time - M);
    }
  }

  for (std::size_t k = 0; k < K; ++k) {
    LinearExpr e;
    e.add(v.mission(), 1.0).add(v.tk(k), -1.0);
    rows.add("24", idx({{"k", k}}), std::move(e), Sense::GreaterEqual, 0.0);
  }
  return out;
}

std::vector<Constraint> build_capacity(const BuildContext& ctx) {
  std::vector<Constraint> out;
  RowSink rows(out);
  const auto& in = ctx.instance;
  const auto& g = ctx.graph;
  const auto& v = ctx.vars;
  const std::size_t K = g.num_agents();

  struct Commodity {
    const char* first_tag;  // entry from start or station
    const char* flow_tag;
    const char* empty_tag;
    const char* limit_tag;
    int Request::*demand;
    int Agent::*capacity;
    VarIndex (VariableCatalog::*load)(NodeId, std::size_t) const;
  };
  const Commodity commodities[] = {
      {"25", "26", "27", "28", &Request::passengers, &Agent::cap_passengers, &VariableCatalog::u1},
      {"29", "30", "31", "32", &Request::equipment, &Agent::cap_equipment, &VariableCatalog::u2},
  };

  for (const Commodity& c : commodities) {
    auto load = [&](NodeId n, std::size_t k) { return (v.*c.load)(n, k); };

    for (NodeId j : g.pickups()) {
      const double q = in.requests[g.request_of(j)].*c.demand;
      for (std::size_t k = 0; k < K; ++k) {
        // A demand above capacity would make the printed Q-coefficient cut
        // off routes that skip j, so the coefficient grows to cover it.
        const double M = std::max<double>(in.agents[k].*c.capacity, q);
        LinearExpr e;
        e.add(load(j, k), 1.0);
        e.add_if(v.x(k, g.start_node(k), j), -M);
        add_inflow(e, ctx, k, g.stations(), j, -M);
        rows.add(c.first_tag, idx({{"j", j}, {"k", k}}), std::move(e), Sense::GreaterEqual, q - M);
      }
    }

    for (const Arc& a : g.arcs()) {
      if (!g.is_location(a.from) || !g.is_location(a.to)) continue;
      const double delta = g.load_sign(a.to) * in.requests[g.request_of(a.to)].*c.demand;
      for (std::size_t k = 0; k < K; ++k) {
        // Q alone is too small when the step adds load and the tail is full.
        const double M = in.agents[k].*c.capacity + std::max(0.0, delta);
        LinearExpr e;
        e.add(load(a.to, k), 1.0).add(load(a.from, k), -1.0).add(v.x(k, a.from, a.to), -M);
        rows.add(c.flow_tag, idx({{"i", a.from}, {"j", a.to}, {"k", k}}), std::move(e),
                 Sense::GreaterEqual, delta - M);
      }
    }

    for (NodeId i : g.deliveries()) {
      for (std::size_t k = 0; k < K; ++k) {
        const double Q = in.agents[k].*c.capacity;
        LinearExpr e;
        e.add(load(i, k), 1.0);
        for (NodeId j : g.successors(i)) {
          const NodeKind kind = g.kind(j);
          if (kind == NodeKind::Station || kind == NodeKind::Depot) e.add_if(v.x(k, i, j), Q);
        }
        rows.add(c.empty_tag, idx({{"i", i}, {"k", k}}), std::move(e), Sense::LessEqual, Q);
      }
    }

    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      if (!g.is_location(i)) continue;
      for (std::size_t k = 0; k < K; ++k) {
        LinearExpr e;
        e.add(load(i, k), 1.0);
        rows.add(c.limit_tag, idx({{"i", i}, {"k", k}}), std::move(e), Sense::LessEqual,
                 in.agents[k].*c.capacity);
      }
    }
  }

  for (NodeId i : g.pickups()) {
    for (std::size_t k = 0; k < K; ++k) {
      const Agent& ag = in.agents[k];
      const double Qt = ag.combined_capacity();
      LinearExpr e;
      e.add(v.u1(i, k), 1.0).add(v.u2(i, k), ag.conversion);
      for (NodeId j : g.successors(i)) {
        if (g.is_location(j)) e.add_if(v.x(k, i, j), Qt);
      }
      rows.add("33", idx({{"i", i}, {"k", k}}), std::move(e), Sense::LessEqual,
               ag.cap_passengers + Qt);
    }
  }
  return out;
}

std::vector<Constraint> build_energy(const BuildContext& ctx) {
  std::vector<Constraint> out;
  RowSink rows(out);
  const auto& in = ctx.instance;
  const auto& g = ctx.graph;
  const auto& v = ctx.vars;
  const auto& b = in.battery;
  const std::size_t K = g.num_agents();
  const double beta[3] = {b.beta1, b.beta2, b.beta3};
  auto add_charge = [&](LinearExpr& e, NodeId f, double sign) {
    for (int l = 1; l <= 3; ++l) e.add(v.xi(f, l), sign * beta[l - 1]);
  };

  for (NodeId j : g.pickups()) {
    for (std::size_t k = 0; k < K; ++k) {
      const NodeId s = g.start_node(k);
      LinearExpr e;
      e.add(v.phi(j, k), 1.0).add_if(v.x(k, s, j), 1.0);
      rows.add("34", idx({{"j", j}, {"k", k}}), std::move(e), Sense::LessEqual,
               in.agents[k].soc_init - b.alpha0 * g.cost(s, j) + 1.0);
    }
  }

  for (const Arc& a : g.arcs()) {
    if (!g.is_location(a.from) || !g.is_location(a.to)) continue;
    const double c = g.cost(a.from, a.to);
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr e;
      e.add(v.phi(a.to, k), 1.0).add(v.phi(a.from, k), -1.0);
      e.add(v.u1(a.from, k), b.alpha1 * c).add(v.u2(a.from, k), b.alpha2 * c);
      e.add(v.x(k, a.from, a.to), 1.0);
      rows.add("35", idx({{"i", a.from}, {"j", a.to}, {"k", k}}), std::move(e), Sense::LessEqual,
               1.0 - b.alpha0 * c);
    }
  }

  for (const Arc& a : g.arcs()) {
    if (g.kind(a.from) != NodeKind::Delivery) continue;
    const NodeKind to = g.kind(a.to);
    if (to != NodeKind::Station && to != NodeKind::Depot) continue;
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr e;
      e.add(v.phi(a.to, k), 1.0).add(v.phi(a.from, k), -1.0).add(v.x(k, a.from, a.to), 1.0);
      rows.add("36", idx({{"i", a.from}, {"j", a.to}, {"k", k}}), std::move(e), Sense::LessEqual,
               1.0 - b.alpha0 * energy_cost(ctx, a.from, a.to));
    }
  }

  for (NodeId i : g.stations()) {
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr lo;
      lo.add(v.phi(i, k), 1.0);
      add_charge(lo, i, 1.0);
      LinearExpr hi = lo;
      for (NodeId j : g.successors(i)) {
        lo.add_if(v.x(k, i, j), -1.0);
        hi.add_if(v.x(k, i, j), 1.0);
      }
      rows.add("37", idx({{"i", i}, {"k", k}}), std::move(lo), Sense::GreaterEqual,
               in.agents[k].soc_target - 1.0);
      rows.add("38", idx({{"i", i}, {"k", k}}), std::move(hi), Sense::LessEqual, 2.0);
    }
  }

  for (const Arc& a : g.arcs()) {
    if (g.kind(a.from) != NodeKind::Station) continue;
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr e;
      e.add(v.phi(a.to, k), 1.0).add(v.phi(a.from, k), -1.0).add(v.x(k, a.from, a.to), 1.0);
      add_charge(e, a.from, -1.0);
      rows.add("39", idx({{"i", a.from}, {"j", a.to}, {"k", k}}), std::move(e), Sense::LessEqual,
               1.0 - b.alpha0 * energy_cost(ctx, a.from, a.to));
    }
  }

  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (g.kind(i) == NodeKind::Start) continue;
    for (std::size_t k = 0; k < K; ++k) {
      LinearExpr e;
      e.add(v.phi(i, k), 1.0);
      rows.add("40", idx({{"i", i}, {"k", k}}), std::move(e), Sense::GreaterEqual,
               in.agents[k].soc_min);
    }
  }

  constexpr double kB1 = BatteryModel::kFirstBreak;
  constexpr double kB2 = BatteryModel::kSecondBreak;
  for (NodeId j : g.stations()) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::string ix = idx({{"j", j}, {"k", k}});
      auto entered = [&](LinearExpr& e, double coef) {
        add_inflow(e, ctx, k, g.deliveries(), j, coef);
      };
      LinearExpr a;
      a.add(v.phi(j, k), 1.0);
      entered(a, 1.0);
      rows.add("41a", ix, std::move(a), Sense::LessEqual, kB1 + 1.0);

      LinearExpr s1u;
      s1u.add(v.phi(j, k), 1.0).add(v.xi(j, 1), b.beta1);
      entered(s1u, 1.0);
      rows.add("41b", ix, std::move(s1u), Sense::LessEqual, kB1 + 1.0);

      LinearExpr s1l;
      s1l.add(v.phi(j, k), 1.0).add(v.xi(j, 1), b.beta1).add(v.z(j, 1), -kB1);
      entered(s1l, -1.0);
      rows.add("41c", ix, std::move(s1l), Sense::GreaterEqual, -1.0);

      LinearExpr s2u;
      s2u.add(v.phi(j, k), 1.0).add(v.xi(j, 1), b.beta1).add(v.xi(j, 2), b.beta2);
      entered(s2u, 1.0);
      rows.add("41d", ix, std::move(s2u), Sense::LessEqual, kB2 + 1.0);

      LinearExpr s2l;
      s2l.add(v.phi(j, k), 1.0).add(v.xi(j, 1), b.beta1).add(v.xi(j, 2), b.beta2);
      s2l.add(v.z(j, 2), -(kB2 - kB1)).add(v.z(j, 1), -kB1);
      entered(s2l, -1.0);
      rows.add("41d", ix, std::move(s2l), Sense::GreaterEqual, -1.0);
    }
  }

  for (NodeId j : g.stations()) {
    LinearExpr e2;
    e2.add(v.xi(j, 2), b.beta2).add(v.z(j, 1), -(kB2 - kB1));
    LinearExpr e3;
    e3.add(v.xi(j, 3), b.beta3).add(v.z(j, 2), -(1.0 - kB2));
    for (std::size_t k = 0; k < K; ++k) {
      add_inflow(e2, ctx, k, g.deliveries(), j, 1.0);
      add_inflow(e3, ctx, k, g.deliveries(), j, 1.0);
    }
    rows.add("41e", idx({{"j", j}}), std::move(e2), Sense::LessEqual, 1.0);
    rows.add("41f", idx({{"j", j}}), std::move(e3), Sense::LessEqual, 1.0);
  }

  for (NodeId i : g.stations()) {
    LinearExpr e;
    e.add(v.z(i, 2), 1.0).add(v.z(i, 1), -1.0);
    rows.add("42", idx({{"i", i}}), std::move(e), Sense::LessEqual, 0.0);
  }
  return out;
}

std::vector<Constraint> build_hubs(const BuildContext& ctx) {
  std::vector<Constraint> out;
  RowSink rows(out);
  const auto& g = ctx.graph;
  for (std::size_t k = 0; k < g.num_agents(); ++k) {
    const auto& hub = ctx.instance.agents[k].terminal_hub;
    if (!hub) continue;
    const NodeId h = g.depot_node(*hub);
    LinearExpr e;
    for (NodeId i : g.predecessors(h)) e.add_if(ctx.vars.x(k, i, h), 1.0);
    rows.add("hub", idx({{"k", k}}), std::move(e), Sense::Equal, 1.0);
  }
  return out;
}

}  // namespace emdarp
