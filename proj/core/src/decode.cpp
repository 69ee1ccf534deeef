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
#include <cmath>

#include "emdarp/errors.hpp"
#include "emdarp/model_io.hpp"

namespace emdarp {
namespace {

constexpr double kBinaryTol = 1e-4;

double energy_cost(const Instance& in, const ExpandedGraph& g, NodeId i, NodeId j) {
  if (in.variant.open_vrp && !in.variant.open_vrp_soc_to_hub && g.kind(j) == NodeKind::Depot) {
    return 0.0;
  }
  return g.cost(i, j);
}

}  // namespace

RoutePlan decode_solution(const MilpModel& model, std::span<const double> values,
                          const Instance& in, const ExpandedGraph& g, PlanStatus status) {
  const VariableCatalog& vars = model.vars;
  if (values.size() != vars.size()) throw DecodeError("value vector does not match the model");
  const std::size_t K = g.num_agents();
  const std::size_t R = g.num_requests();
  const std::size_t N = g.num_nodes();
  auto val = [&](VarIndex v) { return v == kNoVar ? 0.0 : values[v]; };

  for (VarIndex v = 0; v < vars.size(); ++v) {
    if (vars[v].type != VarType::Binary) continue;
    const double x = values[v];
    if (std::min(std::abs(x), std::abs(x - 1.0)) > kBinaryTol) {
      throw DecodeError(vars[v].name + " = " + std::to_string(x) + " is fractional");
    }
  }

  RoutePlan plan;
  plan.routes.resize(K);
  plan.accepted.assign(R, false);
  plan.served_by.assign(R, std::nullopt);
  std::vector<int> owner(N, -1);

  for (std::size_t k = 0; k < K; ++k) {
    const Agent& ag = in.agents[k];
    AgentRoute& route = plan.routes[k];
    std::size_t used = 0;
    for (const Arc& a : g.arcs()) used += val(vars.x(k, a.from, a.to)) > 0.5 ? 1 : 0;

    Stop start;
    start.node = g.start_node(k);
    start.t = ag.initial_delay;
    start.soc = ag.soc_init;
    route.stops.push_back(start);

    NodeId cur = g.start_node(k);
    std::size_t walked = 0;
    for (;;) {
      std::vector<NodeId> next;
      for (NodeId j : g.successors(cur)) {
        if (val(vars.x(k, cur, j)) > 0.5) next.push_back(j);
      }
      if (next.size() > 1) {
        throw DecodeError("agent " + std::to_string(k) + " branches after " + g.label(cur));
      }
      if (next.empty()) {
        if (cur == g.start_node(k)) break;
        throw DecodeError("route of agent " + std::to_string(k) + " stops at " + g.label(cur));
      }
      const NodeId n = next.front();
      ++walked;
      if (g.kind(n) == NodeKind::Depot) {
        route.hub = n;
        break;
      }
      if (owner[n] == static_cast<int>(k)) {
        throw DecodeError("route of agent " + std::to_string(k) + " cycles through " + g.label(n));
      }
      if (owner[n] >= 0) throw DecodeError(g.label(n) + " is visited by two agents");
      owner[n] = static_cast<int>(k);

      Stop s;
      s.node = n;
      s.t = val(vars.t(n));
      s.tau = val(vars.tau(n));
      s.u1 = val(vars.u1(n, k));
      s.u2 = val(vars.u2(n, k));
      s.soc = val(vars.phi(n, k));
      if (g.kind(n) == NodeKind::Station) {
        for (int seg = 1; seg <= 3; ++seg) s.xi[seg - 1] = val(vars.xi(n, seg));
        for (int seg = 1; seg <= 2; ++seg) s.z[seg - 1] = val(vars.z(n, seg)) > 0.5 ? 1 : 0;
      }
      route.stops.push_back(s);
      cur = n;
    }
    if (walked != used) {
      throw DecodeError("agent " + std::to_string(k) + " has arcs detached from its route");
    }
    if (route.hub) route.hub_soc = val(vars.phi(*route.hub, k));
    route.duration = val(vars.tk(k));
  }

  for (std::size_t r = 0; r < R; ++r) {
    const bool y = val(vars.y(r)) > 0.5;
    const int op = owner[g.pickup_node(r)];
    const int od = owner[g.delivery_node(r)];
    if (y != (op >= 0) || y != (od >= 0)) {
      throw DecodeError("acceptance of request " + std::to_string(r) + " disagrees with its routing");
    }
    plan.accepted[r] = y;
    if (y) plan.served_by[r] = static_cast<std::size_t>(op);
  }
  plan.mission = val(vars.mission());
  plan.objective = model.objective_value(values);
  plan.status = status;
  return plan;
}

RoutePlan decode_solution(const MilpModel& model, const Solution& solution, const Instance& in,
                          const ExpandedGraph& g) {
  const std::vector<double> values = solution_values(model, solution);
  return decode_solution(model, values, in, g, solution.status);
}

std::vector<double> encode_plan(const MilpModel& model, const Instance& in,
                                const ExpandedGraph& g, const RoutePlan& plan,
                                EncodeOptions options) {
  const VariableCatalog& vars = model.vars;
  const std::size_t K = g.num_agents();
  const std::size_t R = g.num_requests();
  const std::size_t N = g.num_nodes();
  if (plan.routes.size() != K || plan.accepted.size() != R) {
    throw DecodeError("plan does not match the instance dimensions");
  }
  const BatteryModel& bat = in.battery;
  std::vector<double> out(vars.size(), 0.0);
  auto set = [&](VarIndex v, double x) {
    if (v != kNoVar) out[v] = x;
  };
  auto arc = [&](std::size_t k, NodeId a, NodeId b) {
    const VarIndex v = vars.x(k, a, b);
    if (v == kNoVar) {
      throw DecodeError("model has no arc " + g.label(a) + " -> " + g.label(b) + " for agent " +
                        std::to_string(k));
    }
    out[v] = 1.0;
  };

  std::vector<const Stop*> at(N, nullptr);
  for (std::size_t k = 0; k < K; ++k) {
    const AgentRoute& route = plan.routes[k];
    if (route.stops.empty()) throw DecodeError("agent route without a start stop");
    for (std::size_t p = 1; p < route.stops.size(); ++p) {
      arc(k, route.stops[p - 1].node, route.stops[p].node);
      at[route.stops[p].node] = &route.stops[p];
    }
    if (!route.idle()) {
      if (!route.hub) throw DecodeError("agent " + std::to_string(k) + " has no final depot");
      arc(k, route.stops.back().node, *route.hub);
    }
    set(vars.tk(k), route.duration);
  }
  set(vars.mission(), plan.mission);

  // Times of every pickup, delivery and station node.
  for (std::size_t r = 0; r < R; ++r) {
    const Request& q = in.requests[r];
    const NodeId p = g.pickup_node(r);
    const NodeId d = g.delivery_node(r);
    set(vars.y(r), plan.accepted[r] ? 1.0 : 0.0);
    const double tp = at[p] ? at[p]->t : 0.0;
    const double td = at[d] ? at[d]->t : q.service_time;
    set(vars.t(p), tp);
    set(vars.t(d), td);
    const NodeId w = q.tw_kind == TimeWindowKind::Pickup ? p : d;
    const double tw = w == p ? tp : td;
    const double tau = at[w] ? at[w]->tau : std::max({0.0, q.tw_lo - tw, tw - q.tw_hi});
    set(vars.tau(w), tau);
    if (plan.accepted[r]) {
      set(vars.tr(r), tp + td);
      set(vars.dr(r), tau);
    }
  }
  for (NodeId f : g.stations()) {
    if (at[f]) {
      set(vars.t(f), at[f]->t);
      for (int seg = 1; seg <= 3; ++seg) set(vars.xi(f, seg), at[f]->xi[seg - 1]);
      for (int seg = 1; seg <= 2; ++seg) set(vars.z(f, seg), at[f]->z[seg - 1]);
    } else {
      set(vars.t(f), g.station_earliest(f));
    }
  }

  // Loads and SoC per agent. Nodes off the agent's route get SoC values
  // that keep the rows of untaken arcs slack.
  for (std::size_t k = 0; k < K; ++k) {
    const Agent& ag = in.agents[k];
    const AgentRoute& route = plan.routes[k];
    std::vector<double> phi(N, -1.0);
    const auto& stops = route.stops;
    for (std::size_t p = 1; p < stops.size(); ++p) {
      set(vars.u1(stops[p].node, k), stops[p].u1);
      set(vars.u2(stops[p].node, k), stops[p].u2);
      phi[stops[p].node] = stops[p].soc;
    }
    if (route.hub) phi[*route.hub] = route.hub_soc;

    if (options.minimal_soc && route.hub) {
      const NodeId hub = *route.hub;
      phi[hub] = std::min(route.hub_soc, ag.soc_min);
      NodeId next = hub;
      for (std::size_t p = stops.size() - 1; p >= 1; --p) {
        const Stop& s = stops[p];
        if (g.kind(s.node) != NodeKind::Station) {
          const double c = g.kind(next) == NodeKind::Depot ? energy_cost(in, g, s.node, next)
                                                           : g.cost(s.node, next);
          const double drop =
              g.kind(next) == NodeKind::Station || g.kind(next) == NodeKind::Depot
                  ? bat.alpha0 * c
                  : c * (bat.alpha0 + bat.alpha1 * s.u1 + bat.alpha2 * s.u2);
          const double need = std::max(ag.soc_min, phi[next] + drop);
          phi[s.node] = std::min(s.soc, need);
        }
        next = s.node;
      }
    }
    for (std::size_t p = 1; p < stops.size(); ++p) set(vars.phi(stops[p].node, k), phi[stops[p].node]);
    if (route.hub) set(vars.phi(*route.hub, k), phi[*route.hub]);

    for (NodeId n = 0; n < N; ++n) {
      if (g.kind(n) == NodeKind::Start || phi[n] >= 0.0) continue;
      double lo = ag.soc_min;
      for (NodeId j : g.successors(n)) {
        if (phi[j] < 0.0) continue;
        const double c = g.kind(j) == NodeKind::Depot ? energy_cost(in, g, n, j) : g.cost(n, j);
        lo = std::max(lo, phi[j] - 1.0 + bat.alpha0 * c);
      }
      set(vars.phi(n, k), std::clamp(lo, 0.0, 1.0));
    }
  }
  return out;
}

}  // namespace emdarp
