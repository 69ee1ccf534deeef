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


#include "emdarp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emdarp/charging.hpp"
#include "emdarp/lp.hpp"

namespace emdarp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSocTol = 1e-12;

ScheduleResult reject(std::string why) {
  ScheduleResult r;
  r.reason = std::move(why);
  return r;
}

double energy_cost(const Instance& in, const ExpandedGraph& g, NodeId i, NodeId j) {
  if (in.variant.open_vrp && !in.variant.open_vrp_soc_to_hub && g.kind(j) == NodeKind::Depot) {
    return 0.0;
  }
  return g.cost(i, j);
}

double duration_cost(const Instance& in, const ExpandedGraph& g, NodeId i, NodeId j) {
  if (in.variant.open_vrp && g.kind(j) == NodeKind::Depot) return 0.0;
  return g.cost(i, j);
}

// SoC lost on arc (i, j) leaving i with the given loads.
double arc_drop(const BatteryModel& b, double c, int u1, int u2) {
  return b.alpha0 * c + b.alpha1 * c * u1 + b.alpha2 * c * u2;
}

struct StationVar {
  std::size_t agent;
  std::size_t pos;
  NodeId node;
  std::size_t phi, leave, xi;
};

class LpBuilder {
 public:
  std::size_t var(double cost = 0.0) {
    lp_.cost.push_back(cost);
    lp_.upper.push_back(kInf);
    return lp_.num_vars++;
  }
  void cost(std::size_t v, double c) { lp_.cost[v] += c; }
  void upper(std::size_t v, double u) { lp_.upper[v] = std::min(lp_.upper[v], u); }
  void row(std::vector<std::pair<std::size_t, double>> coefs, char sense, double rhs) {
    lp_.rows.push_back({std::move(coefs), sense, rhs});
  }
  const LpProblem& problem() const { return lp_; }

 private:
  LpProblem lp_;
};

}  // namespace

std::optional<std::vector<std::pair<int, int>>> route_loads(const Instance& in,
                                                            const ExpandedGraph& g,
                                                            std::size_t agent,
                                                            const std::vector<NodeId>& visits) {
  const Agent& a = in.agents[agent];
  std::vector<std::pair<int, int>> out;
  out.reserve(visits.size());
  int u1 = 0;
  int u2 = 0;
  for (NodeId n : visits) {
    const NodeKind kind = g.kind(n);
    if (kind == NodeKind::Station) {
      if (u1 != 0 || u2 != 0) return std::nullopt;
    } else if (g.is_location(n)) {
      const Request& r = in.requests[g.request_of(n)];
      const int sign = g.load_sign(n);
      u1 += sign * r.passengers;
      u2 += sign * r.equipment;
      if (u1 < 0 || u2 < 0 || u1 > a.cap_passengers || u2 > a.cap_equipment) return std::nullopt;
      if (sign > 0 && u1 + a.conversion * u2 > a.cap_passengers + 1e-9) return std::nullopt;
    }
    out.emplace_back(u1, u2);
  }
  if (u1 != 0 || u2 != 0) return std::nullopt;
  return out;
}

NodeId pick_hub(const Instance& in, const ExpandedGraph& g, std::size_t agent, NodeId last) {
  if (in.agents[agent].terminal_hub) return g.depot_node(*in.agents[agent].terminal_hub);
  NodeId best = g.depots().first;
  for (NodeId h : g.depots()) {
    if (g.cost(last, h) < g.cost(last, best)) best = h;
  }
  return best;
}

ScheduleResult schedule_routes(const Instance& in, const ExpandedGraph& g, const RouteSet& routes,
                               std::span<const NodeId> hub_choice) {
  const std::size_t K = g.num_agents();
  const std::size_t R = g.num_requests();
  const BatteryModel& bat = in.battery;
  if (routes.size() != K) return reject("route count differs from agent count");
  if (!hub_choice.empty() && hub_choice.size() != K) return reject("hub count differs");

  // Structure: admissible arcs, each node at most once, pickup before
  // delivery on the same agent, duplicates used as a prefix.
  std::vector<int> owner(g.num_nodes(), -1);
  std::vector<std::size_t> position(g.num_nodes(), 0);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& route = routes[k];
    if (route.empty()) {
      if (in.agents[k].terminal_hub) return reject("agent with a terminal hub must leave");
      continue;
    }
    NodeId prev = g.start_node(k);
    for (std::size_t p = 0; p < route.size(); ++p) {
      const NodeId n = route[p];
      if (n >= g.num_nodes() || !g.admissible(prev, n)) return reject("inadmissible arc");
      if (owner[n] != -1) return reject("node visited twice");
      owner[n] = static_cast<int>(k);
      position[n] = p;
      prev = n;
    }
    const NodeKind last = g.kind(prev);
    if (last != NodeKind::Delivery && last != NodeKind::Station) {
      return reject("route must end at a delivery or station");
    }
  }
  std::vector<bool> accepted(R, false);
  for (std::size_t r = 0; r < R; ++r) {
    const NodeId p = g.pickup_node(r);
    const NodeId d = g.delivery_node(r);
    if ((owner[p] == -1) != (owner[d] == -1)) return reject("pickup and delivery split");
    if (owner[p] == -1) continue;
    if (owner[p] != owner[d] || position[p] > position[d]) return reject("delivery before pickup");
    accepted[r] = true;
  }
  for (NodeId f : g.stations()) {
    const StationVisit sv = g.station_of(f);
    if (sv.visit > 0 && owner[f] != -1 && owner[g.station_node(sv.station, sv.visit - 1)] == -1) {
      return reject("station duplicate used out of order");
    }
  }

  std::vector<std::vector<std::pair<int, int>>> loads(K);
  for (std::size_t k = 0; k < K; ++k) {
    auto l = route_loads(in, g, k, routes[k]);
    if (!l) return reject("capacity");
    loads[k] = std::move(*l);
  }

  LpBuilder lp;
  const auto& w = in.weights;
  std::vector<std::vector<std::size_t>> tvar(K);
  for (std::size_t k = 0; k < K; ++k) {
    for (NodeId n : routes[k]) {
      double c = 0.0;
      if (g.is_location(n)) {
        const std::size_t r = g.request_of(n);
        c = in.requests[r].priority * w.epsilon;
      }
      tvar[k].push_back(lp.var(c));
    }
  }
  auto t_of = [&](NodeId n) { return tvar[owner[n]][position[n]]; };

  std::vector<std::size_t> tau_var(R, 0);
  for (std::size_t r = 0; r < R; ++r) {
    if (!accepted[r]) continue;
    const Request& req = in.requests[r];
    tau_var[r] = lp.var(req.priority * w.zeta);
    const NodeId n = req.tw_kind == TimeWindowKind::Pickup ? g.pickup_node(r) : g.delivery_node(r);
    lp.row({{t_of(n), 1.0}, {tau_var[r], 1.0}}, 'G', req.tw_lo);
    lp.row({{t_of(n), 1.0}, {tau_var[r], -1.0}}, 'L', req.tw_hi);
    lp.row({{t_of(g.delivery_node(r)), 1.0}, {t_of(g.pickup_node(r)), -1.0}}, 'G',
           req.service_time);
  }

  const std::size_t mission = lp.var(1.0);
  std::vector<StationVar> stations;
  std::vector<std::size_t> station_index(g.num_nodes(), 0);
  std::vector<NodeId> hubs(K, 0);

  const double inv_b1 = 1.0 / bat.beta1;
  for (std::size_t k = 0; k < K; ++k) {
    const auto& route = routes[k];
    if (route.empty()) continue;
    const Agent& ag = in.agents[k];

    // Timing chain.
    NodeId prev = g.start_node(k);
    lp.row({{tvar[k][0], 1.0}}, 'G', ag.initial_delay + g.cost(prev, route[0]));
    for (std::size_t p = 0; p < route.size(); ++p) {
      const NodeId n = route[p];
      if (g.kind(n) == NodeKind::Station) {
        StationVar sv{k, p, n, lp.var(), lp.var(), lp.var()};
        station_index[n] = stations.size();
        stations.push_back(sv);
        const StationVisit where = g.station_of(n);
        const double omega = in.stations[where.station].earliest_available;
        if (where.visit == 0 && omega > 0.0) lp.row({{tvar[k][p], 1.0}}, 'G', omega);
      }
      if (p > 0) {
        const NodeId a = route[p - 1];
        const double c = g.cost(a, n);
        if (g.kind(a) == NodeKind::Station) {
          lp.row({{tvar[k][p], 1.0}, {tvar[k][p - 1], -1.0}, {stations[station_index[a]].xi, -1.0}},
                 'G', ag.station_service_time + c);
        } else {
          lp.row({{tvar[k][p], 1.0}, {tvar[k][p - 1], -1.0}}, 'G',
                 in.requests[g.request_of(a)].service_time + c);
        }
      }
    }

    const NodeId last = route.back();
    const NodeId hub = hub_choice.empty() ? pick_hub(in, g, k, last) : hub_choice[k];
    if (!g.admissible(last, hub)) return reject("inadmissible arc");
    if (in.agents[k].terminal_hub && hub != g.depot_node(*in.agents[k].terminal_hub)) {
      return reject("agent must end at its terminal hub");
    }
    hubs[k] = hub;
    const std::size_t tk = lp.var();
    const double tail = duration_cost(in, g, last, hub);
    if (g.kind(last) == NodeKind::Station) {
      lp.row({{tk, 1.0}, {tvar[k].back(), -1.0}, {stations[station_index[last]].xi, -1.0}}, 'G',
             ag.station_service_time + tail);
    } else {
      lp.row({{tk, 1.0}, {tvar[k].back(), -1.0}}, 'G',
             in.requests[g.request_of(last)].service_time + tail);
    }
    lp.row({{tk, 1.0}}, 'L', ag.max_duration);
    lp.row({{mission, 1.0}, {tk, -1.0}}, 'G', 0.0);

    // Energy: the level after the last charge is either the constant initial
    // SoC or a leave-level variable, minus the accumulated drop.
    std::optional<std::size_t> base;
    double drop = 0.0;
    prev = g.start_node(k);
    int u1 = 0;
    int u2 = 0;
    auto below_floor = [&](double need) {
      // Chain level must stay >= need.
      if (!base) return ag.soc_init - drop < need - kSocTol;
      lp.row({{*base, 1.0}}, 'G', need + drop);
      return false;
    };
    for (std::size_t p = 0; p < route.size(); ++p) {
      const NodeId n = route[p];
      drop += arc_drop(bat, g.cost(prev, n), u1, u2);
      if (g.kind(n) == NodeKind::Station) {
        const StationVar& sv = stations[station_index[n]];
        if (base) {
          lp.row({{sv.phi, 1.0}, {*base, -1.0}}, 'L', -drop);
        } else {
          if (ag.soc_init - drop < ag.soc_min - kSocTol) return reject("battery depleted");
          lp.upper(sv.phi, ag.soc_init - drop);
        }
        lp.upper(sv.phi, BatteryModel::kFirstBreak);
        lp.row({{sv.phi, 1.0}}, 'G', ag.soc_min);
        lp.upper(sv.leave, 1.0);
        lp.row({{sv.leave, 1.0}}, 'G', ag.soc_target);
        lp.row({{sv.leave, 1.0}, {sv.phi, -1.0}}, 'G', 0.0);
        // xi >= potential(leave) - phi / beta1, one row per curve segment.
        constexpr double b1 = BatteryModel::kFirstBreak;
        constexpr double b2 = BatteryModel::kSecondBreak;
        lp.row({{sv.xi, 1.0}, {sv.leave, -inv_b1}, {sv.phi, inv_b1}}, 'G', 0.0);
        lp.row({{sv.xi, 1.0}, {sv.leave, -1.0 / bat.beta2}, {sv.phi, inv_b1}}, 'G',
               b1 * inv_b1 - b1 / bat.beta2);
        lp.row({{sv.xi, 1.0}, {sv.leave, -1.0 / bat.beta3}, {sv.phi, inv_b1}}, 'G',
               b1 * inv_b1 + (b2 - b1) / bat.beta2 - b2 / bat.beta3);
        base = sv.leave;
        drop = 0.0;
        u1 = u2 = 0;
      } else {
        u1 = loads[k][p].first;
        u2 = loads[k][p].second;
      }
      prev = n;
    }
    drop += bat.alpha0 * energy_cost(in, g, last, hub);
    if (below_floor(ag.soc_min)) return reject("battery depleted");
  }

  // Duplicate ordering couples agents.
  for (NodeId f : g.stations()) {
    const StationVisit where = g.station_of(f);
    if (where.visit == 0 || owner[f] == -1) continue;
    const NodeId before = g.station_node(where.station, where.visit - 1);
    const StationVar& pv = stations[station_index[before]];
    lp.row({{t_of(f), 1.0}, {t_of(before), -1.0}, {pv.xi, -1.0}}, 'G',
           in.agents[pv.agent].station_service_time);
  }

  const LpResult sol = solve_lp(lp.problem());
  if (sol.status != LpStatus::Optimal) {
    return reject(sol.status == LpStatus::Infeasible ? "timing infeasible" : "lp failure");
  }

  // Assemble the plan, tightening charge times to what the curve needs.
  ScheduleResult res;
  res.feasible = true;
  RoutePlan& plan = res.plan;
  plan.routes.resize(K);
  plan.accepted = accepted;
  plan.served_by.assign(R, std::nullopt);
  for (std::size_t r = 0; r < R; ++r) {
    if (accepted[r]) plan.served_by[r] = static_cast<std::size_t>(owner[g.pickup_node(r)]);
  }

  std::vector<double> t_final(g.num_nodes(), 0.0);
  std::vector<double> xi_total(g.num_nodes(), 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const Agent& ag = in.agents[k];
    AgentRoute& ar = plan.routes[k];
    Stop start;
    start.node = g.start_node(k);
    start.t = ag.initial_delay;
    start.soc = ag.soc_init;
    ar.stops.push_back(start);
    if (routes[k].empty()) continue;

    double level = ag.soc_init;
    NodeId prev = g.start_node(k);
    int u1 = 0;
    int u2 = 0;
    for (std::size_t p = 0; p < routes[k].size(); ++p) {
      const NodeId n = routes[k][p];
      level -= arc_drop(bat, g.cost(prev, n), u1, u2);
      Stop s;
      s.node = n;
      s.t = std::max(0.0, sol.x[tvar[k][p]]);
      if (g.kind(n) == NodeKind::Station) {
        const StationVar& sv = stations[station_index[n]];
        s.soc = std::min(level, BatteryModel::kFirstBreak);
        const double leave = std::max(std::min(sol.x[sv.leave], 1.0), s.soc);
        const ChargeResult ch = charge_between(s.soc, leave, bat);
        s.xi = ch.xi;
        s.z = ch.z;
        xi_total[n] = s.charge_time();
        level = ch.final_soc;
        u1 = u2 = 0;
      } else {
        s.soc = level;
        u1 = loads[k][p].first;
        u2 = loads[k][p].second;
        s.u1 = u1;
        s.u2 = u2;
      }
      t_final[n] = s.t;
      ar.stops.push_back(s);
      prev = n;
    }
    ar.hub = hubs[k];
    ar.hub_soc = level - bat.alpha0 * energy_cost(in, g, prev, hubs[k]);
    const Stop& last = ar.stops.back();
    const double tail = duration_cost(in, g, prev, hubs[k]);
    ar.duration = g.kind(prev) == NodeKind::Station
                      ? last.t + ag.station_service_time + last.charge_time() + tail
                      : last.t + in.requests[g.request_of(prev)].service_time + tail;
    plan.mission = std::max(plan.mission, ar.duration);
  }

  for (std::size_t r = 0; r < R; ++r) {
    if (!accepted[r]) continue;
    const Request& req = in.requests[r];
    const NodeId n = req.tw_kind == TimeWindowKind::Pickup ? g.pickup_node(r) : g.delivery_node(r);
    const double t = t_final[n];
    const double tau = std::max({0.0, req.tw_lo - t, t - req.tw_hi});
    for (Stop& s : plan.routes[owner[n]].stops) {
      if (s.node == n) s.tau = tau;
    }
  }

  plan.objective = plan_objective(in, g, plan);
  plan.status = PlanStatus::Feasible;
  res.objective = plan.objective;
  return res;
}

}  // namespace emdarp
