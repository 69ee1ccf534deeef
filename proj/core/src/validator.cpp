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


#include "emdarp/validator.hpp"

#include <algorithm>
#include <cmath>

#include "emdarp/errors.hpp"
#include "json.hpp"

namespace emdarp {
namespace {

std::string ix(const char* key, std::size_t v) { return std::string(key) + "=" + std::to_string(v); }

std::string ix(const char* k1, std::size_t v1, const char* k2, std::size_t v2) {
  return ix(k1, v1) + "," + ix(k2, v2);
}

class Checker {
 public:
  Checker(ValidationReport& report, double tol) : rep_(report), tol_(tol) {}

  void le(const std::string& tag, const std::string& index, double lhs, double rhs,
          const std::string& what) {
    if (lhs > rhs + tol_) push(tag, index, lhs, rhs, lhs - rhs, what);
  }
  void ge(const std::string& tag, const std::string& index, double lhs, double rhs,
          const std::string& what) {
    if (lhs < rhs - tol_) push(tag, index, lhs, rhs, rhs - lhs, what);
  }
  void fail(const std::string& tag, const std::string& index, const std::string& what) {
    push(tag, index, 1.0, 0.0, 1.0, what);
  }

 private:
  void push(const std::string& tag, const std::string& index, double lhs, double rhs, double mag,
            const std::string& what) {
    rep_.violations.push_back({tag, index, lhs, rhs, mag, what});
    ++rep_.counts[tag];
  }
  ValidationReport& rep_;
  double tol_;
};

struct Visit {
  std::size_t agent = 0;
  std::size_t pos = 0;
  const Stop* stop = nullptr;
};

}  // namespace

ValidationReport validate(const Instance& in, const ExpandedGraph& g, const RoutePlan& plan,
                          double tol) {
  const std::size_t K = g.num_agents();
  const std::size_t R = g.num_requests();
  if (plan.routes.size() != K) throw DecodeError("plan has a different number of agents");
  if (plan.accepted.size() != R || plan.served_by.size() != R) {
    throw DecodeError("plan has a different number of requests");
  }

  ValidationReport rep;
  rep.reported_objective = plan.objective;
  Checker chk(rep, tol);
  const BatteryModel& bat = in.battery;
  const bool open = in.variant.open_vrp;
  constexpr double kB1 = BatteryModel::kFirstBreak;
  constexpr double kB2 = BatteryModel::kSecondBreak;

  std::vector<std::vector<Visit>> visits(g.num_nodes());
  for (std::size_t k = 0; k < K; ++k) {
    const AgentRoute& route = plan.routes[k];
    if (route.stops.empty()) throw DecodeError("agent " + std::to_string(k) + " has no start stop");
    for (std::size_t p = 0; p < route.stops.size(); ++p) {
      const NodeId n = route.stops[p].node;
      if (n >= g.num_nodes()) throw DecodeError("node id out of range");
      visits[n].push_back({k, p, &route.stops[p]});
    }
  }
  auto visit_of = [&](NodeId n) -> const Visit* {
    return visits[n].empty() ? nullptr : &visits[n].front();
  };

  // Degree: every pickup, delivery and station node at most once.
  for (NodeId n = 0; n < g.num_nodes(); ++n) {
    if (visits[n].size() <= 1 || g.kind(n) == NodeKind::Start) continue;
    const char* tag = g.kind(n) == NodeKind::Pickup ? "7"
                      : g.kind(n) == NodeKind::Delivery ? "8"
                                                         : "10";
    chk.fail(tag, ix("i", n), g.label(n) + " visited " + std::to_string(visits[n].size()) + " times");
  }

  std::vector<double> durations(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const AgentRoute& route = plan.routes[k];
    const Agent& ag = in.agents[k];
    const auto& stops = route.stops;
    const std::string ak = ix("k", k);
    if (stops.front().node != g.start_node(k)) {
      chk.fail("11", ak, "route does not begin at the agent's start node");
      continue;
    }
    if (route.idle()) {
      if (ag.terminal_hub) chk.fail("hub", ak, "agent with a terminal hub stays idle");
      continue;
    }

    // Arcs and termination.
    for (std::size_t p = 1; p < stops.size(); ++p) {
      const NodeId a = stops[p - 1].node;
      const NodeId b = stops[p].node;
      if (!g.admissible(a, b)) {
        chk.fail(g.kind(b) == NodeKind::Pickup ? "12" : "13", ix("i", a, "j", b),
                 "arc " + g.label(a) + " -> " + g.label(b) + " is not admissible");
      }
    }
    const NodeId last = stops.back().node;
    if (!route.hub || g.kind(*route.hub) != NodeKind::Depot || !g.admissible(last, *route.hub)) {
      chk.fail("13", ak, "route does not close at a depot from a delivery or station");
      continue;
    }
    const NodeId hub = *route.hub;
    if (ag.terminal_hub && hub != g.depot_node(*ag.terminal_hub)) {
      chk.fail("hub", ak, "route ends at " + g.label(hub) + " instead of its terminal hub");
    }

    // Loads recomputed from the visit order.
    int u1 = 0;
    int u2 = 0;
    std::vector<std::pair<int, int>> loads(stops.size(), {0, 0});
    for (std::size_t p = 1; p < stops.size(); ++p) {
      const Stop& s = stops[p];
      const NodeId n = s.node;
      if (g.kind(n) == NodeKind::Station) {
        loads[p] = {u1, u2};
        continue;
      }
      const Request& q = in.requests[g.request_of(n)];
      const int sign = g.load_sign(n);
      u1 += sign * q.passengers;
      u2 += sign * q.equipment;
      loads[p] = {u1, u2};
      const std::string at = ix("i", n, "k", k);
      chk.ge("26", at, s.u1, u1, "reported passenger load below the carried load");
      chk.ge("30", at, s.u2, u2, "reported equipment load below the carried load");
      const double e1 = std::max<double>(s.u1, u1);
      const double e2 = std::max<double>(s.u2, u2);
      chk.le("28", at, e1, ag.cap_passengers, "passenger capacity exceeded");
      chk.le("32", at, e2, ag.cap_equipment, "equipment capacity exceeded");
      if (sign > 0) {
        chk.le("33", at, e1 + ag.conversion * e2, ag.cap_passengers,
               "convertible seats overbooked");
      }
      const bool leaves_to_charge_or_depot =
          p + 1 == stops.size() || g.kind(stops[p + 1].node) == NodeKind::Station;
      if (sign < 0 && leaves_to_charge_or_depot) {
        chk.le("27", at, e1, 0.0, "passengers on board when heading to a station or depot");
        chk.le("31", at, e2, 0.0, "equipment on board when heading to a station or depot");
      }
    }
    for (std::size_t p = 1; p < stops.size(); ++p) {
      if (g.kind(stops[p].node) != NodeKind::Station) continue;
      const auto [l1, l2] = loads[p];
      if (l1 != 0 || l2 != 0) {
        chk.fail(l1 != 0 ? "27" : "31", ix("i", stops[p].node, "k", k),
                 "station entered with load on board");
      }
    }

    // Timing chain.
    {
      const NodeId first = stops[1].node;
      chk.ge("14", ix("j", first), stops[1].t,
             ag.initial_delay + g.cost(g.start_node(k), first), "first pickup before the agent can reach it");
    }
    for (std::size_t p = 2; p < stops.size(); ++p) {
      const Stop& a = stops[p - 1];
      const Stop& b = stops[p];
      const double c = g.cost(a.node, b.node);
      const std::string at = ix("i", a.node, "j", b.node);
      if (g.kind(a.node) == NodeKind::Station) {
        chk.ge("19", at, b.t, a.t + ag.station_service_time + a.charge_time() + c,
               "departure before service and charging end");
      } else {
        const double s = in.requests[g.request_of(a.node)].service_time;
        chk.ge(g.kind(b.node) == NodeKind::Station ? "19" : "15", at, b.t, a.t + s + c,
               "arrival earlier than travel allows");
      }
    }
    const Stop& tail = stops.back();
    const double tail_cost = open ? 0.0 : g.cost(last, hub);
    const bool ends_at_station = g.kind(last) == NodeKind::Station;
    const double rec = ends_at_station
                           ? tail.t + ag.station_service_time + tail.charge_time() + tail_cost
                           : tail.t + in.requests[g.request_of(last)].service_time + tail_cost;
    durations[k] = rec;
    chk.ge(ends_at_station ? "23" : "22", ak, route.duration, rec, "trip duration understated");
    chk.le("21", ak, route.duration, ag.max_duration, "trip exceeds the agent's maximum duration");
    chk.ge("24", ak, plan.mission, route.duration, "mission shorter than an agent's trip");

    // Battery.
    const double e_tail = open && !in.variant.open_vrp_soc_to_hub ? 0.0 : g.cost(last, hub);
    double leave = ag.soc_init;
    for (std::size_t p = 1; p < stops.size(); ++p) {
      const Stop& a = stops[p - 1];
      const Stop& b = stops[p];
      const double c = g.cost(a.node, b.node);
      const std::string at = ix("i", b.node, "k", k);
      if (p == 1) {
        chk.le("34", at, b.soc, ag.soc_init - bat.alpha0 * c, "SoC above what the start allows");
      } else if (g.kind(a.node) == NodeKind::Station) {
        chk.le("39", at, b.soc, leave - bat.alpha0 * c, "SoC above the charged level minus travel");
      } else if (g.kind(b.node) == NodeKind::Station) {
        chk.le("36", at, b.soc, a.soc - bat.alpha0 * c, "SoC above the level minus travel");
      } else {
        const auto [l1, l2] = loads[p - 1];
        const double drop = c * (bat.alpha0 + bat.alpha1 * std::max<double>(l1, a.u1) +
                                 bat.alpha2 * std::max<double>(l2, a.u2));
        chk.le("35", at, b.soc, a.soc - drop, "SoC above the level minus loaded travel");
      }
      chk.ge("40", at, b.soc, ag.soc_min, "SoC below the operating minimum");
      chk.le("40", at, b.soc, 1.0, "SoC above full");
      if (g.kind(b.node) != NodeKind::Station) continue;

      const std::string st = ix("j", b.node, "k", k);
      const double x1 = b.xi[0], x2 = b.xi[1], x3 = b.xi[2];
      const double z1 = b.z[0], z2 = b.z[1];
      for (int l = 0; l < 3; ++l) chk.ge("41b", st, b.xi[l], 0.0, "negative charging time");
      for (int l = 0; l < 2; ++l) {
        if (b.z[l] != 0 && b.z[l] != 1) chk.fail("42", st, "segment flag is not binary");
      }
      chk.le("41a", st, b.soc, kB1, "arrival SoC above 0.85");
      chk.le("41b", st, b.soc + bat.beta1 * x1, kB1, "first segment charged past 0.85");
      chk.ge("41c", st, b.soc + bat.beta1 * x1, kB1 * z1,
             "first segment flagged complete but not filled");
      chk.le("41d", st, b.soc + bat.beta1 * x1 + bat.beta2 * x2, kB2,
             "second segment charged past 0.95");
      chk.ge("41d", st, b.soc + bat.beta1 * x1 + bat.beta2 * x2, kB2 * z2 + kB1 * (z1 - z2),
             "second segment flagged complete but not filled");
      chk.le("41e", st, bat.beta2 * x2, (kB2 - kB1) * z1,
             "second segment used before the first completed");
      chk.le("41f", st, bat.beta3 * x3, (1.0 - kB2) * z2,
             "third segment used before the second completed");
      chk.le("42", st, z2, z1, "segments completed out of order");
      leave = b.soc + bat.beta1 * x1 + bat.beta2 * x2 + bat.beta3 * x3;
      chk.ge("37", st, leave, ag.soc_target, "leaves the station below the target SoC");
      chk.le("38", st, leave, 1.0, "charged above full");
    }
    {
      const std::string at = ix("i", hub, "k", k);
      const double from = ends_at_station ? leave : tail.soc;
      chk.le(ends_at_station ? "39" : "36", at, route.hub_soc, from - bat.alpha0 * e_tail,
             "depot SoC above the level minus travel");
      chk.ge("40", at, route.hub_soc, ag.soc_min, "SoC below the operating minimum at the depot");
    }
  }

  // Stations: duplicates as a prefix, ordered in time, first visit after
  // the station frees up.
  for (NodeId f : g.stations()) {
    const Visit* v = visit_of(f);
    if (!v) continue;
    const StationVisit sv = g.station_of(f);
    if (sv.visit == 0) {
      const double omega = in.stations[sv.station].earliest_available;
      if (omega > 0.0) chk.ge("omega", ix("i", sv.station), v->stop->t, omega, "station still occupied");
      continue;
    }
    const Visit* prev = visit_of(g.station_node(sv.station, sv.visit - 1));
    const std::string at = ix("i", sv.station, "j", sv.visit);
    if (!prev) {
      chk.fail("10", at, g.label(f) + " used before its predecessor");
      continue;
    }
    chk.ge("20", at, v->stop->t,
           prev->stop->t + in.agents[prev->agent].station_service_time + prev->stop->charge_time(),
           "duplicate entered before the previous visit finished");
  }

  // Requests.
  double objective = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    const Request& q = in.requests[r];
    const std::string at = ix("r", r);
    const Visit* p = visit_of(g.pickup_node(r));
    const Visit* d = visit_of(g.delivery_node(r));
    const bool acc = plan.accepted[r];
    if (!acc && in.must_serve(r)) {
      chk.fail(in.variant.selective ? "fix-y" : "6", at, "request must be accepted");
    }
    if (acc != (p != nullptr)) chk.fail("7", at, "pickup visit disagrees with acceptance");
    if (acc != (d != nullptr)) chk.fail("8", at, "delivery visit disagrees with acceptance");
    if (!acc || !p || !d) {
      objective += q.priority * in.weights.eta;
      continue;
    }
    if (p->agent != d->agent) {
      chk.fail("9", at, "pickup and delivery served by different agents");
    } else if (p->pos > d->pos) {
      chk.fail("16", at, "delivery before pickup");
    }
    if (!plan.served_by[r] || *plan.served_by[r] != p->agent) {
      chk.fail("9", at, "serving agent misreported");
    }
    chk.ge("16", at, d->stop->t, p->stop->t + q.service_time, "delivery before pickup service ends");

    const bool pick_side = q.tw_kind == TimeWindowKind::Pickup;
    const Stop& w = pick_side ? *p->stop : *d->stop;
    const Stop& other = pick_side ? *d->stop : *p->stop;
    const char* tag = pick_side ? "17" : "18";
    chk.ge(tag, at, w.t + w.tau, q.tw_lo, "early arrival not covered by slack");
    chk.le(tag, at, w.t - w.tau, q.tw_hi, "late arrival not covered by slack");
    chk.ge(tag, at, w.tau, 0.0, "negative slack");
    chk.le(tag, at, std::abs(other.tau), 0.0, "slack on the side without a time window");
    const double tau = std::max({0.0, q.tw_lo - w.t, w.t - q.tw_hi});
    objective += q.priority * (in.weights.epsilon * (p->stop->t + d->stop->t) +
                               in.weights.zeta * tau);
  }
  objective += durations.empty() ? 0.0 : *std::max_element(durations.begin(), durations.end());

  rep.recomputed_objective = objective;
  rep.objective_delta = objective - plan.objective;
  if (std::abs(rep.objective_delta) > tol) {
    chk.fail("objective", "", "reported objective differs from the recomputed value");
    rep.violations.back().lhs = plan.objective;
    rep.violations.back().rhs = objective;
    rep.violations.back().magnitude = std::abs(rep.objective_delta);
  }
  return rep;
}

std::string dump_report(const ValidationReport& rep) {
  nlohmann::ordered_json doc;
  doc["ok"] = rep.ok();
  doc["recomputed_objective"] = rep.recomputed_objective;
  doc["reported_objective"] = rep.reported_objective;
  doc["objective_delta"] = rep.objective_delta;
  doc["summary"] = nlohmann::ordered_json::object();
  for (const auto& [tag, n] : rep.counts) doc["summary"][tag] = n;
  auto list = nlohmann::ordered_json::array();
  for (const Violation& v : rep.violations) {
    nlohmann::ordered_json e;
    e["tag"] = v.tag;
    e["index"] = v.index;
    e["lhs"] = v.lhs;
    e["rhs"] = v.rhs;
    e["magnitude"] = v.magnitude;
    e["message"] = v.message;
    list.push_back(e);
  }
  doc["violations"] = list;
  return doc.dump(2) + "\n";
}

}  // namespace emdarp
