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


#include <fstream>
#include <sstream>

#include "emdarp/errors.hpp"
#include "emdarp/plan.hpp"
#include "json.hpp"

namespace emdarp {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Optimal:
      return "optimal";
    case PlanStatus::Feasible:
      return "feasible";
    case PlanStatus::Infeasible:
      return "infeasible";
    case PlanStatus::Unknown:
      break;
  }
  return "unknown";
}

PlanStatus plan_status_from(std::string_view s) {
  if (s == "optimal") return PlanStatus::Optimal;
  if (s == "feasible") return PlanStatus::Feasible;
  if (s == "infeasible") return PlanStatus::Infeasible;
  if (s == "unknown") return PlanStatus::Unknown;
  throw ParseError("status: unknown plan status '" + std::string(s) + "'");
}

std::vector<NodeId> RoutePlan::sequence(std::size_t agent, bool open_vrp) const {
  std::vector<NodeId> seq;
  const AgentRoute& r = routes[agent];
  for (const Stop& s : r.stops) seq.push_back(s.node);
  if (!open_vrp && r.hub && !r.idle()) seq.push_back(*r.hub);
  return seq;
}

std::string format_route(const ExpandedGraph& g, const RoutePlan& plan, std::size_t agent,
                         bool open_vrp) {
  std::string s = "[";
  bool first = true;
  for (NodeId n : plan.sequence(agent, open_vrp)) {
    if (!first) s += ", ";
    s += g.label(n);
    first = false;
  }
  return s + "]";
}

double plan_objective(const Instance& in, const ExpandedGraph& g, const RoutePlan& plan) {
  std::vector<const Stop*> at(g.num_nodes(), nullptr);
  for (const AgentRoute& r : plan.routes) {
    for (const Stop& s : r.stops) at[s.node] = &s;
  }
  const auto& w = in.weights;
  double obj = plan.mission;
  for (std::size_t r = 0; r < in.num_requests(); ++r) {
    const double lambda = in.requests[r].priority;
    const Stop* p = at[g.pickup_node(r)];
    const Stop* d = at[g.delivery_node(r)];
    if (r < plan.accepted.size() && plan.accepted[r] && p && d) {
      obj += lambda * (w.epsilon * (p->t + d->t) + w.zeta * (p->tau + d->tau));
    } else {
      obj += lambda * w.eta;
    }
  }
  return obj;
}

std::string dump_plan(const ExpandedGraph& g, const RoutePlan& plan) {
  ordered_json doc;
  doc["status"] = to_string(plan.status);
  doc["objective"] = plan.objective;
  doc["mission_duration"] = plan.mission;
  ordered_json reqs = ordered_json::array();
  for (std::size_t r = 0; r < plan.accepted.size(); ++r) {
    ordered_json e;
    e["id"] = r;
    e["accepted"] = static_cast<bool>(plan.accepted[r]);
    e["agent"] = plan.served_by[r] ? ordered_json(*plan.served_by[r]) : ordered_json(nullptr);
    reqs.push_back(e);
  }
  doc["requests"] = reqs;
  ordered_json agents = ordered_json::array();
  for (std::size_t k = 0; k < plan.routes.size(); ++k) {
    const AgentRoute& r = plan.routes[k];
    ordered_json a;
    a["id"] = k;
    a["duration"] = r.duration;
    a["hub"] = r.hub ? ordered_json(*r.hub) : ordered_json(nullptr);
    a["hub_soc"] = r.hub_soc;
    ordered_json stops = ordered_json::array();
    for (const Stop& s : r.stops) {
      ordered_json e;
      e["node"] = s.node;
      e["label"] = g.label(s.node);
      e["t"] = s.t;
      e["tau"] = s.tau;
      e["u1"] = s.u1;
      e["u2"] = s.u2;
      e["soc"] = s.soc;
      e["xi"] = s.xi;
      e["z"] = s.z;
      stops.push_back(e);
    }
    a["stops"] = stops;
    agents.push_back(a);
  }
  doc["agents"] = agents;
  return doc.dump(2) + "\n";
}

namespace {

double num(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw ParseError(path + "." + key + ": expected a number");
  }
  return it->get<double>();
}

NodeId node_id(const json& v, const std::string& path, const ExpandedGraph& g) {
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ParseError(path + ": expected a node id");
  }
  const auto n = v.get<long long>();
  if (n < 0 || static_cast<std::size_t>(n) >= g.num_nodes()) {
    throw ParseError(path + ": node id out of range");
  }
  return static_cast<NodeId>(n);
}

}  // namespace

RoutePlan parse_plan(std::string_view text, const ExpandedGraph& g) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed plan: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("plan: expected an object");
  RoutePlan plan;
  try {
    plan.status = plan_status_from(doc.value("status", std::string("unknown")));
    plan.objective = num(doc, "objective", "plan");
    plan.mission = num(doc, "mission_duration", "plan");
    const json& reqs = doc.at("requests");
    if (reqs.size() != g.num_requests()) throw ParseError("requests: count differs from instance");
    plan.accepted.assign(reqs.size(), false);
    plan.served_by.assign(reqs.size(), std::nullopt);
    for (std::size_t r = 0; r < reqs.size(); ++r) {
      plan.accepted[r] = reqs[r].at("accepted").get<bool>();
      const json& a = reqs[r].at("agent");
      if (!a.is_null()) plan.served_by[r] = a.get<std::size_t>();
    }
    const json& agents = doc.at("agents");
    if (agents.size() != g.num_agents()) throw ParseError("agents: count differs from instance");
    for (std::size_t k = 0; k < agents.size(); ++k) {
      const std::string path = "agents[" + std::to_string(k) + "]";
      const json& a = agents[k];
      AgentRoute r;
      r.duration = num(a, "duration", path);
      r.hub_soc = num(a, "hub_soc", path);
      if (!a.at("hub").is_null()) r.hub = node_id(a.at("hub"), path + ".hub", g);
      const json& stops = a.at("stops");
      for (std::size_t i = 0; i < stops.size(); ++i) {
        const std::string sp = path + ".stops[" + std::to_string(i) + "]";
        const json& e = stops[i];
        Stop s;
        s.node = node_id(e.at("node"), sp + ".node", g);
        s.t = num(e, "t", sp);
        s.tau = num(e, "tau", sp);
        s.u1 = num(e, "u1", sp);
        s.u2 = num(e, "u2", sp);
        s.soc = num(e, "soc", sp);
        s.xi = e.at("xi").get<std::array<double, 3>>();
        s.z = e.at("z").get<std::array<int, 2>>();
        r.stops.push_back(s);
      }
      plan.routes.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  return plan;
}

void save_plan(const ExpandedGraph& g, const RoutePlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << dump_plan(g, plan);
  if (!out) throw IoError("write failed: " + path.string());
}

RoutePlan load_plan(const std::filesystem::path& path, const ExpandedGraph& g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_plan(ss.str(), g);
}

}  // namespace emdarp
