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

// Instance document reader/writer. Field names are frozen; any key not listed
// here is rejected so typos never silently fall back to defaults.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "emdarp/errors.hpp"
#include "emdarp/instance.hpp"
#include "json.hpp"

namespace emdarp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

void only_keys(const json& obj, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) parse_fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string child(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

const json& need(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(child(path, key), "missing required key");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) parse_fail(path, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) parse_fail(path, "expected an integer");
  return v.get<int>();
}

std::size_t as_index(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    parse_fail(path, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) parse_fail(path, "expected true or false");
  return v.get<bool>();
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, child(path, key));
}

bool bool_or(const json& obj, const std::string& path, const char* key, bool fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_bool(*it, child(path, key));
}

Location as_location(const json& v, const std::string& path) {
  if (v.is_array()) {
    if (v.size() != 2) parse_fail(path, "coordinates must be [x, y]");
    return Point{as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
  }
  if (v.is_number_integer()) return as_index(v, path);
  parse_fail(path, "expected [x, y] or an integer location key");
}

json location_json(const Location& loc) {
  if (const auto* p = std::get_if<Point>(&loc)) return json::array({p->x, p->y});
  return std::get<std::size_t>(loc);
}

TimeUnit parse_unit(const json& v, const std::string& path) {
  if (!v.is_string()) parse_fail(path, "expected a string");
  const auto s = v.get<std::string>();
  if (s == "seconds") return TimeUnit::Seconds;
  if (s == "minutes") return TimeUnit::Minutes;
  if (s == "hours") return TimeUnit::Hours;
  parse_fail(path, "time unit must be seconds, minutes, or hours");
}

const char* unit_name(TimeUnit u) {
  switch (u) {
    case TimeUnit::Seconds:
      return "seconds";
    case TimeUnit::Minutes:
      return "minutes";
    case TimeUnit::Hours:
      return "hours";
  }
  return "minutes";
}

const json& need_array(const json& doc, const char* key) {
  const json& v = need(doc, "", key);
  if (!v.is_array()) parse_fail(key, "expected a list");
  return v;
}

Request parse_request(const json& v, const std::string& path) {
  only_keys(v, path,
            {"id", "pickup", "delivery", "passengers", "equipment", "service_time", "tw_kind",
             "tw_lo", "tw_hi", "priority", "force_accept"});
  Request r;
  r.id = as_index(need(v, path, "id"), child(path, "id"));
  r.pickup = as_location(need(v, path, "pickup"), child(path, "pickup"));
  r.delivery = as_location(need(v, path, "delivery"), child(path, "delivery"));
  r.passengers = as_int(need(v, path, "passengers"), child(path, "passengers"));
  if (auto it = v.find("equipment"); it != v.end()) {
    r.equipment = as_int(*it, child(path, "equipment"));
  }
  r.service_time = number_or(v, path, "service_time", 0.0);
  const json& kind = need(v, path, "tw_kind");
  if (kind == "pickup") {
    r.tw_kind = TimeWindowKind::Pickup;
  } else if (kind == "delivery") {
    r.tw_kind = TimeWindowKind::Delivery;
  } else {
    parse_fail(child(path, "tw_kind"), "must be \"pickup\" or \"delivery\"");
  }
  r.tw_lo = as_number(need(v, path, "tw_lo"), child(path, "tw_lo"));
  r.tw_hi = as_number(need(v, path, "tw_hi"), child(path, "tw_hi"));
  r.priority = number_or(v, path, "priority", 1.0);
  r.force_accept = bool_or(v, path, "force_accept", false);
  return r;
}

Agent parse_agent(const json& v, const std::string& path) {
  only_keys(v, path,
            {"id", "start", "initial_delay", "cap_passengers", "cap_equipment", "conversion",
             "max_duration", "station_service_time", "soc_min", "soc_init", "soc_target",
             "terminal_hub"});
  Agent a;
  a.id = as_index(need(v, path, "id"), child(path, "id"));
  a.start = as_location(need(v, path, "start"), child(path, "start"));
  a.initial_delay = number_or(v, path, "initial_delay", 0.0);
  a.cap_passengers = as_int(need(v, path, "cap_passengers"), child(path, "cap_passengers"));
  a.cap_equipment = as_int(need(v, path, "cap_equipment"), child(path, "cap_equipment"));
  a.conversion = number_or(v, path, "conversion", 1.0);
  a.max_duration = as_number(need(v, path, "max_duration"), child(path, "max_duration"));
  a.station_service_time = number_or(v, path, "station_service_time", 0.0);
  a.soc_min = as_number(need(v, path, "soc_min"), child(path, "soc_min"));
  a.soc_init = as_number(need(v, path, "soc_init"), child(path, "soc_init"));
  a.soc_target = as_number(need(v, path, "soc_target"), child(path, "soc_target"));
  if (auto it = v.find("terminal_hub"); it != v.end() && !it->is_null()) {
    a.terminal_hub = as_index(*it, child(path, "terminal_hub"));
  }
  return a;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
  only_keys(doc, "",
            {"meta", "requests", "agents", "stations", "depots", "costs", "battery", "config"});

  Instance in;
  if (auto it = doc.find("meta"); it != doc.end()) {
    only_keys(*it, "meta", {"name", "time_unit"});
    if (auto n = it->find("name"); n != it->end()) {
      if (!n->is_string()) parse_fail("meta.name", "expected a string");
      in.name = n->get<std::string>();
    }
    if (auto u = it->find("time_unit"); u != it->end()) in.time_unit = parse_unit(*u, "meta.time_unit");
  }

  const json& reqs = need_array(doc, "requests");
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    in.requests.push_back(parse_request(reqs[i], "requests[" + std::to_string(i) + "]"));
  }
  const json& agents = need_array(doc, "agents");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    in.agents.push_back(parse_agent(agents[i], "agents[" + std::to_string(i) + "]"));
  }
  if (doc.contains("stations")) {
    const json& st = need_array(doc, "stations");
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string path = "stations[" + std::to_string(i) + "]";
      only_keys(st[i], path, {"id", "pos", "earliest_available"});
      Station s;
      s.id = as_index(need(st[i], path, "id"), child(path, "id"));
      s.pos = as_location(need(st[i], path, "pos"), child(path, "pos"));
      s.earliest_available = number_or(st[i], path, "earliest_available", 0.0);
      in.stations.push_back(s);
    }
  }
  if (doc.contains("depots")) {
    const json& dp = need_array(doc, "depots");
    for (std::size_t i = 0; i < dp.size(); ++i) {
      const std::string path = "depots[" + std::to_string(i) + "]";
      only_keys(dp[i], path, {"id", "pos"});
      Depot d;
      d.id = as_index(need(dp[i], path, "id"), child(path, "id"));
      d.pos = as_location(need(dp[i], path, "pos"), child(path, "pos"));
      in.depots.push_back(d);
    }
  }

  const json& costs = need(doc, "", "costs");
  only_keys(costs, "costs", {"mode", "matrix"});
  const json& mode = need(costs, "costs", "mode");
  if (mode == "euclidean") {
    in.costs.mode = CostSpec::Mode::Euclidean;
    if (costs.contains("matrix")) parse_fail("costs.matrix", "only allowed in matrix mode");
  } else if (mode == "matrix") {
    in.costs.mode = CostSpec::Mode::Matrix;
    const json& mat = need(costs, "costs", "matrix");
    if (!mat.is_array()) parse_fail("costs.matrix", "expected a list of rows");
    for (std::size_t i = 0; i < mat.size(); ++i) {
      const std::string path = "costs.matrix[" + std::to_string(i) + "]";
      if (!mat[i].is_array()) parse_fail(path, "expected a row list");
      std::vector<double> row;
      for (std::size_t j = 0; j < mat[i].size(); ++j) {
        row.push_back(as_number(mat[i][j], path + "[" + std::to_string(j) + "]"));
      }
      in.costs.matrix.push_back(std::move(row));
    }
  } else {
    parse_fail("costs.mode", "must be \"euclidean\" or \"matrix\"");
  }

  const json& bat = need(doc, "", "battery");
  only_keys(bat, "battery", {"alpha0", "alpha1", "alpha2", "beta1", "beta2", "beta3"});
  in.battery.alpha0 = as_number(need(bat, "battery", "alpha0"), "battery.alpha0");
  in.battery.alpha1 = as_number(need(bat, "battery", "alpha1"), "battery.alpha1");
  in.battery.alpha2 = as_number(need(bat, "battery", "alpha2"), "battery.alpha2");
  in.battery.beta1 = as_number(need(bat, "battery", "beta1"), "battery.beta1");
  in.battery.beta2 = as_number(need(bat, "battery", "beta2"), "battery.beta2");
  in.battery.beta3 = as_number(need(bat, "battery", "beta3"), "battery.beta3");

  if (auto it = doc.find("config"); it != doc.end()) {
    const json& cfg = *it;
    only_keys(cfg, "config",
              {"duplicate_visits", "selective", "open_vrp", "open_vrp_soc_to_hub",
               "integer_loads", "weights"});
    if (auto d = cfg.find("duplicate_visits"); d != cfg.end()) {
      in.duplicate_visits = as_int(*d, "config.duplicate_visits");
    }
    in.variant.selective = bool_or(cfg, "config", "selective", true);
    in.variant.open_vrp = bool_or(cfg, "config", "open_vrp", false);
    in.variant.open_vrp_soc_to_hub = bool_or(cfg, "config", "open_vrp_soc_to_hub", true);
    in.variant.integer_loads = bool_or(cfg, "config", "integer_loads", true);
    if (auto w = cfg.find("weights"); w != cfg.end()) {
      only_keys(*w, "config.weights", {"epsilon", "zeta", "eta", "big_m"});
      in.weights.epsilon = number_or(*w, "config.weights", "epsilon", in.weights.epsilon);
      in.weights.zeta = number_or(*w, "config.weights", "zeta", in.weights.zeta);
      in.weights.eta = number_or(*w, "config.weights", "eta", in.weights.eta);
      if (auto m = w->find("big_m"); m != w->end() && !m->is_null()) {
        in.weights.big_m_override = as_number(*m, "config.weights.big_m");
      }
    }
  }

  validate_instance(in);
  return in;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open instance file " + path.string());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_instance(buffer.str());
}

std::string dump_instance(const Instance& in) {
  ordered_json doc;
  doc["meta"] = {{"name", in.name}, {"time_unit", unit_name(in.time_unit)}};

  doc["requests"] = ordered_json::array();
  for (const Request& r : in.requests) {
    ordered_json j;
    j["id"] = r.id;
    j["pickup"] = location_json(r.pickup);
    j["delivery"] = location_json(r.delivery);
    j["passengers"] = r.passengers;
    j["equipment"] = r.equipment;
    j["service_time"] = r.service_time;
    j["tw_kind"] = r.tw_kind == TimeWindowKind::Pickup ? "pickup" : "delivery";
    j["tw_lo"] = r.tw_lo;
    j["tw_hi"] = r.tw_hi;
    j["priority"] = r.priority;
    j["force_accept"] = r.force_accept;
    doc["requests"].push_back(std::move(j));
  }

  doc["agents"] = ordered_json::array();
  for (const Agent& a : in.agents) {
    ordered_json j;
    j["id"] = a.id;
    j["start"] = location_json(a.start);
    j["initial_delay"] = a.initial_delay;
    j["cap_passengers"] = a.cap_passengers;
    j["cap_equipment"] = a.cap_equipment;
    j["conversion"] = a.conversion;
    j["max_duration"] = a.max_duration;
    j["station_service_time"] = a.station_service_time;
    j["soc_min"] = a.soc_min;
    j["soc_init"] = a.soc_init;
    j["soc_target"] = a.soc_target;
    if (a.terminal_hub) j["terminal_hub"] = *a.terminal_hub;
    doc["agents"].push_back(std::move(j));
  }

  doc["stations"] = ordered_json::array();
  for (const Station& s : in.stations) {
    doc["stations"].push_back(
        {{"id", s.id}, {"pos", location_json(s.pos)}, {"earliest_available", s.earliest_available}});
  }
  doc["depots"] = ordered_json::array();
  for (const Depot& d : in.depots) {
    doc["depots"].push_back({{"id", d.id}, {"pos", location_json(d.pos)}});
  }

  if (in.costs.mode == CostSpec::Mode::Euclidean) {
    doc["costs"] = {{"mode", "euclidean"}};
  } else {
    doc["costs"] = {{"mode", "matrix"}, {"matrix", in.costs.matrix}};
  }

  const BatteryModel& b = in.battery;
  doc["battery"] = {{"alpha0", b.alpha0}, {"alpha1", b.alpha1}, {"alpha2", b.alpha2},
                    {"beta1", b.beta1},   {"beta2", b.beta2},   {"beta3", b.beta3}};

  ordered_json weights = {{"epsilon", in.weights.epsilon},
                          {"zeta", in.weights.zeta},
                          {"eta", in.weights.eta}};
  if (in.weights.big_m_override) weights["big_m"] = *in.weights.big_m_override;
  doc["config"] = {{"duplicate_visits", in.duplicate_visits},
                   {"selective", in.variant.selective},
                   {"open_vrp", in.variant.open_vrp},
                   {"open_vrp_soc_to_hub", in.variant.open_vrp_soc_to_hub},
                   {"integer_loads", in.variant.integer_loads},
                   {"weights", weights}};
  return doc.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write instance file " + path.string());
  file << dump_instance(instance);
  if (!file) throw IoError("write failed for " + path.string());
}

}  // namespace emdarp
