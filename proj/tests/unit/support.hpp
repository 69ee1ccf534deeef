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

#include <string>
#include <vector>

#include "emdarp/instance.hpp"
#include "emdarp/milp.hpp"

namespace emdarp::testing {

// One agent on a line, times in seconds so a meter of distance costs one
// time unit. Request 0 goes from x=10 to x=20, the depot sits at x=30.
inline Instance line_instance() {
  Instance in;
  in.name = "line";
  in.time_unit = TimeUnit::Seconds;
  Request q;
  q.pickup = Point{10, 0};
  q.delivery = Point{20, 0};
  q.service_time = 2.0;
  q.tw_kind = TimeWindowKind::Delivery;
  q.tw_lo = 5.0;
  q.tw_hi = 40.0;
  in.requests.push_back(q);
  Agent a;
  a.start = Point{0, 0};
  a.cap_passengers = 2;
  a.cap_equipment = 1;
  a.max_duration = 1000.0;
  a.station_service_time = 1.0;
  in.agents.push_back(a);
  in.depots.push_back({0, Point{30, 0}});
  in.battery = {0.001, 0.0005, 0.0005, 0.1, 0.05, 0.02};
  in.weights = {1e-3, 1.0, 1e4, std::nullopt};
  return in;
}

// Adds request r with pickup/delivery on the x axis.
inline void add_request(Instance& in, double px, double dx, double lo = 0.0, double hi = 1000.0) {
  Request q;
  q.id = in.requests.size();
  q.pickup = Point{px, 0};
  q.delivery = Point{dx, 0};
  q.service_time = 1.0;
  q.tw_lo = lo;
  q.tw_hi = hi;
  in.requests.push_back(q);
}

inline std::vector<const Constraint*> rows_tagged(const MilpModel& m, const std::string& tag) {
  std::vector<const Constraint*> out;
  for (const Constraint& c : m.rows) {
    if (c.tag == tag) out.push_back(&c);
  }
  return out;
}

inline const Constraint* row(const MilpModel& m, const std::string& tag, const std::string& index,
                             std::size_t nth = 0) {
  for (const Constraint& c : m.rows) {
    if (c.tag == tag && c.index == index && nth-- == 0) return &c;
  }
  return nullptr;
}

inline double coef(const MilpModel& m, const Constraint& c, const std::string& var) {
  const auto v = m.vars.find(var);
  if (!v) return 0.0;
  for (const Term& t : c.expr.terms()) {
    if (t.var == *v) return t.coef;
  }
  return 0.0;
}

}  // namespace emdarp::testing
