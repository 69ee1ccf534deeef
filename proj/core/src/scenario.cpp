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


#include "emdarp/scenario.hpp"

#include <cmath>
#include <random>
#include <string>

#include "emdarp/errors.hpp"

namespace emdarp {
namespace {

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  // Uniform in [0, 1) from the top 53 bits.
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double real(RealRange r) { return r.lo + (r.hi - r.lo) * unit(); }
  double real(double lo, double hi) { return real(RealRange{lo, hi}); }
  int integer(IntRange r) {
    const auto span = static_cast<double>(r.hi - r.lo + 1);
    return r.lo + static_cast<int>(std::floor(unit() * span));
  }
  bool coin() { return (rng_() >> 63) != 0; }

 private:
  std::mt19937_64 rng_;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("gen config: " + what);
}

}  // namespace

BatteryPreset battery_preset_from(std::string_view name) {
  if (name == "typical") return BatteryPreset::Typical;
  if (name == "highdischarge") return BatteryPreset::HighDischarge;
  throw ParseError("unknown battery preset '" + std::string(name) + "'");
}

std::string_view to_string(BatteryPreset p) {
  return p == BatteryPreset::Typical ? "typical" : "highdischarge";
}

Instance generate(const GenConfig& cfg) {
  check(cfg.n_requests >= 0 && cfg.n_agents >= 1 && cfg.n_stations >= 0 &&
            cfg.duplicate_visits >= 0 && cfg.n_depots >= 0,
        "counts must be non-negative and at least one agent is needed");
  check(cfg.area > 0.0, "area must be positive");
  check(cfg.tw_width.lo > 0.0 && cfg.tw_width.hi >= cfg.tw_width.lo, "window widths must be positive");
  check(cfg.passengers.lo >= 1 && cfg.passengers.hi >= cfg.passengers.lo, "bad passenger range");
  check(cfg.equipment.lo >= 0 && cfg.equipment.hi >= cfg.equipment.lo, "bad equipment range");
  check(cfg.priority.lo >= 1.0 && cfg.priority.hi >= cfg.priority.lo, "priorities must be >= 1");
  check(cfg.service_time.lo >= 0.0 && cfg.service_time.hi >= cfg.service_time.lo,
        "bad service time range");

  Draws draw(cfg.seed);
  Instance in;
  in.name = "gen-" + std::to_string(cfg.seed);
  in.time_unit = cfg.time_unit;
  in.duplicate_visits = cfg.duplicate_visits;
  in.variant.selective = cfg.selective;
  in.variant.open_vrp = cfg.open_vrp;
  in.variant.open_vrp_soc_to_hub = cfg.open_vrp_soc_to_hub;
  in.costs.mode = CostSpec::Mode::Euclidean;

  // Travel time across the area diagonal sets every time scale below.
  const double diag = cfg.area * std::sqrt(2.0) / seconds_per(cfg.time_unit);
  auto point = [&] { return Point{draw.real(0.0, cfg.area), draw.real(0.0, cfg.area)}; };

  for (int r = 0; r < cfg.n_requests; ++r) {
    Request q;
    q.id = static_cast<std::size_t>(r);
    q.pickup = point();
    q.delivery = point();
    q.passengers = draw.integer(cfg.passengers);
    q.equipment = draw.integer(cfg.equipment);
    q.service_time = draw.real(cfg.service_time);
    q.tw_kind = draw.coin() ? TimeWindowKind::Delivery : TimeWindowKind::Pickup;
    q.tw_lo = draw.real(0.0, 1.5 * diag);
    q.tw_hi = q.tw_lo + draw.real(cfg.tw_width);
    q.priority = draw.real(cfg.priority);
    in.requests.push_back(q);
  }

  const bool high = cfg.preset == BatteryPreset::HighDischarge;
  int max_q1 = 1;
  int max_q2 = 1;
  for (const Request& q : in.requests) {
    max_q1 = std::max(max_q1, q.passengers);
    max_q2 = std::max(max_q2, q.equipment);
  }
  for (int k = 0; k < cfg.n_agents; ++k) {
    Agent a;
    a.id = static_cast<std::size_t>(k);
    a.start = point();
    a.initial_delay = draw.real(0.0, 0.1 * diag);
    a.cap_passengers = std::max(3, max_q1);
    a.cap_equipment = std::max(2, max_q2);
    a.conversion = 1.0;
    a.max_duration = 2.0 * diag * (cfg.n_requests + 2) + 60.0;
    a.station_service_time = 1.0;
    a.soc_min = 0.25;
    a.soc_init = 1.0;
    a.soc_target = high ? 0.9 : 0.85;
    in.agents.push_back(a);
  }
  for (int i = 0; i < cfg.n_stations; ++i) {
    Station s;
    s.id = static_cast<std::size_t>(i);
    s.pos = point();
    s.earliest_available = draw.real(0.0, 0.2 * diag);
    in.stations.push_back(s);
  }
  for (int h = 0; h < cfg.n_depots; ++h) {
    Depot d;
    d.id = static_cast<std::size_t>(h);
    d.pos = point();
    in.depots.push_back(d);
  }

  BatteryModel& b = in.battery;
  b.alpha0 = 1.0 / ((high ? 2.0 : 8.0) * diag);
  b.alpha1 = 0.10 * b.alpha0;
  b.alpha2 = 0.05 * b.alpha0;
  // A flat battery reaches the first break in about a third of a diagonal.
  b.beta1 = BatteryModel::kFirstBreak / (diag / 3.0);
  b.beta2 = b.beta1 / 2.0;
  b.beta3 = b.beta1 / 4.0;

  validate_instance(in);
  return in;
}

GenConfig selective_closed_scenario(std::uint64_t seed) {
  GenConfig c;
  c.seed = seed;
  c.n_agents = 2;
  c.n_requests = 6;
  c.n_stations = 1;
  c.duplicate_visits = 2;
  c.preset = BatteryPreset::HighDischarge;
  c.selective = true;
  c.open_vrp = false;
  return c;
}

GenConfig nonselective_open_scenario(std::uint64_t seed) {
  GenConfig c;
  c.seed = seed;
  c.n_agents = 3;
  c.n_requests = 8;
  c.n_stations = 0;
  c.duplicate_visits = 0;
  c.preset = BatteryPreset::Typical;
  c.selective = false;
  c.open_vrp = true;
  return c;
}

}  // namespace emdarp
