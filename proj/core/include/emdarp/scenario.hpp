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

#include <cstdint>
#include <string_view>

#include "emdarp/instance.hpp"

namespace emdarp {

enum class BatteryPreset {
  // A full battery covers about eight area diagonals.
  Typical,
  // About two diagonals, so agents must recharge every couple of requests.
  HighDischarge,
};

BatteryPreset battery_preset_from(std::string_view name);  // "typical" | "highdischarge"
std::string_view to_string(BatteryPreset p);

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct GenConfig {
  std::uint64_t seed = 1;
  int n_requests = 4;
  int n_agents = 2;
  int n_stations = 1;
  int duplicate_visits = 1;
  int n_depots = 1;
  // Side of the square service area in meters.
  double area = 1000.0;
  TimeUnit time_unit = TimeUnit::Minutes;
  // Time-window width, in the instance time unit.
  RealRange tw_width{10.0, 30.0};
  RealRange service_time{1.0, 3.0};
  IntRange passengers{1, 2};
  IntRange equipment{0, 1};
  RealRange priority{1.0, 3.0};
  BatteryPreset preset = BatteryPreset::Typical;
  bool selective = true;
  bool open_vrp = false;
  bool open_vrp_soc_to_hub = true;
};

// Deterministic per config. Draws come from one mt19937_64 seeded with
// config.seed, mapped to numbers with fixed arithmetic (not the standard
// distributions, whose output varies between library vendors). Order:
//   per request: pickup x, y; delivery x, y; passengers; equipment; service
//     time; window side (pickup or delivery); window start; window width;
//     priority
//   per agent: start x, y; initial delay
//   per station: x, y; earliest availability
//   per depot: x, y
// Changing this order invalidates stored fixtures.
Instance generate(const GenConfig& config);

// Shapes of the two worked scenarios: two agents and six requests with one
// station visited up to three times under heavy discharge (selective,
// closed); three agents and eight requests without stations (non-selective,
// open).
GenConfig selective_closed_scenario(std::uint64_t seed);
GenConfig nonselective_open_scenario(std::uint64_t seed);

}  // namespace emdarp
