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

#include <array>

#include "emdarp/instance.hpp"

namespace emdarp {

struct ChargeResult {
  double final_soc = 0.0;
  std::array<double, 3> xi{};
  std::array<int, 2> z{};
};

// Reference piecewise-linear charge curve: segment 1 at beta1 up to 0.85,
// segment 2 at beta2 up to 0.95, segment 3 at beta3 up to 1.0, then flat.
// Throws std::invalid_argument when arrival_soc > 0.85 or total_time < 0.
ChargeResult charge_curve(double arrival_soc, double total_time, const BatteryModel& battery);

// Time needed to charge from `from` (at most 0.85) to `to`, split by segment.
// Zero when to <= from.
ChargeResult charge_between(double from, double to, const BatteryModel& battery);

// Cumulative time to charge from empty to soc along the curve; convex.
double charge_potential(double soc, const BatteryModel& battery);

}  // namespace emdarp
