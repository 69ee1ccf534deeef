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


#include "emdarp/charging.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace emdarp {

namespace {
constexpr double kB1 = BatteryModel::kFirstBreak;
constexpr double kB2 = BatteryModel::kSecondBreak;
}  // namespace

ChargeResult charge_curve(double arrival_soc, double total_time, const BatteryModel& b) {
  if (arrival_soc > kB1) {
    throw std::invalid_argument("charge_curve: arrival SoC " + std::to_string(arrival_soc) +
                                " exceeds 0.85");
  }
  if (total_time < 0.0) throw std::invalid_argument("charge_curve: negative charging time");

  ChargeResult out;
  double left = total_time;
  const double full1 = (kB1 - arrival_soc) / b.beta1;
  const double full2 = (kB2 - kB1) / b.beta2;
  const double full3 = (1.0 - kB2) / b.beta3;

  out.xi[0] = std::min(left, full1);
  left -= out.xi[0];
  if (out.xi[0] < full1) {
    out.final_soc = arrival_soc + b.beta1 * out.xi[0];
    return out;
  }
  out.z[0] = 1;
  out.xi[1] = std::min(left, full2);
  left -= out.xi[1];
  if (out.xi[1] < full2) {
    out.final_soc = kB1 + b.beta2 * out.xi[1];
    return out;
  }
  out.z[1] = 1;
  out.xi[2] = std::min(left, full3);
  out.final_soc = out.xi[2] < full3 ? kB2 + b.beta3 * out.xi[2] : 1.0;
  return out;
}

ChargeResult charge_between(double from, double to, const BatteryModel& b) {
  ChargeResult out;
  from = std::min(from, kB1);
  to = std::min(to, 1.0);
  out.final_soc = std::max(from, to);
  if (to <= from) return out;
  out.xi[0] = (std::min(to, kB1) - from) / b.beta1;
  if (to > kB1) {
    out.z[0] = 1;
    out.xi[1] = (std::min(to, kB2) - kB1) / b.beta2;
  }
  if (to > kB2) {
    out.z[1] = 1;
    out.xi[2] = (to - kB2) / b.beta3;
  }
  return out;
}

double charge_potential(double soc, const BatteryModel& b) {
  if (soc <= kB1) return soc / b.beta1;
  if (soc <= kB2) return kB1 / b.beta1 + (soc - kB1) / b.beta2;
  return kB1 / b.beta1 + (kB2 - kB1) / b.beta2 + (soc - kB2) / b.beta3;
}

}  // namespace emdarp
