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


#include <doctest.h>

#include <stdexcept>

#include "emdarp/charging.hpp"

using namespace emdarp;

namespace {

BatteryModel battery() {
  BatteryModel b;
  b.beta1 = 0.1;
  b.beta2 = 0.05;
  b.beta3 = 0.02;
  return b;
}

}  // namespace

TEST_CASE("first segment stops at the break") {
  const ChargeResult r = charge_curve(0.80, 0.5, battery());
  CHECK(r.final_soc == doctest::Approx(0.85));
  CHECK(r.xi[0] == doctest::Approx(0.5));
  CHECK(r.xi[1] == doctest::Approx(0.0));
}

TEST_CASE("charge crosses into the second segment") {
  // 0.5 h in segment 1 gets to 0.85, one more unit at 0.05 adds 0.05.
  const ChargeResult r = charge_curve(0.80, 1.5, battery());
  CHECK(r.final_soc == doctest::Approx(0.90));
  CHECK(r.xi[0] == doctest::Approx(0.5));
  CHECK(r.xi[1] == doctest::Approx(1.0));
  CHECK(r.z[0] == 1);
  CHECK(r.z[1] == 0);
}

TEST_CASE("full charge saturates") {
  const BatteryModel b = battery();
  const ChargeResult r = charge_curve(0.25, 1000.0, b);
  CHECK(r.final_soc == doctest::Approx(1.0));
  CHECK(r.xi[0] == doctest::Approx(6.0));
  CHECK(r.xi[1] == doctest::Approx(2.0));
  CHECK(r.xi[2] == doctest::Approx(2.5));
  CHECK(r.z[0] == 1);
  CHECK(r.z[1] == 1);
}

TEST_CASE("curve is monotone in time") {
  const BatteryModel b = battery();
  double last = 0.0;
  for (double t = 0.0; t <= 20.0; t += 0.25) {
    const double s = charge_curve(0.3, t, b).final_soc;
    CHECK(s >= last - 1e-12);
    CHECK(s <= 1.0 + 1e-12);
    last = s;
  }
}

TEST_CASE("arrival above the first break is rejected") {
  CHECK_THROWS_AS(charge_curve(0.9, 1.0, battery()), std::invalid_argument);
  CHECK_THROWS_AS(charge_curve(0.5, -1.0, battery()), std::invalid_argument);
}

TEST_CASE("charge_between agrees with the potential") {
  const BatteryModel b = battery();
  for (double from : {0.0, 0.3, 0.85}) {
    for (double to : {0.5, 0.9, 0.97, 1.0}) {
      const ChargeResult r = charge_between(from, to, b);
      const double total = r.xi[0] + r.xi[1] + r.xi[2];
      const double want = to > from ? charge_potential(to, b) - charge_potential(from, b) : 0.0;
      CHECK(total == doctest::Approx(want));
      if (to > from) CHECK(charge_curve(from, total, b).final_soc == doctest::Approx(to));
    }
  }
}

TEST_CASE("potential is convex") {
  const BatteryModel b = battery();
  double prev_slope = 0.0;
  for (double s = 0.01; s < 1.0; s += 0.01) {
    const double slope = (charge_potential(s + 0.005, b) - charge_potential(s, b)) / 0.005;
    CHECK(slope >= prev_slope - 1e-9);
    prev_slope = slope;
  }
}
