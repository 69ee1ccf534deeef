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

#include "emdarp/instance.hpp"

#include <cmath>
#include <string>

#include "emdarp/errors.hpp"

namespace emdarp {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

std::string indexed(const char* list, std::size_t i, const char* field) {
  return std::string(list) + "[" + std::to_string(i) + "]." + field;
}

void check_location(const Location& loc, const CostSpec& costs,
                    const std::string& path) {
  if (costs.mode == CostSpec::Mode::Euclidean) {
    const auto* p = std::get_if<Point>(&loc);
    if (p == nullptr) {
      fail(path, "euclidean costs need [x, y] coordinates, got a matrix key");
    }
    if (!std::isfinite(p->x) || !std::isfinite(p->y)) {
      fail(path, "coordinates must be finite");
    }
    return;
  }
  const auto* key = std::get_if<std::size_t>(&loc);
  if (key == nullptr) {
    fail(path, "matrix costs need an integer location key, got coordinates");
  }
  if (*key >= costs.matrix.size()) {
    fail(path, "location key " + std::to_string(*key) +
                   " is outside the " + std::to_string(costs.matrix.size()) +
                   "x" + std::to_string(costs.matrix.size()) + " cost matrix");
  }
}

}  // namespace

double seconds_per(TimeUnit unit) {
  switch (unit) {
    case TimeUnit::Seconds:
      return 1.0;
    case TimeUnit::Minutes:
      return 60.0;
    case TimeUnit::Hours:
      return 3600.0;
  }
  return 1.0;
}

void validate_instance(const Instance& in) {
  if (in.costs.mode == CostSpec::Mode::Matrix) {
    const auto& mat = in.costs.matrix;
    if (mat.empty()) fail("costs.matrix", "matrix mode needs a non-empty matrix");
    for (std::size_t i = 0; i < mat.size(); ++i) {
      if (mat[i].size() != mat.size()) {
        fail("costs.matrix[" + std::to_string(i) + "]",
             "row has " + std::to_string(mat[i].size()) + " entries, expected " +
                 std::to_string(mat.size()));
      }
      for (std::size_t j = 0; j < mat.size(); ++j) {
        const double c = mat[i][j];
        const std::string path =
            "costs.matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        if (!std::isfinite(c)) fail(path, "cost must be finite");
        if (i == j && c != 0.0) fail(path, "diagonal cost must be 0");
        if (i != j && c <= 0.0) fail(path, "off-diagonal cost must be > 0");
      }
    }
  }

  for (std::size_t r = 0; r < in.requests.size(); ++r) {
    const Request& q = in.requests[r];
    if (q.id != r) fail(indexed("requests", r, "id"), "ids must equal their list position");
    check_location(q.pickup, in.costs, indexed("requests", r, "pickup"));
    check_location(q.delivery, in.costs, indexed("requests", r, "delivery"));
    if (q.passengers < 1) fail(indexed("requests", r, "passengers"), "must be >= 1");
    if (q.equipment < 0) fail(indexed("requests", r, "equipment"), "must be >= 0");
    if (!(q.service_time >= 0.0)) fail(indexed("requests", r, "service_time"), "must be >= 0");
    if (!(q.tw_lo >= 0.0)) fail(indexed("requests", r, "tw_lo"), "must be >= 0");
    if (!(q.tw_hi > q.tw_lo) || !std::isfinite(q.tw_hi)) {
      fail(indexed("requests", r, "tw_hi"), "must be finite and exceed tw_lo");
    }
    if (!(q.priority >= 1.0) || !std::isfinite(q.priority)) {
      fail(indexed("requests", r, "priority"), "must be finite and >= 1");
    }
  }

  for (std::size_t k = 0; k < in.agents.size(); ++k) {
    const Agent& a = in.agents[k];
    if (a.id != k) fail(indexed("agents", k, "id"), "ids must equal their list position");
    check_location(a.start, in.costs, indexed("agents", k, "start"));
    if (!(a.initial_delay >= 0.0)) fail(indexed("agents", k, "initial_delay"), "must be >= 0");
    if (a.cap_passengers < 1) fail(indexed("agents", k, "cap_passengers"), "must be >= 1");
    if (a.cap_equipment < 1) fail(indexed("agents", k, "cap_equipment"), "must be >= 1");
    if (!(a.conversion >= 1.0) || !std::isfinite(a.combined_capacity())) {
      fail(indexed("agents", k, "conversion"), "must be finite and >= 1");
    }
    if (!(a.max_duration >= 0.0)) fail(indexed("agents", k, "max_duration"), "must be >= 0");
    if (!(a.station_service_time >= 0.0)) {
      fail(indexed("agents", k, "station_service_time"), "must be >= 0");
    }
    if (!(a.soc_min > 0.0 && a.soc_min <= 1.0)) {
      fail(indexed("agents", k, "soc_min"), "must lie in (0, 1]");
    }
    if (!(a.soc_init >= a.soc_min && a.soc_init <= 1.0)) {
      fail(indexed("agents", k, "soc_init"), "must lie in [soc_min, 1]");
    }
    if (!(a.soc_target >= a.soc_min && a.soc_target <= 1.0)) {
      fail(indexed("agents", k, "soc_target"), "must lie in [soc_min, 1]");
    }
    if (a.terminal_hub && *a.terminal_hub >= in.depots.size()) {
      fail(indexed("agents", k, "terminal_hub"), "refers to a missing depot");
    }
  }

  for (std::size_t i = 0; i < in.stations.size(); ++i) {
    const Station& s = in.stations[i];
    if (s.id != i) fail(indexed("stations", i, "id"), "ids must equal their list position");
    check_location(s.pos, in.costs, indexed("stations", i, "pos"));
    if (!(s.earliest_available >= 0.0) || !std::isfinite(s.earliest_available)) {
      fail(indexed("stations", i, "earliest_available"), "must be finite and >= 0");
    }
  }

  for (std::size_t h = 0; h < in.depots.size(); ++h) {
    const Depot& d = in.depots[h];
    if (d.id != h) fail(indexed("depots", h, "id"), "ids must equal their list position");
    check_location(d.pos, in.costs, indexed("depots", h, "pos"));
  }

  const BatteryModel& b = in.battery;
  const double rates[] = {b.alpha0, b.alpha1, b.alpha2, b.beta1, b.beta2, b.beta3};
  const char* names[] = {"alpha0", "alpha1", "alpha2", "beta1", "beta2", "beta3"};
  for (int i = 0; i < 6; ++i) {
    if (!(rates[i] > 0.0) || !std::isfinite(rates[i])) {
      fail(std::string("battery.") + names[i], "rate must be finite and > 0");
    }
  }
  if (!(b.beta3 < b.beta2 && b.beta2 < b.beta1)) {
    fail("battery", "charging rates must strictly decrease (beta3 < beta2 < beta1)");
  }

  if (in.duplicate_visits < 0) fail("config.duplicate_visits", "must be >= 0");

  const ObjectiveWeights& w = in.weights;
  if (!(w.epsilon > 0.0 && w.epsilon < w.zeta && w.zeta < w.eta) || !std::isfinite(w.eta)) {
    fail("config.weights", "weights must satisfy 0 < epsilon < zeta < eta");
  }
  if (w.big_m_override && !(*w.big_m_override > 0.0 && std::isfinite(*w.big_m_override))) {
    fail("config.weights.big_m", "must be finite and > 0");
  }

  if (!in.variant.open_vrp && in.depots.empty()) {
    fail("depots", "closed routing needs at least one final depot");
  }
}

CostModel::CostModel(const Instance& instance)
    : mode_(instance.costs.mode),
      unit_scale_(1.0 / seconds_per(instance.time_unit)),
      matrix_(instance.costs.matrix) {}

double CostModel::travel_time(const Location& from, const Location& to) const {
  if (mode_ == CostSpec::Mode::Euclidean) {
    const auto* a = std::get_if<Point>(&from);
    const auto* b = std::get_if<Point>(&to);
    if (a == nullptr || b == nullptr) {
      throw ValidationError("costs: euclidean mode needs coordinates for every location");
    }
    return std::hypot(a->x - b->x, a->y - b->y) * unit_scale_;
  }
  const auto* a = std::get_if<std::size_t>(&from);
  const auto* b = std::get_if<std::size_t>(&to);
  if (a == nullptr || b == nullptr) {
    throw ValidationError("costs: matrix mode needs a location key for every location");
  }
  if (*a >= matrix_.size() || *b >= matrix_.size()) {
    throw ValidationError("costs.matrix: dimension mismatch for location key");
  }
  if (*a == *b) return 0.0;
  return matrix_[*a][*b];
}

CostModel derive_costs(const Instance& instance) { return CostModel(instance); }

}  // namespace emdarp
