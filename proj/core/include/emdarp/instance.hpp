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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace emdarp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Where something sits: a planar point in meters (euclidean costs) or a key
// into the explicit cost matrix.
using Location = std::variant<Point, std::size_t>;

enum class TimeWindowKind { Pickup, Delivery };

enum class TimeUnit { Seconds, Minutes, Hours };

// Seconds per unit; euclidean costs are meters at 1 m/s, then divided by this.
double seconds_per(TimeUnit unit);

struct Request {
  std::size_t id = 0;
  Location pickup;
  Location delivery;
  int passengers = 1;
  int equipment = 0;
  double service_time = 0.0;
  TimeWindowKind tw_kind = TimeWindowKind::Pickup;
  double tw_lo = 0.0;
  double tw_hi = 0.0;
  double priority = 1.0;
  bool force_accept = false;
};

struct Agent {
  std::size_t id = 0;
  Location start;
  double initial_delay = 0.0;
  int cap_passengers = 1;
  int cap_equipment = 1;
  double conversion = 1.0;
  double max_duration = 0.0;
  double station_service_time = 0.0;
  double soc_min = 0.25;
  double soc_init = 1.0;
  double soc_target = 0.85;
  // Index into Instance::depots; the agent must end its route there.
  std::optional<std::size_t> terminal_hub;

  // Combined seat bound Q1 + gamma * Q2 used to switch off the convertible
  // seat constraint.
  double combined_capacity() const {
    return cap_passengers + conversion * cap_equipment;
  }
};

// Load-dependent discharge and three-segment piecewise-linear charging.
// Segment breakpoints sit at SoC 0.85 and 0.95.
struct BatteryModel {
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;

  static constexpr double kFirstBreak = 0.85;
  static constexpr double kSecondBreak = 0.95;
};

struct Station {
  std::size_t id = 0;
  Location pos;
  double earliest_available = 0.0;
};

struct Depot {
  std::size_t id = 0;
  Location pos;
};

struct CostSpec {
  enum class Mode { Euclidean, Matrix };
  Mode mode = Mode::Euclidean;
  // Row-major square matrix in the instance time unit; only for Mode::Matrix.
  std::vector<std::vector<double>> matrix;
};

struct ObjectiveWeights {
  double epsilon = 1e-3;
  double zeta = 1.0;
  double eta = 1e4;
  std::optional<double> big_m_override;
};

struct VariantFlags {
  bool selective = true;
  bool open_vrp = false;
  // Open routes still need the energy to reach a depot unless this is off.
  bool open_vrp_soc_to_hub = true;
  // Declare the load variables integer in the exported MILP.
  bool integer_loads = true;
};

struct Instance {
  std::string name;
  TimeUnit time_unit = TimeUnit::Minutes;
  std::vector<Request> requests;
  std::vector<Agent> agents;
  std::vector<Station> stations;
  std::vector<Depot> depots;
  CostSpec costs;
  BatteryModel battery;
  int duplicate_visits = 0;
  ObjectiveWeights weights;
  VariantFlags variant;

  std::size_t num_requests() const { return requests.size(); }
  std::size_t num_agents() const { return agents.size(); }
  std::size_t num_stations() const { return stations.size(); }
  std::size_t num_station_nodes() const {
    return stations.size() * static_cast<std::size_t>(duplicate_visits + 1);
  }
  // A request must be served when the variant is non-selective or when the
  // request itself is flagged.
  bool must_serve(std::size_t r) const {
    return !variant.selective || requests[r].force_accept;
  }
};

// Throws ValidationError naming the offending field on the first broken
// invariant.
void validate_instance(const Instance& instance);

// Parses the JSON instance document and validates it.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

// Deterministic JSON rendering (fixed key order, round-trip precision).
std::string dump_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::filesystem::path& path);

// Travel times between locations: straight-line distance at 1 m/s expressed
// in the instance time unit, or the explicit matrix entry.
class CostModel {
 public:
  explicit CostModel(const Instance& instance);

  double travel_time(const Location& from, const Location& to) const;
  bool symmetric_by_construction() const {
    return mode_ == CostSpec::Mode::Euclidean;
  }

 private:
  CostSpec::Mode mode_;
  double unit_scale_;
  std::vector<std::vector<double>> matrix_;
};

CostModel derive_costs(const Instance& instance);

}  // namespace emdarp
