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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// line fails. Set EMDARP_SOLVER_CMD to enable the external MILP checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "emdarp/charging.hpp"
#include "emdarp/milp.hpp"
#include "emdarp/model_io.hpp"
#include "emdarp/scenario.hpp"
#include "emdarp/solver.hpp"
#include "emdarp/validator.hpp"

namespace fs = std::filesystem;
using namespace emdarp;

namespace {

// Tolerances.
constexpr double kOracleTol = 1e-6;
constexpr double kValidatorTol = 1e-6;
constexpr double kExternalTol = 1e-5;
constexpr double kChargeTol = 1e-9;
constexpr double kBigMTol = 1e-6;
constexpr double kOracleBudget = 60.0;     // seconds for the whole sweep
constexpr double kScenarioBudget = 300.0;  // seconds for the station scenario
constexpr int kSweep = 25;
constexpr int kChargeSamples = 1000;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Case {
  Instance in;
  ExpandedGraph g;
  SolveResult builtin;
  OracleResult oracle;
};

// Sweep shapes: |R| 1..3, |K| 1..2, m 0..1, n 0..1, both presets, both
// selectivity modes, a few open routes.
GenConfig sweep_config(int i) {
  GenConfig c;
  c.seed = 1000 + static_cast<std::uint64_t>(i);
  c.n_requests = i % 4 == 3 ? 2 : 3 - (i % 5 == 4);
  c.n_agents = 1 + (i % 3 == 2);
  c.n_stations = i % 6 != 5;
  c.duplicate_visits = c.n_stations ? i % 2 : 0;
  c.preset = i % 3 != 1 ? BatteryPreset::HighDischarge : BatteryPreset::Typical;
  c.selective = i % 5 != 4;
  c.open_vrp = i % 6 == 5;
  return c;
}

std::vector<Case> oracle_sweep() {
  std::vector<Case> cases;
  const auto t0 = Clock::now();
  double worst = 0.0;
  int mismatches = 0;
  int feasible = 0;
  int served = 0;
  int charges = 0;
  for (int i = 0; i < kSweep; ++i) {
    Instance in = generate(sweep_config(i));
    ExpandedGraph g = ExpandedGraph::build(in);
    SolveResult b = branch_and_bound(in, g);
    OracleResult o = exhaustive_oracle(in, g);
    if (b.has_plan != o.feasible) {
      ++mismatches;
    } else if (o.feasible) {
      ++feasible;
      const double d = std::abs(b.objective - o.objective);
      worst = std::max(worst, d);
      if (d > kOracleTol || !b.proven) ++mismatches;
      for (bool a : b.plan.accepted) served += a;
      for (const AgentRoute& r : b.plan.routes) {
        for (const Stop& st : r.stops) charges += g.kind(st.node) == NodeKind::Station;
      }
    }
    cases.push_back({std::move(in), std::move(g), std::move(b), std::move(o)});
  }
  const double secs = since(t0);
  std::ostringstream os;
  os << cases.size() << " instances (" << feasible << " feasible, " << served
     << " requests served, " << charges << " station visits), max |diff| " << worst
     << ", mismatches " << mismatches << ", " << fmt("%.2f", secs) << " s (budget "
     << kOracleBudget << " s)";
  report(1, "oracle equivalence", mismatches == 0 && secs < kOracleBudget, os.str());
  return cases;
}

void validator_gate(const std::vector<Case>& cases) {
  int plans = 0;
  int bad = 0;
  double worst = 0.0;
  std::string first;
  for (const Case& c : cases) {
    if (!c.builtin.has_plan) continue;
    ++plans;
    const ValidationReport rep = validate(c.in, c.g, c.builtin.plan, kValidatorTol);
    const double d = std::abs(rep.recomputed_objective - c.builtin.objective);
    worst = std::max(worst, d);
    if (!rep.ok() || d > kValidatorTol) {
      ++bad;
      if (first.empty() && !rep.violations.empty()) {
        first = " first: " + c.in.name + " tag " + rep.violations[0].tag + " " +
                rep.violations[0].message;
      }
    }
  }
  std::ostringstream os;
  os << plans << " plans, " << bad << " with violations, max objective diff " << worst << first;
  report(2, "validator gate", bad == 0 && plans > 0, os.str());
}

bool solver_stopped_early(const Solution& s) {
  for (const std::string& w : s.warnings) {
    if (w.find("timed out") != std::string::npos) return true;
  }
  return false;
}

struct ExternalOutcome {
  bool ran = false;
  bool parse_error = false;
  bool optimal = false;
  double objective = 0.0;
};

ExternalOutcome solve_external(const MilpModel& m, const ExternalConfig& cfg) {
  ExternalOutcome out;
  const Solution s = run_external(m, cfg);
  out.ran = true;
  if (s.status == PlanStatus::Optimal) {
    out.optimal = true;
    out.objective = m.objective_value(solution_values(m, s));
  } else if (s.status == PlanStatus::Unknown && s.values.empty() && !solver_stopped_early(s)) {
    // The wrapper could not load the model or failed outright.
    out.parse_error = true;
  }
  return out;
}

ExternalConfig external_config() {
  ExternalConfig cfg;
  cfg.command = default_solver_command();
  cfg.timeout_seconds = 120.0;
  return cfg;
}

void milp_cross_check(const std::vector<Case>& cases) {
  const ExternalConfig cfg = external_config();
  if (cfg.command.empty()) {
    report(3, "MILP cross-check", true, "conditional, skipped: EMDARP_SOLVER_CMD is not set");
    return;
  }
  const auto t0 = Clock::now();
  int optimal = 0, agree = 0, parse_errors = 0, infeasible_agree = 0, other = 0;
  double worst = 0.0;
  for (const Case& c : cases) {
    const MilpModel m = build_model(c.in, c.g);
    const ExternalOutcome e = solve_external(m, cfg);
    if (e.parse_error) {
      ++parse_errors;
    } else if (e.optimal) {
      ++optimal;
      const double d = c.builtin.has_plan ? std::abs(e.objective - c.builtin.objective) : INFINITY;
      worst = std::max(worst, d);
      if (d <= kExternalTol) ++agree;
    } else if (!c.builtin.has_plan) {
      ++infeasible_agree;
    } else {
      ++other;
    }
  }
  std::ostringstream os;
  os << optimal << "/" << cases.size() << " optimal, " << agree << " agree, max |diff| " << worst
     << ", " << parse_errors << " load errors, " << other << " not proven in "
     << cfg.timeout_seconds << " s, " << fmt("%.1f", since(t0)) << " s";
  report(3, "MILP cross-check", parse_errors == 0 && agree == optimal && optimal > 0, os.str());
}

// (xi, z) from the charge curve must satisfy the station rows of a model
// and land on the same SoC as the curve.
void charging_identity() {
  Instance in;
  in.name = "charge";
  in.time_unit = TimeUnit::Seconds;
  Request q;
  q.pickup = Point{0, 0};
  q.delivery = Point{1, 0};
  q.tw_hi = 1e6;
  in.requests.push_back(q);
  Agent a;
  a.start = Point{0, 0};
  a.max_duration = 1e6;
  in.agents.push_back(a);
  in.stations.push_back({0, Point{2, 0}, 0.0});
  in.depots.push_back({0, Point{3, 0}});
  in.battery = generate(GenConfig{}).battery;
  const BatteryModel& b = in.battery;
  const ExpandedGraph g = ExpandedGraph::build(in);
  const MilpModel m = build_model(in, g);
  const NodeId d = g.delivery_node(0);
  const NodeId f = g.station_node(0, 0);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const std::string& t = m.rows[i].tag;
    if (t.rfind("41", 0) == 0 || t == "42") rows.push_back(i);
  }

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> arrival(0.0, BatteryModel::kFirstBreak);
  std::uniform_real_distribution<double> duration(0.0, 2.0 / b.beta3);
  double worst = 0.0;
  int row_breaks = 0;
  for (int s = 0; s < kChargeSamples; ++s) {
    const double a0 = arrival(rng);
    const double T = duration(rng);
    const ChargeResult r = charge_curve(a0, T, b);
    std::vector<double> v(m.vars.size(), 0.0);
    v[m.vars.x(0, d, f)] = 1.0;
    v[m.vars.phi(f, 0)] = a0;
    for (int l = 1; l <= 3; ++l) v[m.vars.xi(f, l)] = r.xi[l - 1];
    for (int l = 1; l <= 2; ++l) v[m.vars.z(f, l)] = r.z[l - 1];
    for (std::size_t i : rows) {
      const Constraint& c = m.rows[i];
      const double act = c.expr.evaluate(v);
      const bool ok = c.sense == Sense::LessEqual    ? act <= c.rhs + kChargeTol
                      : c.sense == Sense::GreaterEqual ? act >= c.rhs - kChargeTol
                                                       : std::abs(act - c.rhs) <= kChargeTol;
      if (!ok) ++row_breaks;
    }
    const double milp_soc = a0 + b.beta1 * r.xi[0] + b.beta2 * r.xi[1] + b.beta3 * r.xi[2];
    worst = std::max(worst, std::abs(milp_soc - r.final_soc));
  }
  const bool slopes = b.beta1 > b.beta2 && b.beta2 > b.beta3;
  const bool saturates = charge_curve(0.1, 1e9, b).final_soc == 1.0 &&
                         charge_curve(0.85, 3.0 / b.beta3, b).final_soc == 1.0;
  std::ostringstream os;
  os << kChargeSamples << " samples, max |soc diff| " << worst << ", row breaks " << row_breaks
     << ", beta1>beta2>beta3 " << (slopes ? "yes" : "no") << ", saturation exact "
     << (saturates ? "yes" : "no");
  report(4, "charging identity", worst <= kChargeTol && row_breaks == 0 && slopes && saturates,
         os.str());
}

// Station duplicates visited in order with service and charge in between.
struct DupCheck {
  int visits = 0;
  bool ordered = true;
};

DupCheck station_visits(const Instance& in, const ExpandedGraph& g, const RoutePlan& plan) {
  DupCheck out;
  for (std::size_t i = 0; i < g.num_physical_stations(); ++i) {
    const Stop* prev = nullptr;
    std::size_t prev_agent = 0;
    for (std::size_t j = 0; j < g.visits_per_station(); ++j) {
      const NodeId n = g.station_node(i, j);
      const Stop* here = nullptr;
      std::size_t agent = 0;
      for (std::size_t k = 0; k < plan.routes.size(); ++k) {
        for (const Stop& s : plan.routes[k].stops) {
          if (s.node == n) {
            here = &s;
            agent = k;
          }
        }
      }
      if (!here) continue;
      ++out.visits;
      if (prev) {
        const double ready =
            prev->t + in.agents[prev_agent].station_service_time + prev->charge_time();
        if (here->t < ready - 1e-6) out.ordered = false;
      }
      prev = here;
      prev_agent = agent;
    }
  }
  return out;
}

void station_scenario() {
  const auto t0 = Clock::now();
  std::string detail = "no seed within budget";
  bool ok = false;
  for (std::uint64_t seed = 1; since(t0) < kScenarioBudget; ++seed) {
    const Instance in = generate(selective_closed_scenario(seed));
    const ExpandedGraph g = ExpandedGraph::build(in);
    SolveConfig cfg;
    cfg.time_limit = std::max(1.0, kScenarioBudget - since(t0));
    const SolveResult r = branch_and_bound(in, g, cfg);
    if (!r.has_plan) continue;
    const DupCheck dc = station_visits(in, g, r.plan);
    if (dc.visits < 2) continue;
    const ValidationReport rep = validate(in, g, r.plan);
    std::ostringstream os;
    os << "seed " << seed << ", " << (r.proven ? "optimal" : "best found") << " objective "
       << r.objective << ", " << dc.visits << " duplicate visits, ordered "
       << (dc.ordered ? "yes" : "no") << ", violations " << rep.violations.size();
    for (std::size_t k = 0; k < r.plan.routes.size(); ++k) {
      os << "; agent " << k << " " << format_route(g, r.plan, k, false);
    }
    os << "; " << fmt("%.2f", since(t0)) << " s";
    detail = os.str();
    ok = dc.ordered && rep.ok();
    break;
  }
  report(5, "station duplicate ordering", ok, detail);
}

void variant_toggles() {
  std::ostringstream os;
  bool ok = true;

  // Non-selective: everything accepted or no plan at all.
  int full = 0, none = 0, partial = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance in = generate(nonselective_open_scenario(seed));
    const ExpandedGraph g = ExpandedGraph::build(in);
    SolveConfig cfg;
    cfg.time_limit = 60.0;
    const SolveResult r = branch_and_bound(in, g, cfg);
    if (!r.has_plan) {
      ++none;
    } else if (std::all_of(r.plan.accepted.begin(), r.plan.accepted.end(),
                           [](bool a) { return a; })) {
      ++full;
    } else {
      ++partial;
    }

    // Open routes end at a delivery or a station and the duration stops
    // at the last departure.
    if (r.has_plan) {
      for (std::size_t k = 0; k < r.plan.routes.size(); ++k) {
        const AgentRoute& route = r.plan.routes[k];
        if (route.idle()) continue;
        const Stop& last = route.stops.back();
        double depart = last.t;
        switch (g.kind(last.node)) {
          case NodeKind::Delivery:
            depart += in.requests[g.request_of(last.node)].service_time;
            break;
          case NodeKind::Station:
            depart += in.agents[k].station_service_time + last.charge_time();
            break;
          default:
            ok = false;
        }
        if (std::abs(route.duration - depart) > 1e-6) ok = false;
      }
    }
  }
  ok = ok && partial == 0;
  os << "non-selective open: " << full << " all-accepted, " << none << " infeasible, " << partial
     << " partial";

  // Zero duration limit: reject everything.
  Instance in = generate(sweep_config(7));
  for (Agent& a : in.agents) a.max_duration = 0.0;
  in.variant.selective = true;
  const ExpandedGraph g = ExpandedGraph::build(in);
  const SolveResult r = branch_and_bound(in, g);
  double penalty = 0.0;
  for (const Request& q : in.requests) penalty += in.weights.eta * q.priority;
  const bool all_rejected =
      r.has_plan &&
      std::none_of(r.plan.accepted.begin(), r.plan.accepted.end(), [](bool a) { return a; });
  const bool exact = r.has_plan && r.plan.mission == 0.0 && r.objective == penalty;
  ok = ok && all_rejected && exact;
  os << "; D=0: " << (all_rejected ? "all rejected" : "not all rejected") << ", T "
     << (r.has_plan ? r.plan.mission : -1.0) << ", objective " << r.objective << " vs "
     << penalty;
  report(6, "variant toggles", ok, os.str());
}

// One agent, two requests in opposite directions, time for only one.
Instance either_or(double lambda0, double lambda1) {
  Instance in;
  in.name = "either-or";
  in.time_unit = TimeUnit::Seconds;
  in.variant.open_vrp = true;
  auto add = [&](double p, double d, double lambda) {
    Request q;
    q.id = in.requests.size();
    q.pickup = Point{p, 0};
    q.delivery = Point{d, 0};
    q.service_time = 1.0;
    q.tw_lo = 0.0;
    q.tw_hi = 1000.0;
    q.priority = lambda;
    in.requests.push_back(q);
  };
  add(10, 20, lambda0);
  add(-12, -22, lambda1);
  Agent a;
  a.start = Point{0, 0};
  a.cap_passengers = 2;
  a.cap_equipment = 1;
  a.max_duration = 40.0;
  in.agents.push_back(a);
  in.battery = {0.001, 0.0005, 0.0005, 0.1, 0.05, 0.02};
  return in;
}

void priority_flip() {
  auto served = [](const Instance& in) {
    const SolveResult r = branch_and_bound(in, ExpandedGraph::build(in));
    if (!r.has_plan) return -1;
    if (r.plan.accepted[0] == r.plan.accepted[1]) return -2;
    return r.plan.accepted[0] ? 0 : 1;
  };
  const int before = served(either_or(1.0, 1.0));
  const int after = served(either_or(1.0, 1.5));
  const int back = served(either_or(2.0, 1.5));
  std::ostringstream os;
  os << "equal priorities serve r" << before << ", lambda1=1.5 serves r" << after
     << ", lambda0=2 serves r" << back;
  report(7, "priority monotonicity", before == 0 && after == 1 && back == 0, os.str());
}

void big_m_independence(const std::vector<Case>& cases) {
  const ExternalConfig cfg = external_config();
  int compared = 0, differ = 0, skipped = 0;
  double worst = 0.0;
  if (cfg.command.empty()) {
    // No MILP solver: the optimum found by the builtin search must remain
    // feasible, at the same objective, with every big-M scaled up.
    for (const Case& c : cases) {
      if (!c.builtin.has_plan) continue;
      BigM bm = compute_big_m(c.in, c.g);
      bm.time *= 10.0;
      bm.objective *= 10.0;
      const MilpModel m = build_model(c.in, c.g, bm);
      const auto v = encode_plan(m, c.in, c.g, c.builtin.plan, {true});
      ++compared;
      const double d = std::abs(m.objective_value(v) - c.builtin.objective);
      worst = std::max(worst, d);
      if (!violated_rows(m, v, 1e-7).empty() || d > kBigMTol) ++differ;
    }
    std::ostringstream os;
    os << "no MILP solver configured; builtin optimum feasible under 10x M on " << compared - differ
       << "/" << compared << ", max |diff| " << worst;
    report(8, "big-M independence", differ == 0 && compared > 0, os.str());
    return;
  }
  const auto t0 = Clock::now();
  for (const Case& c : cases) {
    BigM bm = compute_big_m(c.in, c.g);
    const ExternalOutcome base = solve_external(build_model(c.in, c.g, bm), cfg);
    bm.time *= 10.0;
    bm.objective *= 10.0;
    const ExternalOutcome big = solve_external(build_model(c.in, c.g, bm), cfg);
    if (!base.optimal || !big.optimal) {
      // Both infeasible counts as agreement; anything else was not proven.
      if (base.optimal != big.optimal || base.parse_error || big.parse_error) ++skipped;
      continue;
    }
    ++compared;
    const double d = std::abs(base.objective - big.objective);
    worst = std::max(worst, d);
    if (d >= kBigMTol) ++differ;
  }
  std::ostringstream os;
  os << compared << " instances solved to optimality under both M, max |diff| " << worst << ", "
     << skipped << " not proven, " << fmt("%.1f", since(t0)) << " s";
  report(8, "big-M independence", differ == 0 && compared > 0, os.str());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void determinism() {
  std::string tmpl = (fs::temp_directory_path() / "emdarp-accept-XXXXXX").string();
  const fs::path dir = ::mkdtemp(tmpl.data());
  auto run = [&](std::vector<std::string> args) {
    std::ostringstream out, err;
    return cli::run(args, out, err);
  };
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  std::vector<std::string> diffs;
  int codes = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const std::string s = std::to_string(pass);
    codes |= run({"gen", "--seed", "11", "--requests", "4", "--agents", "2", "--stations", "1",
                  "--dups", "1", "--preset", "highdischarge", "--out", p("inst" + s + ".json")});
    codes |= run({"build", p("inst" + s + ".json"), "--out", p("model" + s + ".mps")});
    codes |= run({"solve", p("inst" + s + ".json"), "--plan", p("plan" + s + ".json"),
                  "--solution", p("sol" + s + ".sol")});
  }
  for (const char* stem : {"inst", "model", "plan", "sol"}) {
    const std::string ext = std::string(stem) == "model" ? ".mps"
                            : std::string(stem) == "sol" ? ".sol"
                                                         : ".json";
    const std::string a = slurp(p(stem + std::string("0") + ext));
    const std::string b = slurp(p(stem + std::string("1") + ext));
    if (a.empty() || a != b) diffs.push_back(stem);
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  std::ostringstream os;
  os << "gen/build/solve artifacts compared byte for byte; exit codes "
     << (codes == 0 ? "all 0" : "nonzero") << ", differing: ";
  if (diffs.empty()) os << "none";
  for (const auto& d : diffs) os << d << " ";
  report(9, "determinism", diffs.empty() && codes == 0, os.str());
}

}  // namespace

int main() {
  const std::vector<Case> cases = oracle_sweep();
  validator_gate(cases);
  milp_cross_check(cases);
  charging_identity();
  station_scenario();
  variant_toggles();
  priority_flip();
  big_m_independence(cases);
  determinism();
  return failures == 0 ? 0 : 1;
}
