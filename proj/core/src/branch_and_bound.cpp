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


#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "emdarp/charging.hpp"
#include "emdarp/errors.hpp"
#include "emdarp/schedule.hpp"
#include "emdarp/solver.hpp"

namespace emdarp {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool improves(double candidate, double incumbent) {
  if (incumbent == kInf) return candidate < kInf;
  return candidate < incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Incumbent and counters shared by all search threads.
struct Shared {
  std::mutex mu;
  double best = kInf;
  bool has = false;
  RoutePlan plan;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> leaves{0};
  std::atomic<bool> stop{false};
  std::string limit;

  double incumbent() {
    std::lock_guard lock(mu);
    return best;
  }
  void offer(const ScheduleResult& s) {
    std::lock_guard lock(mu);
    if (improves(s.objective, best)) {
      best = s.objective;
      plan = s.plan;
      has = true;
    }
  }
  void halt(const char* why) {
    std::lock_guard lock(mu);
    if (limit.empty()) limit = why;
    stop = true;
  }
};

// Problem data shared read-only by every search.
struct Tables {
  const Instance& in;
  const ExpandedGraph& g;
  std::size_t N = 0;
  std::vector<double> sp;   // shortest travel time along admissible arcs
  std::vector<double> ret;  // lower bound on the closing leg to any depot (duration sense)
  std::vector<std::size_t> rank;  // requests by decreasing priority
  std::vector<std::size_t> rank_of;

  Tables(const Instance& instance, const ExpandedGraph& graph) : in(instance), g(graph) {
    N = g.num_nodes();
    sp.assign(N * N, kInf);
    for (NodeId i = 0; i < N; ++i) sp[i * N + i] = 0.0;
    for (const Arc& a : g.arcs()) sp[a.from * N + a.to] = g.cost(a.from, a.to);
    for (NodeId m = 0; m < N; ++m) {
      for (NodeId i = 0; i < N; ++i) {
        const double im = sp[i * N + m];
        if (im == kInf) continue;
        for (NodeId j = 0; j < N; ++j) {
          const double c = im + sp[m * N + j];
          if (c < sp[i * N + j]) sp[i * N + j] = c;
        }
      }
    }
    ret.assign(N, 0.0);
    if (!in.variant.open_vrp) {
      for (NodeId n = 0; n < N; ++n) {
        double best = kInf;
        for (NodeId h : g.depots()) best = std::min(best, sp[n * N + h]);
        ret[n] = best;
      }
    }
    rank.resize(g.num_requests());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
      return in.requests[a].priority > in.requests[b].priority;
    });
    rank_of.resize(rank.size());
    for (std::size_t i = 0; i < rank.size(); ++i) rank_of[rank[i]] = i;
  }

  double path(NodeId a, NodeId b) const { return sp[a * N + b]; }

  bool fits(std::size_t agent, std::size_t r) const {
    const Agent& a = in.agents[agent];
    const Request& q = in.requests[r];
    return q.passengers <= a.cap_passengers && q.equipment <= a.cap_equipment &&
           q.passengers + a.conversion * q.equipment <= a.cap_passengers + 1e-9;
  }

  double lateness(std::size_t r, double tp, double td) const {
    const Request& q = in.requests[r];
    const double t = q.tw_kind == TimeWindowKind::Pickup ? tp : td;
    return std::max(0.0, t - q.tw_hi);
  }

  // Lower bound on the objective terms of one served request.
  double served_cost(std::size_t r, double tp, double td) const {
    const Request& q = in.requests[r];
    return q.priority * (in.weights.epsilon * (tp + td) + in.weights.zeta * lateness(r, tp, td));
  }
};

// Progress of the agent whose route is being extended.
struct Cursor {
  NodeId last = 0;
  double ready = 0.0;  // earliest departure from last
  double level = 1.0;  // SoC upper bound on leaving last
  int u1 = 0;
  int u2 = 0;
  std::uint64_t onboard = 0;
};

enum class MoveKind { Visit, Close };

struct Move {
  MoveKind kind = MoveKind::Visit;
  NodeId node = 0;
  double bound = 0.0;
  std::size_t order = 0;
};

class Search {
 public:
  Search(const Tables& tab, const SolveConfig& cfg, Shared& shared, Clock::time_point t0)
      : tab_(tab), in_(tab.in), g_(tab.g), cfg_(cfg), sh_(shared), t0_(t0) {
    const std::size_t R = g_.num_requests();
    routes_.assign(g_.num_agents(), {});
    status_.assign(R, 0);
    t_pick_.assign(R, 0.0);
    label_used_.assign(g_.num_nodes(), 0);
    max_label_.assign(g_.num_physical_stations(), -1);
    if (g_.num_agents() > 0) cur_ = start_cursor(0);
  }

  double root_bound() const { return bound(); }

  std::vector<Move> children() const {
    std::vector<Move> moves;
    std::size_t order = 0;
    if (agent_ >= g_.num_agents()) return moves;
    auto consider = [&](MoveKind kind, NodeId n) {
      Move m{kind, n, 0.0, order++};
      Search& self = const_cast<Search&>(*this);
      Undo u;
      if (!self.apply(m, u)) return;
      m.bound = bound();
      self.revert(m, u);
      moves.push_back(m);
    };
    for (std::size_t i = 0; i < tab_.rank.size(); ++i) {
      const std::size_t r = tab_.rank[i];
      if (status_[r] == 1) consider(MoveKind::Visit, g_.delivery_node(r));
    }
    for (std::size_t i = 0; i < tab_.rank.size(); ++i) {
      const std::size_t r = tab_.rank[i];
      if (status_[r] == 0) consider(MoveKind::Visit, g_.pickup_node(r));
    }
    if (cur_.onboard == 0 && g_.kind(cur_.last) == NodeKind::Delivery) {
      for (NodeId f : g_.stations()) consider(MoveKind::Visit, f);
    }
    consider(MoveKind::Close, 0);
    std::stable_sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
      return a.bound < b.bound;
    });
    return moves;
  }

  void dive(const Move& m) {
    Undo u;
    if (!apply(m, u)) return;
    explore();
    revert(m, u);
  }

  void explore() {
    if (sh_.stop) return;
    const std::uint64_t n = ++sh_.nodes;
    if ((n & 255) == 0 && cfg_.time_limit > 0.0 && seconds_since(t0_) > cfg_.time_limit) {
      sh_.halt("time limit");
      return;
    }
    if (cfg_.node_limit > 0 && n > cfg_.node_limit) {
      sh_.halt("node limit");
      return;
    }
    if (!improves(bound(), sh_.incumbent())) return;
    if (agent_ == g_.num_agents()) {
      leaf();
      return;
    }
    for (const Move& m : children()) {
      if (sh_.stop) return;
      if (!improves(m.bound, sh_.incumbent())) break;
      dive(m);
    }
  }

 private:
  struct Undo {
    Cursor cursor;
    double closed_t = 0.0;
    double acc = 0.0;
    int max_label = -1;
  };

  Cursor start_cursor(std::size_t k) const {
    Cursor c;
    c.last = g_.start_node(k);
    c.ready = in_.agents[k].initial_delay;
    c.level = in_.agents[k].soc_init;
    return c;
  }

  bool apply(const Move& m, Undo& u) {
    u.cursor = cur_;
    u.closed_t = closed_t_;
    u.acc = acc_;
    const std::size_t k = agent_;
    const Agent& ag = in_.agents[k];
    const BatteryModel& b = in_.battery;

    if (m.kind == MoveKind::Close) {
      if (cur_.onboard != 0) return false;
      if (routes_[k].empty()) {
        if (ag.terminal_hub) return false;
      } else {
        const NodeId h = pick_hub(in_, g_, k, cur_.last);
        if (!g_.admissible(cur_.last, h)) return false;
        const bool open = in_.variant.open_vrp;
        const double tail = open ? 0.0 : g_.cost(cur_.last, h);
        const double e_cost = open && !in_.variant.open_vrp_soc_to_hub ? 0.0 : g_.cost(cur_.last, h);
        if (cur_.level - b.alpha0 * e_cost < ag.soc_min - 1e-12) return false;
        const double tk = cur_.ready + tail;
        if (tk > ag.max_duration + 1e-9) return false;
        closed_t_ = std::max(closed_t_, tk);
      }
      ++agent_;
      if (agent_ < g_.num_agents()) cur_ = start_cursor(agent_);
      std::fill(max_label_.begin(), max_label_.end(), -1);
      return true;
    }

    const NodeId n = m.node;
    if (!g_.admissible(cur_.last, n)) return false;
    const NodeKind kind = g_.kind(n);
    const double c = g_.cost(cur_.last, n);
    double t = cur_.ready + c;
    const double level =
        cur_.level - (b.alpha0 * c + b.alpha1 * c * cur_.u1 + b.alpha2 * c * cur_.u2);
    if (level < ag.soc_min - 1e-12) return false;

    Cursor next = cur_;
    next.last = n;
    if (kind == NodeKind::Station) {
      const StationVisit sv = g_.station_of(n);
      if (label_used_[n]) return false;
      if (static_cast<int>(sv.visit) <= max_label_[sv.station]) return false;
      // A skipped lower duplicate can only be filled by a later agent.
      if (sv.visit > 0 && agent_ + 1 == g_.num_agents() &&
          !label_used_[g_.station_node(sv.station, sv.visit - 1)]) {
        return false;
      }
      if (sv.visit == 0) t = std::max(t, in_.stations[sv.station].earliest_available);
      const double arrive = std::min(level, BatteryModel::kFirstBreak);
      const double xi_lb =
          std::max(0.0, charge_potential(ag.soc_target, b) - charge_potential(arrive, b));
      next.ready = t + ag.station_service_time + xi_lb;
      next.level = 1.0;
      next.u1 = next.u2 = 0;
    } else {
      const std::size_t r = g_.request_of(n);
      const Request& q = in_.requests[r];
      const int sign = g_.load_sign(n);
      next.u1 += sign * q.passengers;
      next.u2 += sign * q.equipment;
      if (sign > 0) {
        if (status_[r] != 0) return false;
        if (next.u1 > ag.cap_passengers || next.u2 > ag.cap_equipment ||
            next.u1 + ag.conversion * next.u2 > ag.cap_passengers + 1e-9) {
          return false;
        }
        next.onboard |= std::uint64_t{1} << r;
      } else {
        if (status_[r] != 1 || !(cur_.onboard >> r & 1)) return false;
        next.onboard &= ~(std::uint64_t{1} << r);
      }
      next.ready = t + q.service_time;
      next.level = level;
    }

    // Duration cap, counting the onboard deliveries still due.
    double need = next.ready + tab_.ret[n];
    for (std::uint64_t bits = next.onboard; bits; bits &= bits - 1) {
      const std::size_t r = static_cast<std::size_t>(std::countr_zero(bits));
      const NodeId d = g_.delivery_node(r);
      need = std::max(need, next.ready + tab_.path(n, d) + in_.requests[r].service_time +
                                tab_.ret[d]);
    }
    if (need > ag.max_duration + 1e-9) return false;

    if (kind == NodeKind::Station) {
      const StationVisit sv = g_.station_of(n);
      u.max_label = max_label_[sv.station];
      max_label_[sv.station] = static_cast<int>(sv.visit);
      label_used_[n] = 1;
    } else {
      const std::size_t r = g_.request_of(n);
      if (g_.load_sign(n) > 0) {
        status_[r] = 1;
        t_pick_[r] = t;
      } else {
        status_[r] = 2;
        acc_ += tab_.served_cost(r, t_pick_[r], t);
      }
    }
    routes_[k].push_back(n);
    cur_ = next;
    return true;
  }

  void revert(const Move& m, const Undo& u) {
    if (m.kind == MoveKind::Close) {
      --agent_;
      // Station labels are per agent; rebuild them for the reopened agent.
      std::fill(max_label_.begin(), max_label_.end(), -1);
      for (NodeId n : routes_[agent_]) {
        if (g_.kind(n) == NodeKind::Station) {
          const StationVisit sv = g_.station_of(n);
          max_label_[sv.station] = static_cast<int>(sv.visit);
        }
      }
    } else {
      const NodeId n = m.node;
      routes_[agent_].pop_back();
      if (g_.kind(n) == NodeKind::Station) {
        max_label_[g_.station_of(n).station] = u.max_label;
        label_used_[n] = 0;
      } else {
        const std::size_t r = g_.request_of(n);
        status_[r] = g_.load_sign(n) > 0 ? 0 : 1;
      }
    }
    cur_ = u.cursor;
    closed_t_ = u.closed_t;
    acc_ = u.acc;
  }

  // Valid lower bound on any completion of the current partial solution.
  double bound() const {
    const std::size_t K = g_.num_agents();
    double t_floor = closed_t_;
    double total = acc_;
    const bool active = agent_ < K;
    const bool started = active && !routes_[agent_].empty();
    if (started) t_floor = std::max(t_floor, cur_.ready + tab_.ret[cur_.last]);
    if (active) {
      for (std::uint64_t bits = cur_.onboard; bits; bits &= bits - 1) {
        const std::size_t r = static_cast<std::size_t>(std::countr_zero(bits));
        const NodeId d = g_.delivery_node(r);
        const double td = cur_.ready + tab_.path(cur_.last, d);
        t_floor = std::max(t_floor, td + in_.requests[r].service_time + tab_.ret[d]);
        total += tab_.served_cost(r, t_pick_[r], td);
      }
    }

    struct Optional {
      double t;
      double serve;
      double skip;
    };
    std::vector<Optional> optional;
    for (std::size_t r = 0; r < g_.num_requests(); ++r) {
      if (status_[r] != 0) continue;
      const Request& q = in_.requests[r];
      const NodeId p = g_.pickup_node(r);
      const NodeId d = g_.delivery_node(r);
      double tp = kInf;
      double tr = kInf;
      auto offer = [&](std::size_t a, NodeId pos, double ready) {
        if (!tab_.fits(a, r)) return;
        const double arrive = ready + tab_.path(pos, p);
        if (arrive == kInf) return;
        tp = std::min(tp, arrive);
        tr = std::min(tr, arrive + q.service_time + tab_.path(p, d) + q.service_time + tab_.ret[d]);
      };
      if (active) offer(agent_, cur_.last, cur_.ready);
      for (std::size_t a = agent_ + 1; a < K; ++a) {
        offer(a, g_.start_node(a), in_.agents[a].initial_delay);
      }
      const double serve =
          tp == kInf ? kInf : tab_.served_cost(r, tp, tp + q.service_time + tab_.path(p, d));
      if (in_.must_serve(r)) {
        if (serve == kInf) return kInf;
        total += serve;
        t_floor = std::max(t_floor, tr);
      } else {
        optional.push_back({tr, serve, q.priority * in_.weights.eta});
      }
    }

    // Serving a set S costs max(T, max_S t) + sum_S serve + sum_rest skip;
    // for a threshold theta the best S takes every cheaper-to-serve request
    // with t <= theta.
    std::sort(optional.begin(), optional.end(),
              [](const Optional& a, const Optional& b) { return a.t < b.t; });
    double skip_all = 0.0;
    for (const Optional& o : optional) skip_all += o.skip;
    double best = t_floor + skip_all;
    double taken = 0.0;
    double skipped = skip_all;
    for (const Optional& o : optional) {
      if (o.t == kInf) break;
      taken += std::min(o.serve, o.skip);
      skipped -= o.skip;
      best = std::min(best, std::max(t_floor, o.t) + taken + skipped);
    }
    return total + best;
  }

  void leaf() {
    ++sh_.leaves;
    for (std::size_t r = 0; r < g_.num_requests(); ++r) {
      if (in_.must_serve(r) && status_[r] != 2) return;
    }
    for (NodeId f : g_.stations()) {
      const StationVisit sv = g_.station_of(f);
      if (sv.visit > 0 && label_used_[f] && !label_used_[g_.station_node(sv.station, sv.visit - 1)]) {
        return;
      }
    }
    ScheduleResult s = schedule_routes(in_, g_, routes_);
    if (s.feasible) sh_.offer(s);
  }

  const Tables& tab_;
  const Instance& in_;
  const ExpandedGraph& g_;
  const SolveConfig& cfg_;
  Shared& sh_;
  Clock::time_point t0_;

  RouteSet routes_;
  std::size_t agent_ = 0;
  Cursor cur_;
  std::vector<char> status_;  // 0 pending, 1 onboard, 2 delivered
  std::vector<double> t_pick_;
  std::vector<char> label_used_;
  std::vector<int> max_label_;  // highest duplicate used by the current agent
  double closed_t_ = 0.0;
  double acc_ = 0.0;
};

// Sequential cheapest insertion of pickup-delivery pairs, no station visits.
void greedy(const Instance& in, const ExpandedGraph& g, const Tables& tab, Shared& sh) {
  RouteSet routes(g.num_agents());
  ScheduleResult current = schedule_routes(in, g, routes);
  for (std::size_t r : tab.rank) {
    ScheduleResult best;
    RouteSet best_routes;
    for (std::size_t k = 0; k < g.num_agents(); ++k) {
      const auto& base = routes[k];
      for (std::size_t i = 0; i <= base.size(); ++i) {
        for (std::size_t j = i; j <= base.size(); ++j) {
          RouteSet trial = routes;
          auto& route = trial[k];
          route.insert(route.begin() + static_cast<std::ptrdiff_t>(j), g.delivery_node(r));
          route.insert(route.begin() + static_cast<std::ptrdiff_t>(i), g.pickup_node(r));
          ScheduleResult s = schedule_routes(in, g, trial);
          if (s.feasible && (!best.feasible || improves(s.objective, best.objective))) {
            best = std::move(s);
            best_routes = std::move(trial);
          }
        }
      }
    }
    const bool must = in.must_serve(r);
    if (best.feasible && (must || !current.feasible || improves(best.objective, current.objective))) {
      current = std::move(best);
      routes = std::move(best_routes);
    }
  }
  if (!current.feasible) return;
  for (std::size_t r = 0; r < g.num_requests(); ++r) {
    if (in.must_serve(r) && !current.plan.accepted[r]) return;
  }
  sh.offer(current);
}

}  // namespace

SolveResult branch_and_bound(const Instance& in, const ExpandedGraph& g, const SolveConfig& cfg) {
  if (g.num_requests() > 64) throw LimitError("branch_and_bound supports at most 64 requests");
  const Clock::time_point t0 = Clock::now();
  const Tables tab(in, g);
  Shared sh;
  greedy(in, g, tab, sh);

  Search root(tab, cfg, sh, t0);
  SolveResult res;
  res.bound = root.root_bound();

  const unsigned threads = cfg.deterministic ? 1u : std::max(1u, cfg.threads);
  if (threads == 1) {
    root.explore();
  } else {
    ++sh.nodes;
    const std::vector<Move> moves = root.children();
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        Search local(tab, cfg, sh, t0);
        for (std::size_t i = next++; i < moves.size(); i = next++) {
          if (sh.stop) break;
          if (!improves(moves[i].bound, sh.incumbent())) continue;
          local.dive(moves[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  res.seconds = seconds_since(t0);
  res.nodes = sh.nodes;
  res.leaves = sh.leaves;
  res.limit = sh.limit;
  res.proven = sh.limit.empty();
  res.has_plan = sh.has;
  if (sh.has) {
    res.plan = std::move(sh.plan);
    res.objective = res.plan.objective;
    res.plan.status = res.proven ? PlanStatus::Optimal : PlanStatus::Feasible;
    if (res.proven) res.bound = res.objective;
    res.bound = std::min(res.bound, res.objective);
    res.gap = (res.objective - res.bound) / std::max(1.0, std::abs(res.objective));
  } else {
    res.plan.status = res.proven ? PlanStatus::Infeasible : PlanStatus::Unknown;
  }
  return res;
}

}  // namespace emdarp
