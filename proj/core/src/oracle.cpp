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
#include <cmath>
#include <functional>
#include <numeric>

#include "emdarp/errors.hpp"
#include "emdarp/schedule.hpp"
#include "emdarp/solver.hpp"

namespace emdarp {
namespace {

// Every order of the given requests' pickups and deliveries with each pickup
// ahead of its delivery.
std::vector<std::vector<NodeId>> interleavings(const ExpandedGraph& g,
                                               const std::vector<std::size_t>& reqs) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> seq;
  std::vector<int> state(reqs.size(), 0);
  std::function<void()> rec = [&] {
    if (seq.size() == 2 * reqs.size()) {
      out.push_back(seq);
      return;
    }
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      if (state[i] == 2) continue;
      seq.push_back(state[i] == 0 ? g.pickup_node(reqs[i]) : g.delivery_node(reqs[i]));
      ++state[i];
      rec();
      --state[i];
      seq.pop_back();
    }
  };
  rec();
  return out;
}

// Positions after which the vehicle stands empty at a delivery.
std::vector<std::size_t> empty_gaps(const ExpandedGraph& g,
                                    const std::vector<NodeId>& seq) {
  std::vector<std::size_t> gaps;
  int onboard = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    onboard += g.load_sign(seq[i]);
    if (onboard == 0) gaps.push_back(i);
  }
  return gaps;
}

bool capacity_ok(const Instance& in, const ExpandedGraph& g, std::size_t k,
                 const std::vector<NodeId>& seq) {
  const Agent& a = in.agents[k];
  int u1 = 0;
  int u2 = 0;
  for (NodeId n : seq) {
    const Request& q = in.requests[g.request_of(n)];
    u1 += g.load_sign(n) * q.passengers;
    u2 += g.load_sign(n) * q.equipment;
    if (u1 > a.cap_passengers || u2 > a.cap_equipment) return false;
    if (g.load_sign(n) > 0 && u1 + a.conversion * u2 > a.cap_passengers + 1e-9) return false;
  }
  return true;
}

}  // namespace

OracleResult exhaustive_oracle(const Instance& in, const ExpandedGraph& g, const OracleCaps& caps) {
  const std::size_t K = g.num_agents();
  const std::size_t R = g.num_requests();
  const std::size_t m = g.num_physical_stations();
  if (R > caps.max_requests || K > caps.max_agents ||
      g.stations().size() > caps.max_station_visits) {
    throw LimitError("oracle caps exceeded");
  }

  OracleResult best;
  std::vector<std::size_t> best_code;
  std::vector<std::size_t> assign(R, 0);

  auto consider = [&](const RouteSet& routes, const std::vector<NodeId>& hubs) {
    ++best.evaluated;
    ScheduleResult s = schedule_routes(in, g, routes, hubs);
    if (!s.feasible) return;
    std::vector<std::size_t> code(assign);
    for (std::size_t k = 0; k < K; ++k) {
      code.insert(code.end(), routes[k].begin(), routes[k].end());
      code.push_back(routes[k].empty() ? g.num_nodes() : hubs[k]);
      code.push_back(g.num_nodes() + 1);
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best.objective));
    const bool better = !best.feasible || s.objective < best.objective - tol ||
                        (s.objective <= best.objective + tol && code < best_code);
    if (better) {
      best.feasible = true;
      best.objective = s.objective;
      best.plan = std::move(s.plan);
      best_code = std::move(code);
    }
  };

  // Final depots for every agent, then evaluation.
  auto with_hubs = [&](const RouteSet& routes) {
    std::vector<NodeId> hubs(K, g.depots().first);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == K) {
        consider(routes, hubs);
        return;
      }
      if (routes[k].empty()) {
        rec(k + 1);
        return;
      }
      for (NodeId h : g.depots()) {
        if (in.agents[k].terminal_hub && h != g.depot_node(*in.agents[k].terminal_hub)) continue;
        hubs[k] = h;
        rec(k + 1);
      }
    };
    rec(0);
  };

  // Station insertions for one combination of per-agent orders.
  auto with_stations = [&](const std::vector<std::vector<NodeId>>& orders) {
    struct Gap {
      std::size_t agent;
      std::size_t after;
    };
    std::vector<Gap> gaps;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t pos : empty_gaps(g, orders[k])) gaps.push_back({k, pos});
    }
    std::vector<int> choice(gaps.size(), -1);
    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
      if (gi < gaps.size()) {
        for (int c = -1; c < static_cast<int>(m); ++c) {
          choice[gi] = c;
          rec(gi + 1);
        }
        return;
      }
      std::vector<std::vector<std::size_t>> visits(m);  // gap indices per station
      for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (choice[i] >= 0) visits[choice[i]].push_back(i);
      }
      for (const auto& v : visits) {
        if (v.size() > g.visits_per_station()) return;
      }
      // All label permutations per station.
      std::vector<std::vector<std::size_t>> labels(m);
      for (std::size_t i = 0; i < m; ++i) {
        labels[i].resize(visits[i].size());
        std::iota(labels[i].begin(), labels[i].end(), 0);
      }
      std::function<void(std::size_t)> perm = [&](std::size_t st) {
        if (st == m) {
          std::vector<NodeId> node_at(gaps.size(), 0);
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t v = 0; v < visits[i].size(); ++v) {
              node_at[visits[i][v]] = g.station_node(i, labels[i][v]);
            }
          }
          RouteSet routes(K);
          std::size_t gi2 = 0;
          for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t pos = 0; pos < orders[k].size(); ++pos) {
              routes[k].push_back(orders[k][pos]);
              while (gi2 < gaps.size() && gaps[gi2].agent == k && gaps[gi2].after == pos) {
                if (choice[gi2] >= 0) routes[k].push_back(node_at[gi2]);
                ++gi2;
              }
            }
          }
          with_hubs(routes);
          return;
        }
        std::sort(labels[st].begin(), labels[st].end());
        do {
          perm(st + 1);
        } while (std::next_permutation(labels[st].begin(), labels[st].end()));
      };
      perm(0);
    };
    rec(0);
  };

  std::function<void(std::size_t)> assign_rec = [&](std::size_t r) {
    if (r < R) {
      for (std::size_t a = 0; a <= K; ++a) {
        if (a == K && in.must_serve(r)) continue;
        assign[r] = a;
        assign_rec(r + 1);
      }
      return;
    }
    std::vector<std::vector<std::vector<NodeId>>> options(K);
    for (std::size_t k = 0; k < K; ++k) {
      std::vector<std::size_t> mine;
      for (std::size_t q = 0; q < R; ++q) {
        if (assign[q] == k) mine.push_back(q);
      }
      for (auto& seq : interleavings(g, mine)) {
        if (capacity_ok(in, g, k, seq)) options[k].push_back(std::move(seq));
      }
      if (options[k].empty()) return;
    }
    std::vector<std::vector<NodeId>> orders(K);
    std::function<void(std::size_t)> pick = [&](std::size_t k) {
      if (k == K) {
        with_stations(orders);
        return;
      }
      for (const auto& seq : options[k]) {
        orders[k] = seq;
        pick(k + 1);
      }
    };
    pick(0);
  };
  assign_rec(0);

  if (best.feasible) {
    best.plan.status = PlanStatus::Optimal;
  } else {
    best.plan.status = PlanStatus::Infeasible;
  }
  return best;
}

}  // namespace emdarp
