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

#include "emdarp/milp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "emdarp/errors.hpp"

namespace emdarp {

LinearExpr& LinearExpr::add(VarIndex var, double coef) {
  terms_.push_back({var, coef});
  return *this;
}

void LinearExpr::normalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  terms_ = std::move(merged);
}

double LinearExpr::evaluate(std::span<const double> values) const {
  double s = 0.0;
  for (const Term& t : terms_) s += t.coef * values[t.var];
  return s;
}

// ---------------------------------------------------------------------------

BigM compute_big_m(const Instance& in, const ExpandedGraph& g) {
  BigM m;
  double start = 0.0;
  for (const Agent& a : in.agents) start = std::max(start, a.initial_delay);
  for (const Request& r : in.requests) start = std::max(start, r.tw_lo);
  for (const Station& s : in.stations) start = std::max(start, s.earliest_available);

  // Service happens after both the pickup and the delivery.
  double service = 0.0;
  for (const Request& r : in.requests) service += 2.0 * r.service_time;

  const double station_nodes = static_cast<double>(g.stations().size());
  double station_service = 0.0;
  for (const Agent& a : in.agents) station_service += a.station_service_time * station_nodes;
  const BatteryModel& b = in.battery;
  const double recharge =
      station_nodes * (BatteryModel::kFirstBreak / b.beta1 + 0.1 / b.beta2 + 1.0 / b.beta3);

  const double hops =
      static_cast<double>(g.pickups().size() + g.deliveries().size() + g.stations().size() + 1);
  m.horizon = start + service + station_service + recharge + hops * g.max_cost();
  if (!std::isfinite(m.horizon) || m.horizon > 1e15) {
    throw Error("big-M horizon overflow: " + std::to_string(m.horizon));
  }
  m.time = m.horizon;
  m.objective = 4.0 * m.horizon;

  if (in.weights.big_m_override) {
    m.overridden = true;
    m.time = *in.weights.big_m_override;
    m.objective = *in.weights.big_m_override;
    m.warnings.push_back("big-M override " + std::to_string(*in.weights.big_m_override) +
                         " replaces the derived horizon " + std::to_string(m.horizon));
  }
  return m;
}

// ---------------------------------------------------------------------------

VarIndex VariableCatalog::push(Variable v) {
  const VarIndex idx = vars_.size();
  by_name_.emplace(v.name, idx);
  vars_.push_back(std::move(v));
  return idx;
}

std::optional<VarIndex> VariableCatalog::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VarIndex VariableCatalog::x(std::size_t agent, NodeId from, NodeId to) const {
  return x_[(agent * num_nodes_ + from) * num_nodes_ + to];
}

VariableCatalog VariableCatalog::build(const Instance& in, const ExpandedGraph& g) {
  VariableCatalog c;
  const std::size_t N = g.num_nodes();
  const std::size_t K = g.num_agents();
  const std::size_t R = g.num_requests();
  c.num_nodes_ = N;
  c.num_agents_ = K;
  const double inf = std::numeric_limits<double>::infinity();
  auto s = [](auto v) { return std::to_string(v); };

  c.x_.assign(K * N * N, kNoVar);
  for (std::size_t k = 0; k < K; ++k) {
    for (const Arc& a : g.arcs()) {
      if (g.kind(a.from) == NodeKind::Start && g.agent_of(a.from) != k) continue;
      c.x_[(k * N + a.from) * N + a.to] =
          c.push({"x_" + s(k) + "_" + s(a.from) + "_" + s(a.to), VarClass::X, 0.0, 1.0,
                  VarType::Binary});
      ++c.x_count_;
    }
  }

  c.y_.resize(R);
  for (std::size_t r = 0; r < R; ++r) {
    c.y_[r] = c.push({"y_" + s(r), VarClass::Y, 0.0, 1.0, VarType::Binary});
  }

  c.t_.assign(N, kNoVar);
  for (NodeId n = 0; n < N; ++n) {
    const NodeKind kind = g.kind(n);
    if (kind == NodeKind::Pickup || kind == NodeKind::Delivery || kind == NodeKind::Station) {
      c.t_[n] = c.push({"t_" + s(n), VarClass::T, 0.0, inf, VarType::Continuous});
    }
  }

  c.tau_.assign(N, kNoVar);
  for (NodeId n = 0; n < N; ++n) {
    if (!g.is_location(n)) continue;
    const Request& r = in.requests[g.request_of(n)];
    const bool active = (g.kind(n) == NodeKind::Pickup) == (r.tw_kind == TimeWindowKind::Pickup);
    c.tau_[n] = c.push({"tau_" + s(n), VarClass::Tau, 0.0, active ? inf : 0.0,
                        VarType::Continuous});
  }

  c.tr_.resize(R);
  for (std::size_t r = 0; r < R; ++r) {
    c.tr_[r] = c.push({"Tr_" + s(r), VarClass::Tr, 0.0, inf, VarType::Continuous});
  }
  c.dr_.resize(R);
  for (std::size_t r = 0; r < R; ++r) {
    c.dr_[r] = c.push({"Dr_" + s(r), VarClass::Dr, 0.0, inf, VarType::Continuous});
  }
  c.tk_.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    c.tk_[k] = c.push({"Tk_" + s(k), VarClass::Tk, 0.0, inf, VarType::Continuous});
  }
  c.mission_ = c.push({"T", VarClass::Mission, 0.0, inf, VarType::Continuous});

  const VarType load_type = in.variant.integer_loads ? VarType::Integer : VarType::Continuous;
  c.u1_.assign(N * K, kNoVar);
  c.u2_.assign(N * K, kNoVar);
  for (NodeId n = 0; n < N; ++n) {
    if (!g.is_location(n)) continue;
    for (std::size_t k = 0; k < K; ++k) {
      c.u1_[n * K + k] = c.push({"u1_" + s(n) + "_" + s(k), VarClass::U1, 0.0,
                                 static_cast<double>(in.agents[k].cap_passengers), load_type});
    }
  }
  for (NodeId n = 0; n < N; ++n) {
    if (!g.is_location(n)) continue;
    for (std::size_t k = 0; k < K; ++k) {
      c.u2_[n * K + k] = c.push({"u2_" + s(n) + "_" + s(k), VarClass::U2, 0.0,
                                 static_cast<double>(in.agents[k].cap_equipment), load_type});
    }
  }

  c.phi_.assign(N * K, kNoVar);
  for (NodeId n = 0; n < N; ++n) {
    if (g.kind(n) == NodeKind::Start) continue;
    for (std::size_t k = 0; k < K; ++k) {
      c.phi_[n * K + k] =
          c.push({"phi_" + s(n) + "_" + s(k), VarClass::Phi, 0.0, 1.0, VarType::Continuous});
    }
  }

  const BatteryModel& b = in.battery;
  const double xi_cap[3] = {BatteryModel::kFirstBreak / b.beta1,
                            (BatteryModel::kSecondBreak - BatteryModel::kFirstBreak) / b.beta2,
                            (1.0 - BatteryModel::kSecondBreak) / b.beta3};
  c.xi_.assign(N * 3, kNoVar);
  for (NodeId n : g.stations()) {
    for (int seg = 1; seg <= 3; ++seg) {
      c.xi_[n * 3 + seg - 1] = c.push({"xi_" + s(n) + "_" + s(seg), VarClass::Xi, 0.0,
                                       xi_cap[seg - 1], VarType::Continuous});
    }
  }
  c.z_.assign(N * 2, kNoVar);
  for (NodeId n : g.stations()) {
    for (int seg = 1; seg <= 2; ++seg) {
      c.z_[n * 2 + seg - 1] =
          c.push({"z_" + s(n) + "_" + s(seg), VarClass::Z, 0.0, 1.0, VarType::Binary});
    }
  }
  return c;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& known_tags() {
  static const std::vector<std::string> tags = [] {
    std::vector<std::string> t;
    for (int i = 2; i <= 40; ++i) t.push_back(std::to_string(i));
    for (const char* s : {"41a", "41b", "41c", "41d", "41e", "41f", "42", "fix-y", "hub", "omega"}) {
      t.emplace_back(s);
    }
    return t;
  }();
  return tags;
}

int tag_rank(std::string_view tag) {
  const auto& tags = known_tags();
  auto it = std::find(tags.begin(), tags.end(), tag);
  return it == tags.end() ? static_cast<int>(tags.size()) : static_cast<int>(it - tags.begin());
}

MilpModel build_model(const Instance& instance, const ExpandedGraph& graph) {
  return build_model(instance, graph, compute_big_m(instance, graph));
}

MilpModel build_model(const Instance& instance, const ExpandedGraph& graph, const BigM& big_m) {
  MilpModel model;
  model.name = instance.name.empty() ? "emdarp" : instance.name;
  model.vars = VariableCatalog::build(instance, graph);
  model.big_m = big_m;
  const BuildContext ctx{instance, graph, model.vars, model.big_m};

  ObjectiveRows obj = build_objective(ctx);
  model.objective = std::move(obj.objective);
  model.objective.normalize();
  model.objective_offset = obj.offset;

  std::vector<Constraint> rows = std::move(obj.rows);
  for (auto part : {build_flow(ctx), build_timing(ctx), build_capacity(ctx), build_energy(ctx),
                    build_hubs(ctx)}) {
    for (auto& row : part) rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Constraint& a, const Constraint& b) {
    return tag_rank(a.tag) < tag_rank(b.tag);
  });
  for (auto& row : rows) row.expr.normalize();
  model.rows = std::move(rows);

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& tag : known_tags()) model.stats.family_counts[tag] = 0;
  for (const Constraint& row : model.rows) {
    if (seen.emplace(row.tag, row.index).second) ++model.stats.family_counts[row.tag];
  }
  model.stats.num_rows = model.rows.size();
  model.stats.num_vars = model.vars.size();
  model.stats.x_count = model.vars.x_count();
  for (const Variable& v : model.vars.all()) {
    if (v.type == VarType::Binary) ++model.stats.num_binary;
    if (v.type == VarType::Integer) ++model.stats.num_integer;
  }
  return model;
}

MilpModel build_model(const Instance& instance) {
  const ExpandedGraph graph = ExpandedGraph::build(instance);
  return build_model(instance, graph);
}

std::vector<RowViolation> violated_rows(const MilpModel& model, std::span<const double> values,
                                        double tol) {
  std::vector<RowViolation> out;
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    const Constraint& row = model.rows[i];
    const double act = row.expr.evaluate(values);
    double excess = 0.0;
    switch (row.sense) {
      case Sense::LessEqual:
        excess = act - row.rhs;
        break;
      case Sense::GreaterEqual:
        excess = row.rhs - act;
        break;
      case Sense::Equal:
        excess = std::abs(act - row.rhs);
        break;
    }
    if (excess > tol) out.push_back({i, act, excess});
  }
  return out;
}

std::vector<BoundViolation> violated_bounds(const MilpModel& model,
                                            std::span<const double> values, double tol,
                                            double int_tol) {
  std::vector<BoundViolation> out;
  for (VarIndex v = 0; v < model.vars.size(); ++v) {
    const Variable& var = model.vars[v];
    const double x = values[v];
    double excess = std::max(var.lower - x, x - var.upper);
    if (var.type != VarType::Continuous) {
      const double frac = std::abs(x - std::round(x));
      if (frac > int_tol) excess = std::max(excess, frac);
    }
    if (excess > tol) out.push_back({v, x, excess});
  }
  return out;
}

}  // namespace emdarp
