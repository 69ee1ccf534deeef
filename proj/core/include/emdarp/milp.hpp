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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "emdarp/graph.hpp"
#include "emdarp/instance.hpp"

namespace emdarp {

enum class VarType { Continuous, Integer, Binary };

// Variable families in catalog (and export) order.
enum class VarClass { X, Y, T, Tau, Tr, Dr, Tk, Mission, U1, U2, Phi, Xi, Z };

struct Variable {
  std::string name;
  VarClass cls = VarClass::X;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  VarType type = VarType::Continuous;
};

using VarIndex = std::size_t;
inline constexpr VarIndex kNoVar = std::numeric_limits<VarIndex>::max();

struct Term {
  VarIndex var = 0;
  double coef = 0.0;
};

class LinearExpr {
 public:
  LinearExpr& add(VarIndex var, double coef);
  // Adds coef * var only when var exists.
  LinearExpr& add_if(VarIndex var, double coef) {
    return var == kNoVar ? *this : add(var, coef);
  }
  // Merges duplicate variables, drops zeros, sorts by variable index.
  void normalize();
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  double evaluate(std::span<const double> values) const;

 private:
  std::vector<Term> terms_;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
  // Formulation family: "2".."42" (with "41a".."41f"), "fix-y", "hub", "omega".
  std::string tag;
  // Readable index tuple, e.g. "r=3,k=1". A chained inequality such as
  // a <= b <= 1 is stored as two rows sharing tag and index.
  std::string index;
  LinearExpr expr;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// Per-family big-M values derived from a route-time horizon.
struct BigM {
  double horizon = 0.0;
  double time = 0.0;
  double objective = 0.0;
  bool overridden = false;
  std::vector<std::string> warnings;
};

BigM compute_big_m(const Instance& instance, const ExpandedGraph& graph);

// Every decision variable with bounds and integrality, in deterministic order
// (class, then index tuple). Names follow the frozen solution-file scheme
// x_k_i_j, y_r, t_i, tau_i, Tr_r, Dr_r, Tk_k, T, u1_i_k, u2_i_k, phi_i_k,
// xi_i_s, z_i_s with global node ids.
class VariableCatalog {
 public:
  static VariableCatalog build(const Instance& instance, const ExpandedGraph& graph);

  // Appends a free-standing variable (hand-built models); the typed lookups
  // below do not see it.
  VarIndex add(Variable v) { return push(std::move(v)); }

  std::size_t size() const { return vars_.size(); }
  const Variable& operator[](VarIndex v) const { return vars_[v]; }
  const std::vector<Variable>& all() const { return vars_; }
  std::optional<VarIndex> find(std::string_view name) const;

  // Lookups return kNoVar when the variable does not exist.
  VarIndex x(std::size_t agent, NodeId from, NodeId to) const;
  VarIndex y(std::size_t request) const { return y_[request]; }
  VarIndex t(NodeId n) const { return t_[n]; }
  VarIndex tau(NodeId n) const { return tau_[n]; }
  VarIndex tr(std::size_t request) const { return tr_[request]; }
  VarIndex dr(std::size_t request) const { return dr_[request]; }
  VarIndex tk(std::size_t agent) const { return tk_[agent]; }
  VarIndex mission() const { return mission_; }
  VarIndex u1(NodeId n, std::size_t agent) const { return u1_[n * num_agents_ + agent]; }
  VarIndex u2(NodeId n, std::size_t agent) const { return u2_[n * num_agents_ + agent]; }
  VarIndex phi(NodeId n, std::size_t agent) const { return phi_[n * num_agents_ + agent]; }
  // segment in 1..3
  VarIndex xi(NodeId n, int segment) const { return xi_[n * 3 + (segment - 1)]; }
  // segment in 1..2
  VarIndex z(NodeId n, int segment) const { return z_[n * 2 + (segment - 1)]; }

  std::size_t x_count() const { return x_count_; }

 private:
  VarIndex push(Variable v);

  std::vector<Variable> vars_;
  std::unordered_map<std::string, VarIndex> by_name_;
  std::size_t num_nodes_ = 0;
  std::size_t num_agents_ = 0;
  std::size_t x_count_ = 0;
  std::vector<VarIndex> x_;
  std::vector<VarIndex> y_, t_, tau_, tr_, dr_, tk_;
  VarIndex mission_ = kNoVar;
  std::vector<VarIndex> u1_, u2_, phi_, xi_, z_;
};

struct ModelStats {
  // Distinct (tag, index) pairs per family, keyed by tag.
  std::map<std::string, std::size_t> family_counts;
  std::size_t num_rows = 0;
  std::size_t num_vars = 0;
  std::size_t num_binary = 0;
  std::size_t num_integer = 0;
  std::size_t x_count = 0;
};

struct MilpModel {
  std::string name;
  VariableCatalog vars;
  std::vector<Constraint> rows;
  // Minimized. The constant part sum_r eta*lambda_r lives in objective_offset.
  LinearExpr objective;
  double objective_offset = 0.0;
  BigM big_m;
  ModelStats stats;

  double objective_value(std::span<const double> values) const {
    return objective.evaluate(values) + objective_offset;
  }
};

// Everything a family builder reads.
struct BuildContext {
  const Instance& instance;
  const ExpandedGraph& graph;
  const VariableCatalog& vars;
  const BigM& big_m;
};

struct ObjectiveRows {
  LinearExpr objective;
  double offset = 0.0;
  std::vector<Constraint> rows;  // tags 2..5
};

ObjectiveRows build_objective(const BuildContext& ctx);
std::vector<Constraint> build_flow(const BuildContext& ctx);      // 6..13, fix-y
std::vector<Constraint> build_timing(const BuildContext& ctx);    // 14..24, omega
std::vector<Constraint> build_capacity(const BuildContext& ctx);  // 25..33
std::vector<Constraint> build_energy(const BuildContext& ctx);    // 34..42
std::vector<Constraint> build_hubs(const BuildContext& ctx);      // hub

MilpModel build_model(const Instance& instance, const ExpandedGraph& graph);
// Same model with caller-chosen big-M values (sensitivity checks).
MilpModel build_model(const Instance& instance, const ExpandedGraph& graph, const BigM& big_m);
MilpModel build_model(const Instance& instance);

// Position of a tag in export order; unknown tags sort last.
int tag_rank(std::string_view tag);
const std::vector<std::string>& known_tags();

struct RowViolation {
  std::size_t row = 0;
  double activity = 0.0;
  double magnitude = 0.0;
};

// Rows violated by more than tol (absolute).
std::vector<RowViolation> violated_rows(const MilpModel& model, std::span<const double> values,
                                        double tol);

struct BoundViolation {
  VarIndex var = 0;
  double value = 0.0;
  double magnitude = 0.0;
};

// Bound and integrality breaches (integrality checked at int_tol).
std::vector<BoundViolation> violated_bounds(const MilpModel& model,
                                            std::span<const double> values, double tol,
                                            double int_tol);

}  // namespace emdarp
