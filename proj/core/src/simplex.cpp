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


#include <cmath>
#include <limits>

#include "emdarp/lp.hpp"

namespace emdarp {
namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  // Row `rows_` holds reduced costs; column `cols_` holds right-hand sides.
  double& cost(std::size_t c) { return at(rows_, c); }
  double& rhs(std::size_t r) { return at(r, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const std::size_t w = cols_ + 1;
    double* prow = &a_[pr * w];
    const double inv = 1.0 / prow[pc];
    for (std::size_t c = 0; c < w; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[r * w];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < w; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Price out basic columns from the cost row.
  void canonicalize() {
    for (std::size_t r = 0; r < rows_; ++r) {
      const double f = cost(basis_[r]);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(rows_, c) -= f * at(r, c);
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

enum class Outcome { Optimal, Unbounded, IterationLimit };

// Minimizes the cost row over columns [0, allowed).
Outcome run_simplex(Tableau& tab, std::size_t allowed, double tol, std::size_t& budget) {
  std::size_t degenerate_run = 0;
  constexpr std::size_t kBlandAfter = 50;
  while (true) {
    if (budget == 0) return Outcome::IterationLimit;
    --budget;
    const bool bland = degenerate_run >= kBlandAfter;
    std::size_t enter = allowed;
    double best = -tol;
    for (std::size_t c = 0; c < allowed; ++c) {
      const double d = tab.cost(c);
      if (d < best) {
        enter = c;
        if (bland) break;
        best = d;
      }
    }
    if (enter == allowed) return Outcome::Optimal;

    std::size_t leave = tab.rows();
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      const double a = tab.at(r, enter);
      if (a <= tol) continue;
      const double q = tab.rhs(r) / a;
      if (q < ratio - tol ||
          (q <= ratio + tol && leave < tab.rows() && tab.basis()[r] < tab.basis()[leave])) {
        ratio = std::min(ratio, q);
        leave = r;
      }
    }
    if (leave == tab.rows()) return Outcome::Unbounded;
    degenerate_run = ratio <= tol ? degenerate_run + 1 : 0;
    tab.pivot(leave, enter);
  }
}

}  // namespace

LpResult solve_lp(const LpProblem& p, double tol) {
  std::vector<LpRow> rows = p.rows;
  for (std::size_t j = 0; j < p.upper.size() && j < p.num_vars; ++j) {
    if (std::isfinite(p.upper[j])) rows.push_back({{{j, 1.0}}, 'L', p.upper[j]});
  }
  // Normalize to non-negative right-hand sides.
  for (LpRow& r : rows) {
    if (r.rhs < 0.0) {
      r.rhs = -r.rhs;
      for (auto& [j, a] : r.coefs) a = -a;
      if (r.sense == 'L') {
        r.sense = 'G';
      } else if (r.sense == 'G') {
        r.sense = 'L';
      }
    }
  }

  const std::size_t m = rows.size();
  const std::size_t n = p.num_vars;
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (const LpRow& r : rows) {
    if (r.sense != 'E') ++slacks;
    if (r.sense != 'L') ++artificials;
  }
  const std::size_t art_begin = n + slacks;
  Tableau tab(m, art_begin + artificials);

  std::size_t next_slack = n;
  std::size_t next_art = art_begin;
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const LpRow& r = rows[i];
    for (const auto& [j, a] : r.coefs) tab.at(i, j) += a;
    tab.rhs(i) = r.rhs;
    scale = std::max(scale, r.rhs);
    if (r.sense == 'L') {
      tab.at(i, next_slack) = 1.0;
      tab.basis()[i] = next_slack++;
    } else {
      if (r.sense == 'G') tab.at(i, next_slack++) = -1.0;
      tab.at(i, next_art) = 1.0;
      tab.cost(next_art) = 1.0;
      tab.basis()[i] = next_art++;
    }
  }

  LpResult result;
  std::size_t budget = 200 * (m + n + 10);
  if (artificials > 0) {
    tab.canonicalize();
    const Outcome o = run_simplex(tab, tab.cols(), tol, budget);
    if (o == Outcome::IterationLimit) {
      result.status = LpStatus::IterationLimit;
      return result;
    }
    if (-tab.rhs(m) > 1e-9 * scale) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis()[r] < art_begin) continue;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (std::abs(tab.at(r, c)) > 1e-7) {
          tab.pivot(r, c);
          break;
        }
      }
    }
  }

  for (std::size_t c = 0; c <= tab.cols(); ++c) tab.cost(c) = 0.0;
  for (std::size_t j = 0; j < n && j < p.cost.size(); ++j) tab.cost(j) = p.cost[j];
  tab.canonicalize();
  const Outcome o = run_simplex(tab, art_begin, tol, budget);
  if (o == Outcome::IterationLimit) {
    result.status = LpStatus::IterationLimit;
    return result;
  }
  if (o == Outcome::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  result.status = LpStatus::Optimal;
  result.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis()[r] < n) result.x[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n && j < p.cost.size(); ++j) result.objective += p.cost[j] * result.x[j];
  return result;
}

}  // namespace emdarp
