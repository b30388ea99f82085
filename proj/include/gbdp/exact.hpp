// Copyright 2026 The GBDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact backward induction over the whole box, and desk-scale checks of
// the structural properties the approximation relies on.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gbdp/bellman.hpp"
#include "gbdp/parallel.hpp"
#include "gbdp/problem.hpp"
#include "gbdp/pwa_value.hpp"
#include "gbdp/state.hpp"
#include "gbdp/submodularity.hpp"

namespace gbdp {

/// The exact solve would need more state-time evaluations than allowed.
class CapExceeded : public Error {
 public:
  CapExceeded(double required, double cap)
      : Error(message(required, cap)), required_(required), cap_(cap) {}

  double required() const { return required_; }
  double cap() const { return cap_; }

 private:
  static std::string message(double required, double cap) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "exact solve needs %.4g state-time evaluations, cap is %.4g", required, cap);
    return buf;
  }

  double required_;
  double cap_;
};

/// V_t(x) for t in 1..t_bar + 1 and x in X, layer-major.
class ExactValueTable {
 public:
  ExactValueTable() = default;
  ExactValueTable(StateSpace space, int t_bar)
      : space_(std::move(space)), t_bar_(t_bar),
        values_(static_cast<std::size_t>(t_bar + 1) * space_.cardinality(), 0.0) {}

  const StateSpace& space() const { return space_; }
  int t_bar() const { return t_bar_; }
  std::size_t layer_size() const { return space_.cardinality(); }

  std::span<double> layer(int t) {
    check_layer(t);
    return std::span(values_).subspan(static_cast<std::size_t>(t - 1) * layer_size(), layer_size());
  }
  std::span<const double> layer(int t) const {
    check_layer(t);
    return std::span(values_).subspan(static_cast<std::size_t>(t - 1) * layer_size(), layer_size());
  }

  double at(int t, const StateVec& x) const { return layer(t)[space_.index(x)]; }
  std::span<const double> raw() const { return values_; }
  std::span<double> raw() { return values_; }

 private:
  void check_layer(int t) const {
    if (t < 1 || t > t_bar_ + 1) throw std::out_of_range("ExactValueTable: time index out of range");
  }

  StateSpace space_;
  int t_bar_ = 0;
  std::vector<double> values_;
};

/// |X| * t_bar as a floating-point count (never overflows).
inline double required_evaluations(const StateSpace& space, int t_bar) {
  return space.cardinality_estimate() * static_cast<double>(t_bar);
}

/// Full backward recursion V_t = T V_{t+1}, V_{t_bar+1} = -C, using the
/// problem's own decision oracle. States within a layer are solved in
/// parallel.
template <DynamicProgram P>
ExactValueTable exact_solve(const P& problem, double cap = 1e7) {
  const StateSpace& space = problem.space();
  const int t_bar = problem.horizon().t_bar;
  const double required = required_evaluations(space, t_bar);
  if (required > cap) throw CapExceeded(required, cap);

  ExactValueTable table(space, t_bar);
  const std::size_t states = table.layer_size();
  const std::size_t n = space.dim();
  {
    auto terminal = table.layer(t_bar + 1);
    for (std::size_t i = 0; i < states; ++i) terminal[i] = -problem.terminal_cost(space.state_at(i));
  }
  for (int t = t_bar; t >= 1; --t) {
    const auto next = std::as_const(table).layer(t + 1);
    auto current = table.layer(t);
    parallel_for(states, [&](std::size_t i) {
      const StateVec x = space.state_at(i);
      // Successors outside X carry probability zero; any finite value works.
      std::vector<double> continuation(n + 1, 0.0);
      for (std::size_t s = 0; s <= n; ++s) {
        const StateVec y = x.step(s);
        if (space.contains(y)) continuation[s] = next[space.index(y)];
      }
      current[i] = bellman_from_values(problem, x, continuation).value;
    });
  }
  return table;
}

struct GapReport {
  /// min over (x, t) of Q_t(x) - V_t(x).
  double worst_gap = std::numeric_limits<double>::infinity();
  StateVec state;
  int t = 0;
  double approximate = 0.0;
  double exact = 0.0;
};

/// Scans X x T for the smallest Q_t(x) - V_t(x).
inline GapReport verify_upper_bound(const ValueStack& stack, const ExactValueTable& table) {
  if (stack.t_bar() != table.t_bar()) throw std::invalid_argument("verify_upper_bound: horizon mismatch");
  const StateSpace& space = table.space();
  GapReport report;
  for (int t = 1; t <= stack.t_bar(); ++t) {
    const auto layer = table.layer(t);
    const PwaValue& q = stack.stage(t);
    if (q.empty() || q.cuts().front().dim() != space.dim()) {
      throw std::invalid_argument("verify_upper_bound: dimension mismatch");
    }
    for (std::size_t i = 0; i < layer.size(); ++i) {
      const StateVec x = space.state_at(i);
      const double approx = q.evaluate(x);
      const double gap = approx - layer[i];
      if (gap < report.worst_gap) {
        report.worst_gap = gap;
        report.state = x;
        report.t = t;
        report.approximate = approx;
        report.exact = layer[i];
      }
    }
  }
  return report;
}

/// Values of f at every state of X in index order.
template <class F>
std::vector<double> tabulate(const F& f, const StateSpace& space) {
  std::vector<double> out(space.cardinality());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(space.state_at(i));
  return out;
}

/// Submodular inequality over every pair of states in X (the box is closed
/// under elementwise max/min). `values` is indexed like the space.
inline SubmodularityReport check_submodular_all(std::span<const double> values, const StateSpace& space,
                                                double sub_tol = -1.0) {
  const std::size_t count = values.size();
  if (count != space.cardinality()) throw std::invalid_argument("check_submodular_all: value count mismatch");
  if (static_cast<double>(count) * static_cast<double>(count) > 1e8) {
    throw std::length_error("check_submodular_all: more than 1e8 pairs");
  }
  const std::vector<StateVec> states = space.states();
  SubmodularityReport report;
  report.tolerance = sub_tol >= 0.0 ? sub_tol : default_submodularity_tolerance(values);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (dominated_by(states[i], states[j]) || dominated_by(states[j], states[i])) continue;
      const std::size_t hi = space.index(elementwise_max(states[i], states[j]));
      const std::size_t lo = space.index(elementwise_min(states[i], states[j]));
      const double violation = (values[hi] + values[lo]) - (values[i] + values[j]);
      if (violation > report.worst_violation) {
        report.worst_violation = violation;
        report.first = i;
        report.second = j;
      }
    }
  }
  report.holds = report.worst_violation <= report.tolerance;
  return report;
}

namespace detail {

// Dense two-phase tableau simplex with Bland's rule for
//   maximise c'mu  s.t.  A mu = b, mu >= 0,  b >= 0,
// sized for a handful of rows and up to ~1e4 columns.
class TableauSimplex {
 public:
  TableauSimplex(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> c)
      : m_(a.size()), n_(c.size()) {
    width_ = n_ + m_ + 1;
    tab_.assign(m_ * width_, 0.0);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (a[i].size() != n_ || b[i] < 0.0) throw std::invalid_argument("TableauSimplex: malformed problem");
      for (std::size_t j = 0; j < n_; ++j) cell(i, j) = a[i][j];
      cell(i, n_ + i) = 1.0;
      cell(i, width_ - 1) = b[i];
      basis_[i] = n_ + i;
    }
    cost_ = std::move(c);
  }

  /// Optimal objective value; throws if infeasible.
  double solve() {
    // Phase I: maximise -sum(artificials).
    std::vector<double> phase1(n_ + m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) phase1[n_ + i] = -1.0;
    run(phase1, n_ + m_);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) infeasibility += cell(i, width_ - 1);
    }
    if (infeasibility > 1e-9) throw std::runtime_error("TableauSimplex: infeasible");
    // Pivot remaining artificials out where a structural column allows it;
    // rows that stay artificial are redundant.
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(cell(i, j)) > kPivotTol) {
          pivot(i, j);
          break;
        }
      }
    }
    std::vector<double> phase2(n_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = cost_[j];
    run(phase2, n_);
    double value = 0.0;
    for (std::size_t i = 0; i < m_; ++i) value += phase2[basis_[i]] * cell(i, width_ - 1);
    return value;
  }

 private:
  static constexpr double kPivotTol = 1e-11;
  static constexpr double kCostTol = 1e-11;

  double& cell(std::size_t i, std::size_t j) { return tab_[i * width_ + j]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = cell(row, col);
    for (std::size_t j = 0; j < width_; ++j) cell(row, j) /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double factor = cell(i, col);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) cell(i, j) -= factor * cell(row, j);
    }
    basis_[row] = col;
  }

  // Maximises cost over columns [0, allowed) from the current basis.
  void run(const std::vector<double>& cost, std::size_t allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      std::size_t entering = allowed;
      double scale = 1.0;
      for (double v : cost) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < allowed; ++j) {
        double reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i) reduced -= cost[basis_[i]] * cell(i, j);
        if (reduced > kCostTol * scale) {
          entering = j;
          break;
        }
      }
      if (entering == allowed) return;
      std::size_t leaving = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double coef = cell(i, entering);
        if (coef <= kPivotTol) continue;
        const double ratio = cell(i, width_ - 1) / coef;
        if (ratio < best_ratio - 1e-15 || (leaving < m_ && std::abs(ratio - best_ratio) <= 1e-15 && basis_[i] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving == m_) throw std::runtime_error("TableauSimplex: unbounded");
      pivot(leaving, entering);
    }
    throw std::runtime_error("TableauSimplex: iteration limit");
  }

  std::size_t m_, n_, width_ = 0;
  std::vector<double> tab_;
  std::vector<std::size_t> basis_;
  std::vector<double> cost_;
};

}  // namespace detail

/// Concave closure of f (given on X, -inf elsewhere) at x:
///   inf { a'x + b : a'y + b >= f(y) for all y in X },
/// computed through its dual
///   max { sum_y mu_y f(y) : sum_y mu_y (y, 1) = (x, 1), mu >= 0 }.
inline double concave_closure_at(std::span<const double> values, const StateSpace& space, const StateVec& x) {
  if (space.dim() > 3) throw std::invalid_argument("concave_closure_at: at most three dimensions");
  if (space.cardinality() > 10000) throw std::length_error("concave_closure_at: more than 1e4 states");
  if (values.size() != space.cardinality()) throw std::invalid_argument("concave_closure_at: value count mismatch");
  if (!space.contains(x)) throw std::out_of_range("concave_closure_at: x outside X");
  const std::size_t n = space.dim();
  const std::size_t count = values.size();
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(count, 0.0));
  std::vector<double> b(n + 1, 1.0);
  for (std::size_t k = 0; k < count; ++k) {
    const StateVec y = space.state_at(k);
    for (std::size_t s = 0; s < n; ++s) a[s][k] = y[s];
    a[n][k] = 1.0;
  }
  for (std::size_t s = 0; s < n; ++s) b[s] = x[s];
  detail::TableauSimplex lp(std::move(a), std::move(b), std::vector<double>(values.begin(), values.end()));
  return lp.solve();
}

struct ConcaveExtensibilityReport {
  bool holds = true;
  /// Largest closure(x) - f(x) over X.
  double worst_gap = 0.0;
  StateVec state;
};

/// f coincides with its concave closure on X within `tol`.
inline ConcaveExtensibilityReport check_concave_extensible(std::span<const double> values, const StateSpace& space,
                                                           double tol = 1e-8) {
  ConcaveExtensibilityReport report;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const StateVec x = space.state_at(k);
    const double gap = concave_closure_at(values, space, x) - values[k];
    if (gap > report.worst_gap) {
      report.worst_gap = gap;
      report.state = x;
    }
  }
  report.holds = report.worst_gap <= tol;
  return report;
}

}  // namespace gbdp
