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

// Piecewise-affine value approximations: Q(x) = min_j <a_j, x> + b_j.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gbdp/state.hpp"

namespace gbdp {

/// H(x) = <slope, x> + offset.
struct Hyperplane {
  std::vector<double> slope;
  double offset = 0.0;

  static Hyperplane constant(std::size_t n, double value) { return Hyperplane{std::vector<double>(n, 0.0), value}; }

  std::size_t dim() const { return slope.size(); }

  bool finite() const {
    if (!std::isfinite(offset)) return false;
    return std::all_of(slope.begin(), slope.end(), [](double v) { return std::isfinite(v); });
  }

  double operator()(const StateVec& x) const {
    if (x.size() != slope.size()) throw std::invalid_argument("Hyperplane: dimension mismatch");
    double v = offset;
    for (std::size_t s = 0; s < slope.size(); ++s) v += slope[s] * x[s];
    return v;
  }

  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
};

/// Non-owning read-only view over a cut list; evaluates as the pointwise
/// minimum. Used to read a prefix of a PwaValue's cuts.
class PwaView {
 public:
  PwaView() = default;
  explicit PwaView(std::span<const Hyperplane> cuts) : cuts_(cuts) {}

  std::span<const Hyperplane> cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }
  std::size_t dim() const { return cuts_.empty() ? 0 : cuts_.front().dim(); }

  double evaluate(const StateVec& x) const {
    if (cuts_.empty()) throw std::logic_error("evaluate: piecewise-affine function has no cuts");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& h : cuts_) best = std::min(best, h(x));
    return best;
  }
  double operator()(const StateVec& x) const { return evaluate(x); }

  /// Values at successors(x), written to `out` (size n + 1).
  void evaluate_successors(const StateVec& x, std::span<double> out) const {
    if (cuts_.empty()) throw std::logic_error("evaluate: piecewise-affine function has no cuts");
    const std::size_t n = x.size();
    std::fill(out.begin(), out.end(), std::numeric_limits<double>::infinity());
    for (const auto& h : cuts_) {
      const double base = h(x);
      out[0] = std::min(out[0], base);
      for (std::size_t s = 0; s < n; ++s) out[s + 1] = std::min(out[s + 1], base + h.slope[s]);
    }
  }

  /// J(x) = {j : H_j(x) <= Q(x) + tie_tol}; a negative tie_tol selects the
  /// default 1e-9 * (1 + |Q(x)|).
  std::vector<std::size_t> supporting_indices(const StateVec& x, double tie_tol = -1.0) const {
    const double q = evaluate(x);
    if (tie_tol < 0.0) tie_tol = 1e-9 * (1.0 + std::abs(q));
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < cuts_.size(); ++j) {
      if (cuts_[j](x) <= q + tie_tol) out.push_back(j);
    }
    return out;
  }

 private:
  std::span<const Hyperplane> cuts_;
};

/// Append-only min-of-cuts value approximation. Each cut carries the
/// iteration that produced it (0 for the initializer).
class PwaValue {
 public:
  PwaValue() = default;
  explicit PwaValue(Hyperplane initial, int iteration = 0) { add_cut(std::move(initial), iteration); }

  void add_cut(Hyperplane h, int iteration = 0) {
    if (!h.finite()) throw std::invalid_argument("add_cut: non-finite hyperplane coefficients");
    if (!cuts_.empty() && h.dim() != cuts_.front().dim()) throw std::invalid_argument("add_cut: dimension mismatch");
    cuts_.push_back(std::move(h));
    iterations_.push_back(iteration);
  }

  const std::vector<Hyperplane>& cuts() const { return cuts_; }
  const std::vector<int>& iterations() const { return iterations_; }
  std::size_t size() const { return cuts_.size(); }
  bool empty() const { return cuts_.empty(); }

  PwaView view() const { return PwaView(cuts_); }
  /// View of the first `count` cuts.
  PwaView view(std::size_t count) const { return PwaView(std::span(cuts_).first(std::min(count, cuts_.size()))); }

  double evaluate(const StateVec& x) const { return view().evaluate(x); }
  double operator()(const StateVec& x) const { return evaluate(x); }
  std::vector<std::size_t> supporting_indices(const StateVec& x, double tie_tol = -1.0) const {
    return view().supporting_indices(x, tie_tol);
  }

  /// Drops cuts that support Q nowhere on X. Desk scale only; returns the
  /// number of cuts removed.
  std::size_t compact(const StateSpace& space) {
    std::vector<bool> keep(cuts_.size(), false);
    for (const auto& x : space.states()) {
      for (std::size_t j : supporting_indices(x)) keep[j] = true;
    }
    std::vector<Hyperplane> cuts;
    std::vector<int> iterations;
    for (std::size_t j = 0; j < cuts_.size(); ++j) {
      if (keep[j]) {
        cuts.push_back(std::move(cuts_[j]));
        iterations.push_back(iterations_[j]);
      }
    }
    const std::size_t removed = cuts_.size() - cuts.size();
    cuts_ = std::move(cuts);
    iterations_ = std::move(iterations);
    return removed;
  }

 private:
  std::vector<Hyperplane> cuts_;
  std::vector<int> iterations_;
};

/// The unique affine function through (anchor, values[0]) and
/// (anchor + 1_s, values[s]) for s = 1..n.
inline Hyperplane fit_hyperplane(const StateVec& anchor, std::span<const double> values) {
  const std::size_t n = anchor.size();
  if (values.size() != n + 1) throw std::invalid_argument("fit_hyperplane: expected n + 1 values");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("fit_hyperplane: non-finite value");
  }
  Hyperplane h;
  h.slope.resize(n);
  double inner = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    h.slope[s] = values[s + 1] - values[0];
    inner += h.slope[s] * anchor[s];
  }
  h.offset = values[0] - inner;
  return h;
}

/// Q_1, ..., Q_tbar plus the exact terminal value at t_bar + 1.
class ValueStack {
 public:
  using Terminal = std::function<double(const StateVec&)>;

  ValueStack() = default;
  ValueStack(std::vector<PwaValue> stages, Terminal terminal)
      : stages_(std::move(stages)), terminal_(std::move(terminal)) {
    if (stages_.empty()) throw std::invalid_argument("ValueStack: horizon must be >= 1");
  }

  /// Every Q_t starts from the same initial cut.
  static ValueStack uniform(int t_bar, const Hyperplane& initial, Terminal terminal) {
    if (t_bar < 1) throw std::invalid_argument("ValueStack: horizon must be >= 1");
    return ValueStack(std::vector<PwaValue>(static_cast<std::size_t>(t_bar), PwaValue(initial, 0)),
                      std::move(terminal));
  }

  int t_bar() const { return static_cast<int>(stages_.size()); }

  /// Q_t for t in 1..t_bar.
  PwaValue& stage(int t) { return stages_.at(static_cast<std::size_t>(t - 1)); }
  const PwaValue& stage(int t) const { return stages_.at(static_cast<std::size_t>(t - 1)); }
  const std::vector<PwaValue>& stages() const { return stages_; }

  const Terminal& terminal() const { return terminal_; }

  /// Q_t(x) for t in 1..t_bar + 1.
  double evaluate(int t, const StateVec& x) const {
    if (t == t_bar() + 1) return terminal_(x);
    return stage(t).evaluate(x);
  }

  std::size_t total_cuts() const {
    std::size_t total = 0;
    for (const auto& q : stages_) total += q.size();
    return total;
  }

 private:
  std::vector<PwaValue> stages_;
  Terminal terminal_;
};

}  // namespace gbdp
