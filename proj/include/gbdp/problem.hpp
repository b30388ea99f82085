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

#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbdp/pwa_value.hpp"
#include "gbdp/state.hpp"

namespace gbdp {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The decision oracle found no feasible decision.
class InfeasibleDecision : public Error {
 public:
  using Error::Error;
};

/// A structural assumption (submodular terminal value, ...) was observed to
/// fail on the data.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

/// One control per dimension. An empty entry is the "closed" control (an
/// infinite price for pricing problems): that dimension cannot be entered.
struct Decision {
  std::vector<std::optional<double>> controls;

  std::size_t size() const { return controls.size(); }
  bool closed(std::size_t s) const { return !controls[s].has_value(); }

  static Decision all_closed(std::size_t n) { return Decision{std::vector<std::optional<double>>(n)}; }

  friend bool operator==(const Decision&, const Decision&) = default;
};

/// Probabilities over Y_+(x) in successor order (stay first).
using TransitionDistribution = std::vector<double>;

/// Checks the distribution invariants: n + 1 nonnegative entries summing to
/// one within `tol`.
inline void check_distribution(const TransitionDistribution& p, std::size_t n, double tol = 1e-12) {
  if (p.size() != n + 1) throw std::invalid_argument("transition distribution has wrong length");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("transition distribution has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw std::invalid_argument("transition distribution sums to " + std::to_string(sum));
  }
}

/// Decision chosen by a problem's oracle and the objective it attains.
struct DecisionResult {
  Decision decision;
  double objective = 0.0;
};

/// The contract a finite-horizon lattice DP exposes to the solver.
///
/// - `space()` is the box X and `horizon()` the epochs T.
/// - `transition(x, d)` returns P_{x,y}(d) over `successors(x)`.
/// - `stage_revenue(x, y, d)` is g(x, y, d) for y in Y_+(x).
/// - `terminal_cost(x)` is C(x); it may be +inf outside X.
/// - `terminal_value(x)` is a finite extension of -C to the nonnegative
///   orthant; it must equal -C on X.
/// - `best_decision(x, continuation)` maximises
///   sum_y P_{x,y}(d) (g(x,y,d) + continuation[y]) over D, where
///   `continuation` holds values at `successors(x)`.
/// - `initial_upper_bound()` is an affine function dominating every V_t.
///
/// At a state on the boundary of X the decision oracle must give every
/// successor outside X probability zero (its continuation entry may hold
/// any finite placeholder).
///
/// Implementations are immutable after construction and safe to share
/// between threads.
template <class P>
concept DynamicProgram = requires(const P& p, const StateVec& x, const Decision& d,
                                  std::span<const double> continuation) {
  { p.space() } -> std::convertible_to<const StateSpace&>;
  { p.horizon() } -> std::convertible_to<HorizonSpec>;
  { p.transition(x, d) } -> std::convertible_to<TransitionDistribution>;
  { p.stage_revenue(x, x, d) } -> std::convertible_to<double>;
  { p.terminal_cost(x) } -> std::convertible_to<double>;
  { p.terminal_value(x) } -> std::convertible_to<double>;
  { p.best_decision(x, continuation) } -> std::convertible_to<DecisionResult>;
  { p.initial_upper_bound() } -> std::convertible_to<Hyperplane>;
};

}  // namespace gbdp
