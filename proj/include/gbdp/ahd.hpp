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

// Attended home delivery slot pricing.
//
// In every epoch a customer arrives with probability lambda and picks slot s
// with multinomial-logit weight exp(beta_c + beta_s + beta_d * d_s), or
// leaves (weight 1). Each order earns r + d_s; delivery costs
// C(x) = c_unit * 1'x are settled after the booking horizon. Slot s can take
// at most x_bar_s orders; a full slot is closed (infinite price).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbdp/problem.hpp"
#include "gbdp/pwa_value.hpp"
#include "gbdp/state.hpp"

namespace gbdp::ahd {

struct MnlParams {
  double lambda = 0.008;
  double beta_c = 0.0;
  std::vector<double> beta_s;
  double beta_d = -0.3;
  double r = 34.53;
  double d_lo = 0.0;
  double d_hi = 10.0;
  double c_unit = 0.083;
  StateVec x_bar;
  int t_bar = 1;
  /// When set, finite prices are restricted to this list instead of the box.
  std::optional<std::vector<double>> price_grid;

  std::size_t slots() const { return x_bar.size(); }

  void validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("MnlParams: " + what); };
    if (!(lambda > 0.0 && lambda < 1.0)) fail("lambda must lie in (0, 1)");
    if (!(beta_d < 0.0)) fail("beta_d must be negative");
    if (!(d_lo <= d_hi)) fail("d_lo must not exceed d_hi");
    if (x_bar.size() == 0) fail("x_bar must have at least one slot");
    if (beta_s.size() != x_bar.size()) fail("beta_s must have one entry per slot");
    if (t_bar < 1) fail("t_bar must be >= 1");
    for (double v : {beta_c, r, d_lo, d_hi, c_unit}) {
      if (!std::isfinite(v)) fail("parameters must be finite");
    }
    for (double b : beta_s) {
      if (!std::isfinite(b)) fail("beta_s must be finite");
    }
    if (price_grid) {
      for (double p : *price_grid) {
        if (!std::isfinite(p)) fail("price grid entries must be finite");
      }
    }
  }
};

inline bool saturated(const MnlParams& params, const StateVec& x, std::size_t s) { return x[s] >= params.x_bar[s]; }

inline void require_slots(const MnlParams& params, const StateVec& x) {
  if (x.size() != params.slots()) throw std::invalid_argument("AHD: state has the wrong number of slots");
}

inline bool price_allowed(const MnlParams& params, double price) {
  if (params.price_grid) {
    return std::find(params.price_grid->begin(), params.price_grid->end(), price) != params.price_grid->end();
  }
  return price >= params.d_lo && price <= params.d_hi;
}

inline double choice_weight(const MnlParams& params, std::size_t s, double price) {
  return std::exp(params.beta_c + params.beta_s[s] + params.beta_d * price);
}

/// MNL transition: P(stay) = (1 - lambda) + lambda / (W + 1) and
/// P(s) = lambda w_s / (W + 1) with W the sum of open-slot weights.
inline TransitionDistribution choice_probs(const MnlParams& params, const StateVec& x, const Decision& d) {
  require_slots(params, x);
  const std::size_t n = params.slots();
  if (d.size() != n) throw std::invalid_argument("choice_probs: decision has the wrong number of slots");
  std::vector<double> weights(n, 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    if (d.closed(s)) continue;
    const double price = *d.controls[s];
    if (!price_allowed(params, price)) {
      throw std::invalid_argument("choice_probs: price " + std::to_string(price) + " outside the price set");
    }
    if (saturated(params, x, s)) throw InfeasibleDecision("choice_probs: saturated slot must be closed");
    weights[s] = choice_weight(params, s, price);
    total += weights[s];
  }
  TransitionDistribution p(n + 1);
  const double denom = total + 1.0;
  p[0] = (1.0 - params.lambda) + params.lambda / denom;
  for (std::size_t s = 0; s < n; ++s) p[s + 1] = params.lambda * weights[s] / denom;
  return p;
}

/// g(x, y, d): r + d_s when y = x + 1_s, zero when y = x. A purchase in a
/// closed slot has probability zero and is reported as +inf.
inline double stage_revenue(const MnlParams& params, const StateVec& x, const StateVec& y, const Decision& d) {
  require_slots(params, x);
  require_same_dimension(x, y);
  if (d.size() != params.slots()) throw std::invalid_argument("stage_revenue: decision has the wrong number of slots");
  std::size_t moved = 0;
  std::size_t slot = 0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    const int diff = y[s] - x[s];
    if (diff == 0) continue;
    if (diff != 1) throw std::invalid_argument("stage_revenue: y is not a successor of x");
    ++moved;
    slot = s;
  }
  if (moved == 0) return 0.0;
  if (moved > 1) throw std::invalid_argument("stage_revenue: y is not a successor of x");
  if (d.closed(slot)) return std::numeric_limits<double>::infinity();
  return params.r + *d.controls[slot];
}

/// C(x) = c_unit * 1'x on X, +inf outside.
inline double terminal_cost(const MnlParams& params, const StateVec& x) {
  require_slots(params, x);
  if (!dominated_by(x, params.x_bar)) return std::numeric_limits<double>::infinity();
  return params.c_unit * static_cast<double>(x.total());
}

/// Affine fixed point V*(x) = (d_hi + r) 1'(x_bar - x) - C(x_bar); it
/// dominates every V_t.
inline Hyperplane fixed_point_init(const MnlParams& params) {
  const double markup = params.d_hi + params.r;
  Hyperplane h;
  h.slope.assign(params.slots(), -markup);
  h.offset = markup * static_cast<double>(params.x_bar.total()) - terminal_cost(params, params.x_bar);
  return h;
}

namespace detail {

// Best finite price for one slot when the optimal expected margin is
// `level`: maximises w(d) (d + margin - level). Returns false when closing
// the slot is at least as good.
inline bool best_slot_price(const MnlParams& params, std::size_t s, double margin, double level, double& price) {
  double best_price = 0.0;
  double best_gain = 0.0;
  bool open = false;
  auto consider = [&](double p) {
    const double gain = choice_weight(params, s, p) * (p + margin - level);
    if (gain > best_gain) {
      best_gain = gain;
      best_price = p;
      open = true;
    }
  };
  if (params.price_grid) {
    for (double p : *params.price_grid) consider(p);
  } else {
    // w(d) (d + margin - level) is unimodal in d with its peak where
    // d + margin - level = -1 / beta_d.
    consider(std::clamp(level - margin - 1.0 / params.beta_d, params.d_lo, params.d_hi));
  }
  price = best_price;
  return open;
}

}  // namespace detail

/// Revenue-maximising prices at x given continuation values at
/// successors(x). The objective is
///   f(x) + lambda * sum_s w_s (r + d_s + f(x + 1_s) - f(x)) / (W + 1),
/// a ratio in the open-slot weights. Its optimum R* solves
///   max_d sum_s w_s (d_s + m_s - R) = R,  m_s = r + f(x + 1_s) - f(x),
/// which separates per slot: every open slot carries the same markup
/// d_s + m_s = R - 1/beta_d, clipped to the price box, and a slot closes when
/// no price earns a positive margin over R. Newton's method on the scalar
/// equation reduces to R <- objective ratio of the prices chosen at R; it
/// increases monotonically from R = 0 and converges quadratically.
inline DecisionResult optimal_prices(const MnlParams& params, const StateVec& x, std::span<const double> continuation) {
  require_slots(params, x);
  const std::size_t n = params.slots();
  if (continuation.size() != n + 1) throw std::invalid_argument("optimal_prices: expected n + 1 continuation values");
  const double stay = continuation[0];
  if (!std::isfinite(stay)) throw std::invalid_argument("optimal_prices: non-finite continuation at x");

  std::vector<double> margin(n, 0.0);
  std::vector<bool> available(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (saturated(params, x, s)) continue;
    if (!std::isfinite(continuation[s + 1])) throw std::invalid_argument("optimal_prices: non-finite continuation");
    available[s] = true;
    margin[s] = params.r + continuation[s + 1] - stay;
  }

  Decision decision = Decision::all_closed(n);
  double level = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    Decision candidate = Decision::all_closed(n);
    double numer = 0.0;
    double denom = 1.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (!available[s]) continue;
      double price = 0.0;
      if (!detail::best_slot_price(params, s, margin[s], level, price)) continue;
      candidate.controls[s] = price;
      const double w = choice_weight(params, s, price);
      numer += w * (price + margin[s]);
      denom += w;
    }
    const double next = numer / denom;
    // Iterates never decrease in exact arithmetic; keep the previous
    // decision if rounding says otherwise so `level` stays attained.
    const bool done = next <= level + 1e-15 * (1.0 + std::abs(next));
    if (iter == 0 || next >= level) {
      decision = std::move(candidate);
      level = next;
    }
    if (done) break;
  }
  return DecisionResult{std::move(decision), stay + params.lambda * level};
}

/// Objective of a given decision, evaluated from the choice probabilities.
inline double pricing_objective(const MnlParams& params, const StateVec& x, const Decision& d,
                                std::span<const double> continuation) {
  const TransitionDistribution p = choice_probs(params, x, d);
  double value = p[0] * continuation[0];
  for (std::size_t s = 0; s < params.slots(); ++s) {
    if (p[s + 1] == 0.0) continue;
    value += p[s + 1] * (params.r + *d.controls[s] + continuation[s + 1]);
  }
  return value;
}

/// Brute-force joint grid search over ({d_lo, d_lo + step, ..., d_hi} or the
/// price grid) plus the closed option for every available slot. n <= 3.
inline DecisionResult grid_search_prices(const MnlParams& params, const StateVec& x,
                                         std::span<const double> continuation, double step = 0.01) {
  require_slots(params, x);
  const std::size_t n = params.slots();
  if (n > 3) throw std::invalid_argument("grid_search_prices: at most three slots");
  if (continuation.size() != n + 1) throw std::invalid_argument("grid_search_prices: expected n + 1 values");

  std::vector<double> prices;
  if (params.price_grid) {
    prices = *params.price_grid;
  } else {
    const auto steps = static_cast<long>(std::llround((params.d_hi - params.d_lo) / step));
    for (long k = 0; k <= steps; ++k) prices.push_back(std::min(params.d_hi, params.d_lo + static_cast<double>(k) * step));
  }

  // Per-slot options: index 0 is closed, then the prices. Precompute weight
  // and weighted purchase value w * (r + d + f(x + 1_s)).
  struct Option {
    std::optional<double> price;
    double weight = 0.0;
    double weighted_value = 0.0;
  };
  std::vector<std::vector<Option>> options(n);
  for (std::size_t s = 0; s < n; ++s) {
    options[s].push_back(Option{});
    if (saturated(params, x, s)) continue;
    for (double p : prices) {
      const double w = choice_weight(params, s, p);
      options[s].push_back(Option{p, w, w * (params.r + p + continuation[s + 1])});
    }
  }

  DecisionResult best{Decision::all_closed(n), -std::numeric_limits<double>::infinity()};
  std::vector<std::size_t> pick(n, 0);
  auto evaluate = [&]() {
    double total_weight = 0.0;
    double total_value = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      total_weight += options[s][pick[s]].weight;
      total_value += options[s][pick[s]].weighted_value;
    }
    const double denom = total_weight + 1.0;
    const double value =
        ((1.0 - params.lambda) + params.lambda / denom) * continuation[0] + params.lambda * total_value / denom;
    if (value > best.objective) {
      best.objective = value;
      for (std::size_t s = 0; s < n; ++s) best.decision.controls[s] = options[s][pick[s]].price;
    }
  };
  // Odometer over the joint grid.
  while (true) {
    evaluate();
    std::size_t s = 0;
    while (s < n && ++pick[s] == options[s].size()) pick[s++] = 0;
    if (s == n) break;
  }
  return best;
}

/// The pricing problem as a DynamicProgram.
class AhdProblem {
 public:
  explicit AhdProblem(MnlParams params)
      : params_(std::move(params)), space_((params_.validate(), params_.x_bar)), horizon_(params_.t_bar) {}

  const MnlParams& params() const { return params_; }
  const StateSpace& space() const { return space_; }
  HorizonSpec horizon() const { return horizon_; }

  TransitionDistribution transition(const StateVec& x, const Decision& d) const { return choice_probs(params_, x, d); }
  double stage_revenue(const StateVec& x, const StateVec& y, const Decision& d) const {
    return ahd::stage_revenue(params_, x, y, d);
  }
  double terminal_cost(const StateVec& x) const { return ahd::terminal_cost(params_, x); }
  /// -c_unit * 1'x on the whole orthant.
  double terminal_value(const StateVec& x) const {
    require_slots(params_, x);
    return -params_.c_unit * static_cast<double>(x.total());
  }
  DecisionResult best_decision(const StateVec& x, std::span<const double> continuation) const {
    return optimal_prices(params_, x, continuation);
  }
  Hyperplane initial_upper_bound() const { return fixed_point_init(params_); }

 private:
  MnlParams params_;
  StateSpace space_;
  HorizonSpec horizon_;
};

static_assert(DynamicProgram<AhdProblem>);

}  // namespace gbdp::ahd
