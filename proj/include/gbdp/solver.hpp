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

// Gradient-bounded dynamic programming.
//
// Each iteration simulates one path from x_1 = 0 under the policy that is
// greedy with respect to the current approximations (forward sweep, giving a
// sample l(i) of the policy's profit, a stochastic lower bound on V_1(0)),
// then walks the path backwards adding one cut per epoch (backward sweep).
// Every Q_t stays an upper bound on V_t, so u(i) = Q_1(0) is a deterministic
// upper bound on V_1(0).

#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gbdp/bellman.hpp"
#include "gbdp/exact.hpp"
#include "gbdp/parallel.hpp"
#include "gbdp/problem.hpp"
#include "gbdp/pwa_value.hpp"
#include "gbdp/rng.hpp"
#include "gbdp/state.hpp"

namespace gbdp {

enum class ResampleMode { off, oracle_assisted };

/// Which path state anchors the cut added to Q_t: x_{t+1} (next) or x_t.
enum class CutAnchor { next, current };

struct SolverConfig {
  int i_max = 100;
  std::uint64_t seed = 42;
  ResampleMode resample_mode = ResampleMode::off;
  /// Added to every interpolated Bellman value to absorb decision-oracle
  /// suboptimality.
  double eps_opt = 0.0;
  CutAnchor cut_anchor = CutAnchor::next;
  /// Build the cut for Q_t from Q_{t+1} as it was before this sweep instead
  /// of the freshly cut one.
  bool stale_continuation = false;

  void validate() const {
    if (i_max < 1) throw std::invalid_argument("SolverConfig: i_max must be >= 1");
    if (!(eps_opt >= 0.0) || !std::isfinite(eps_opt)) throw std::invalid_argument("SolverConfig: eps_opt must be >= 0");
  }
};

/// x_1..x_{t_bar+1}, d_1..d_{t_bar} and the successor index drawn per epoch.
struct SamplePath {
  std::vector<StateVec> states;
  std::vector<Decision> decisions;
  std::vector<std::size_t> branches;

  /// x_t for t in 1..t_bar + 1.
  const StateVec& state(int t) const { return states.at(static_cast<std::size_t>(t - 1)); }
};

struct IterationRecord {
  int iter = 0;
  double lower_sample = 0.0;
  double upper_bound = 0.0;
  double cum_avg_lower = 0.0;
  int case1_count = 0;
  int case2_count = 0;
  int resample_count = 0;
  double wall_ms = 0.0;
};

using BoundsTrace = std::vector<IterationRecord>;

struct ForwardResult {
  SamplePath path;
  double profit = 0.0;
  int resamples = 0;
};

/// Oracle-assisted resampling: if Q_t is already exact at the drawn x_{t+1},
/// move to a uniformly chosen y in successors(x_t) within X where Q_t is
/// still above V_t. Returns x_next unchanged when there is none.
inline StateVec resample_if_converged(PwaView q_t, const StateVec& x_t, const StateVec& x_next, int t,
                                      const ExactValueTable& exact, Rng& rng, double tol = 1e-8) {
  const StateSpace& space = exact.space();
  if (std::abs(q_t.evaluate(x_next) - exact.at(t, x_next)) > tol) return x_next;
  std::vector<StateVec> open;
  for (const StateVec& y : successors(x_t, space)) {
    if (space.contains(y) && q_t.evaluate(y) > exact.at(t, y) + tol) open.push_back(y);
  }
  if (open.empty()) return x_next;
  return open[rng.index_below(open.size())];
}

namespace detail {

inline std::size_t branch_of(const StateVec& x, const StateVec& y) {
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (y[s] != x[s]) return s + 1;
  }
  return 0;
}

}  // namespace detail

/// Simulates one path from x_1 = 0 acting greedily on the stack and returns
/// l = sum_t g(x_t, x_{t+1}, d_t) - C(x_{t_bar+1}). With `exact` set, the
/// oracle-assisted resampling rule is applied after every draw; a resampled
/// move into a closed dimension earns no stage revenue.
template <DynamicProgram P>
ForwardResult forward_sweep(const P& problem, const ValueStack& stack, Rng& rng,
                            const ExactValueTable* exact = nullptr) {
  const int t_bar = stack.t_bar();
  if (t_bar != problem.horizon().t_bar) throw std::invalid_argument("forward_sweep: horizon mismatch");
  const std::size_t n = problem.space().dim();

  ForwardResult out;
  out.path.states.reserve(static_cast<std::size_t>(t_bar) + 1);
  out.path.decisions.reserve(static_cast<std::size_t>(t_bar));
  out.path.branches.reserve(static_cast<std::size_t>(t_bar));
  out.path.states.emplace_back(n);

  std::vector<double> continuation(n + 1);
  double profit = 0.0;
  for (int t = 1; t <= t_bar; ++t) {
    const StateVec& x = out.path.states.back();
    if (t < t_bar) {
      stack.stage(t + 1).view().evaluate_successors(x, continuation);
    } else {
      for (std::size_t s = 0; s <= n; ++s) continuation[s] = stack.terminal()(x.step(s));
    }
    Decision d = problem.best_decision(x, continuation).decision;
    const TransitionDistribution probs = problem.transition(x, d);
    std::size_t branch = sample_categorical(probs, rng.uniform());
    StateVec next = x.step(branch);
    if (exact != nullptr) {
      StateVec moved = resample_if_converged(stack.stage(t).view(), x, next, t, *exact, rng);
      if (moved != next) {
        ++out.resamples;
        next = std::move(moved);
        branch = detail::branch_of(x, next);
      }
    }
    if (probs[branch] > 0.0) profit += problem.stage_revenue(x, next, d);
    out.path.decisions.push_back(std::move(d));
    out.path.branches.push_back(branch);
    out.path.states.push_back(std::move(next));
  }
  profit -= problem.terminal_cost(out.path.states.back());
  out.profit = profit;
  return out;
}

struct SweepStats {
  int case1 = 0;
  int case2 = 0;
};

/// Adds one cut to every Q_t, t = t_bar down to 1, along `path`.
template <DynamicProgram P>
SweepStats backward_sweep(const P& problem, ValueStack& stack, const SamplePath& path, const SolverConfig& config,
                          int iteration) {
  const int t_bar = stack.t_bar();
  if (path.states.size() != static_cast<std::size_t>(t_bar) + 1) {
    throw std::invalid_argument("backward_sweep: path length does not match the horizon");
  }
  std::vector<std::size_t> counts;
  if (config.stale_continuation) {
    for (const auto& q : stack.stages()) counts.push_back(q.size());
  }
  SweepStats stats;
  for (int t = t_bar; t >= 1; --t) {
    const StateVec& anchor = config.cut_anchor == CutAnchor::next ? path.state(t + 1) : path.state(t);
    CutOutcome outcome;
    if (t == t_bar) {
      outcome = backward_cut_terminal(problem, stack.terminal(), anchor, config.eps_opt);
    } else {
      const PwaValue& next = stack.stage(t + 1);
      const PwaView view = config.stale_continuation ? next.view(counts[static_cast<std::size_t>(t)]) : next.view();
      outcome = backward_cut(problem, view, anchor, config.eps_opt);
    }
    (outcome.branch == CutCase::submodular ? stats.case1 : stats.case2)++;
    stack.stage(t).add_cut(std::move(outcome.cut), iteration);
  }
  return stats;
}

/// Fresh stack: every Q_t equals the problem's initial upper bound; the
/// terminal is the problem's exact terminal value.
template <DynamicProgram P>
ValueStack initial_stack(const P& problem) {
  return ValueStack::uniform(problem.horizon().t_bar, problem.initial_upper_bound(),
                             [problem](const StateVec& x) { return problem.terminal_value(x); });
}

struct TrainResult {
  ValueStack stack;
  BoundsTrace trace;
};

using IterationCallback = std::function<void(const IterationRecord&, const ValueStack&)>;

/// Runs i_max forward/backward iterations. `on_iteration` sees each record,
/// and the stack it describes, as soon as the iteration is complete.
/// Oracle-assisted resampling needs `exact`.
template <DynamicProgram P>
TrainResult train(const P& problem, const SolverConfig& config, const IterationCallback& on_iteration = {},
                  const ExactValueTable* exact = nullptr) {
  config.validate();
  if (config.resample_mode == ResampleMode::oracle_assisted && exact == nullptr) {
    throw std::invalid_argument("train: oracle-assisted resampling needs an exact value table");
  }
  const ExactValueTable* resample_table = config.resample_mode == ResampleMode::oracle_assisted ? exact : nullptr;

  TrainResult result{initial_stack(problem), {}};
  const StateVec origin(problem.space().dim());
  double lower_sum = 0.0;
  for (int i = 1; i <= config.i_max; ++i) {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(stream_seed(config.seed, kTrainingStream, static_cast<std::uint64_t>(i)));
    const ForwardResult forward = forward_sweep(problem, result.stack, rng, resample_table);
    const SweepStats stats = backward_sweep(problem, result.stack, forward.path, config, i);
    const auto stop = std::chrono::steady_clock::now();

    lower_sum += forward.profit;
    IterationRecord record;
    record.iter = i;
    record.lower_sample = forward.profit;
    record.upper_bound = result.stack.stage(1).evaluate(origin);
    record.cum_avg_lower = lower_sum / i;
    record.case1_count = stats.case1;
    record.case2_count = stats.case2;
    record.resample_count = forward.resamples;
    record.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    result.trace.push_back(record);
    if (on_iteration) on_iteration(record, result.stack);
  }
  return result;
}

/// Profits of `replications` independent forward sweeps on a frozen stack.
/// Replication k draws from its own stream, so results are ordered and
/// reproducible regardless of how work is scheduled.
template <DynamicProgram P>
std::vector<double> simulate(const P& problem, const ValueStack& stack, std::size_t replications, std::uint64_t seed) {
  std::vector<double> profits(replications);
  parallel_for(replications, [&](std::size_t k) {
    Rng rng(stream_seed(seed, kSimulationStream, k));
    profits[k] = forward_sweep(problem, stack, rng).profit;
  }, 1);
  return profits;
}

}  // namespace gbdp
