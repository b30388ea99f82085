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

// Bellman operator and backward-sweep cut construction.
//
// A backward cut for Q_t is fitted through (T f)(y) at the n + 1 points
// y in Y_+(x_ref). When the continuation f is submodular on Z(x_ref) the
// fit uses f itself (case I). Otherwise it uses the supporting cut of f at
// x_ref whose Bellman image at x_ref is smallest (case II); a single cut is
// affine, hence submodular, so the fitted hyperplane still separates.
//
// On the boundary of X some points x_ref + 1_s leave the box. The fit then
// uses only the points inside X, which separates T f on the face of X where
// the saturated coordinates sit at their maximum, and gives every saturated
// dimension a slope steep enough that the cut stays above the problem's
// initial upper bound everywhere off that face.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gbdp/problem.hpp"
#include "gbdp/pwa_value.hpp"
#include "gbdp/state.hpp"
#include "gbdp/submodularity.hpp"

namespace gbdp {

struct BellmanResult {
  double value = 0.0;
  Decision decision;
};

/// sum_y P_{x,y}(d) (g(x,y,d) + continuation[y]); zero-probability
/// successors are skipped so infinite revenues or values there never enter.
template <DynamicProgram P>
double bellman_objective(const P& problem, const StateVec& x, const Decision& d,
                         std::span<const double> continuation) {
  const TransitionDistribution probs = problem.transition(x, d);
  double value = 0.0;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (probs[s] == 0.0) continue;
    value += probs[s] * (problem.stage_revenue(x, x.step(s), d) + continuation[s]);
  }
  return value;
}

/// (T f)(x) from continuation values at successors(x).
template <DynamicProgram P>
BellmanResult bellman_from_values(const P& problem, const StateVec& x, std::span<const double> continuation) {
  if (continuation.size() != x.size() + 1) throw std::invalid_argument("bellman: expected n + 1 continuation values");
  DecisionResult best = problem.best_decision(x, continuation);
  BellmanResult out;
  out.value = bellman_objective(problem, x, best.decision, continuation);
  out.decision = std::move(best.decision);
  return out;
}

/// (T f)(x) for a point-evaluable continuation f.
template <DynamicProgram P, class F>
BellmanResult bellman_apply(const P& problem, const F& f, const StateVec& x) {
  require_same_dimension(x, problem.space().upper());
  std::vector<double> continuation(x.size() + 1);
  for (std::size_t s = 0; s <= x.size(); ++s) continuation[s] = f(x.step(s));
  return bellman_from_values(problem, x, continuation);
}

enum class CutCase { submodular, fallback };

struct CutOutcome {
  Hyperplane cut;
  CutCase branch = CutCase::submodular;
  /// Case II only: index of the cut of f whose image was fitted.
  std::size_t chosen = 0;
};

/// Fits a cut through the in-box points of Y_+(anchor). Entries of `values`
/// at successors outside X are ignored; those dimensions receive a slope -M
/// with M chosen so that the cut dominates `ceiling` on X away from the face
/// {x in X : x_s = x_bar_s for every saturated s}.
inline Hyperplane fit_boundary_cut(const StateVec& anchor, std::span<const double> values, const StateSpace& space,
                                   const Hyperplane& ceiling) {
  const std::size_t n = anchor.size();
  const StateVec& upper = space.upper();
  std::vector<double> inside(values.begin(), values.end());
  std::vector<std::size_t> saturated;
  for (std::size_t s = 0; s < n; ++s) {
    if (anchor[s] >= upper[s]) {
      saturated.push_back(s);
      inside[s + 1] = values[0];
    }
  }
  Hyperplane cut = fit_hyperplane(anchor, inside);
  if (saturated.empty()) return cut;

  // Largest excess of the ceiling over the face fit anywhere on X; the
  // excess is affine, so its maximum sits at a vertex of the box.
  double excess = ceiling.offset - cut.offset;
  for (std::size_t k = 0; k < n; ++k) excess += std::max(0.0, (ceiling.slope[k] - cut.slope[k]) * upper[k]);
  double steep = std::max(0.0, excess);
  steep += 1e-9 * (1.0 + steep);
  for (std::size_t s : saturated) {
    cut.slope[s] = -steep;
    cut.offset += steep * upper[s];
  }
  return cut;
}

/// Hyperplane through (y, (T f)(y) + eps_opt) for y in Y_+(x_ref) within X
/// (see fit_boundary_cut for anchors on the boundary).
template <DynamicProgram P, class F>
Hyperplane case1_cut(const P& problem, const F& f, const StateVec& x_ref, double eps_opt = 0.0) {
  const StateSpace& space = problem.space();
  if (!space.contains(x_ref)) throw std::invalid_argument("case1_cut: anchor outside X");
  std::vector<double> values(x_ref.size() + 1, 0.0);
  for (std::size_t s = 0; s <= x_ref.size(); ++s) {
    const StateVec y = x_ref.step(s);
    if (space.contains(y)) values[s] = bellman_apply(problem, f, y).value + eps_opt;
  }
  return fit_boundary_cut(x_ref, values, space, problem.initial_upper_bound());
}

/// Case II: among the cuts of q supporting at x_ref, pick the one with the
/// smallest (T H_j)(x_ref) (lowest index on ties) and fit its image.
template <DynamicProgram P>
CutOutcome case2_cut(const P& problem, PwaView q, const StateVec& x_ref, double eps_opt = 0.0,
                     double tie_tol = -1.0) {
  const std::vector<std::size_t> support = q.supporting_indices(x_ref, tie_tol);
  std::size_t chosen = support.front();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j : support) {
    const double v = bellman_apply(problem, q.cuts()[j], x_ref).value;
    if (v < best) {
      best = v;
      chosen = j;
    }
  }
  CutOutcome out;
  out.cut = case1_cut(problem, q.cuts()[chosen], x_ref, eps_opt);
  out.branch = CutCase::fallback;
  out.chosen = chosen;
  return out;
}

/// Dispatches on submodularity of q over Z(x_ref). The local values of q are
/// computed once and shared by the test and the case I fit.
template <DynamicProgram P>
CutOutcome backward_cut(const P& problem, PwaView q, const StateVec& x_ref, double eps_opt = 0.0) {
  const StateSpace& space = problem.space();
  if (!space.contains(x_ref)) throw std::invalid_argument("backward_cut: anchor outside X");
  const LocalPatch patch(q, x_ref);
  if (!patch.check(/*stop_at_first=*/true).holds) return case2_cut(problem, q, x_ref, eps_opt);

  const std::size_t n = x_ref.size();
  std::vector<double> continuation(n + 1);
  std::vector<double> values(n + 1, 0.0);
  for (std::size_t s = 0; s <= n; ++s) {
    const StateVec y = x_ref.step(s);
    if (!space.contains(y)) continue;
    patch.successor_values(s, continuation);
    values[s] = bellman_from_values(problem, y, continuation).value + eps_opt;
  }
  return CutOutcome{fit_boundary_cut(x_ref, values, space, problem.initial_upper_bound()), CutCase::submodular, 0};
}

/// Backward cut against the exact terminal value. Case I is the only valid
/// branch; a terminal value that fails the local test violates the
/// submodularity requirement on C and is reported as such.
template <DynamicProgram P, class F>
CutOutcome backward_cut_terminal(const P& problem, const F& terminal, const StateVec& x_ref, double eps_opt = 0.0) {
  const SubmodularityReport report = is_submodular_on(terminal, local_check_set(x_ref));
  if (!report.holds) {
    throw AssumptionViolation("terminal value is not submodular near " + x_ref.to_string() +
                              " (violation " + std::to_string(report.worst_violation) + ")");
  }
  return CutOutcome{case1_cut(problem, terminal, x_ref, eps_opt), CutCase::submodular, 0};
}

}  // namespace gbdp
