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


#include <gtest/gtest.h>

#include "gbdp/ahd.hpp"
#include "gbdp/bellman.hpp"
#include "gbdp/exact.hpp"

namespace gbdp {
namespace {

ahd::MnlParams small_params(StateVec x_bar, int t_bar = 5) {
  ahd::MnlParams p;
  p.lambda = 0.3;
  p.beta_c = 0.2;
  p.beta_s = std::vector<double>(x_bar.size(), 0.0);
  p.beta_d = -0.3;
  p.r = 5.0;
  p.c_unit = 0.5;
  p.x_bar = std::move(x_bar);
  p.t_bar = t_bar;
  return p;
}

/// A problem whose only decision keeps the state where it is.
struct StayOnly {
  StateSpace box{StateVec{3, 3}};
  const StateSpace& space() const { return box; }
  HorizonSpec horizon() const { return HorizonSpec(2); }
  TransitionDistribution transition(const StateVec& x, const Decision&) const {
    TransitionDistribution p(x.size() + 1, 0.0);
    p[0] = 1.0;
    return p;
  }
  double stage_revenue(const StateVec&, const StateVec&, const Decision&) const { return 0.0; }
  double terminal_cost(const StateVec&) const { return 0.0; }
  double terminal_value(const StateVec&) const { return 0.0; }
  DecisionResult best_decision(const StateVec& x, std::span<const double> c) const {
    return {Decision::all_closed(x.size()), c[0]};
  }
  Hyperplane initial_upper_bound() const { return Hyperplane{{0.0, 0.0}, 100.0}; }
};
static_assert(DynamicProgram<StayOnly>);

TEST(BellmanApply, FullStateIsAbsorbing) {
  const ahd::AhdProblem problem(small_params(StateVec{2, 2}));
  const auto f = [](const StateVec& x) { return 3.0 - x[0] + 0.5 * x[1]; };
  const auto result = bellman_apply(problem, f, StateVec{2, 2});
  EXPECT_DOUBLE_EQ(result.value, f(StateVec{2, 2}));
  EXPECT_EQ(result.decision, Decision::all_closed(2));
}

TEST(BellmanApply, HandEvaluatedSingleSlot) {
  ahd::MnlParams p;
  p.lambda = 0.5;
  p.beta_c = 0.0;
  p.beta_s = {0.0};
  p.beta_d = -1.0;
  p.r = 4.0;
  p.c_unit = 0.0;
  p.x_bar = StateVec{1};
  p.t_bar = 1;
  p.price_grid = std::vector<double>{0.0};
  const ahd::AhdProblem problem(p);
  const auto zero = [](const StateVec&) { return 0.0; };
  EXPECT_NEAR(bellman_apply(problem, zero, StateVec{0}).value, 1.0, 1e-15);

  p.price_grid = std::vector<double>{0.0, 10.0};
  const ahd::AhdProblem two(p);
  // Purchase value lambda * w (r + d) / (w + 1) at each grid price.
  const double at0 = 0.5 * 1.0 * 4.0 / 2.0;
  const double w10 = std::exp(-10.0);
  const double at10 = 0.5 * w10 * 14.0 / (w10 + 1.0);
  EXPECT_NEAR(bellman_apply(two, zero, StateVec{0}).value, std::max(at0, at10), 1e-15);
}

TEST(Case1Cut, TerminalCutDominatesOnTheBox) {
  const ahd::AhdProblem problem(small_params(StateVec{2, 2}));
  const auto terminal = [&](const StateVec& x) { return problem.terminal_value(x); };
  for (const auto& anchor : problem.space().states()) {
    const Hyperplane h = case1_cut(problem, terminal, anchor);
    for (const auto& x : problem.space().states()) {
      EXPECT_GE(h(x), bellman_apply(problem, terminal, x).value - 1e-9) << anchor.to_string() << " " << x.to_string();
    }
    EXPECT_NEAR(h(anchor), bellman_apply(problem, terminal, anchor).value, 1e-9);
  }
}

TEST(Case1Cut, ConstantContinuationUnderStayOnlyGivesConstantCut) {
  const StayOnly problem;
  const auto k = [](const StateVec&) { return 7.0; };
  const Hyperplane h = case1_cut(problem, k, StateVec{1, 1});
  EXPECT_EQ(h.slope, (std::vector<double>{0.0, 0.0}));
  EXPECT_DOUBLE_EQ(h.offset, 7.0);
}

TEST(Case1Cut, SymmetricInstanceHasEqualSlopes) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  const auto f = [](const StateVec& x) { return 20.0 - 3.0 * (x[0] + x[1]) - 0.2 * x[0] * x[1]; };
  const Hyperplane h = case1_cut(problem, f, StateVec{1, 1});
  EXPECT_NEAR(h.slope[0], h.slope[1], 1e-9);
}

TEST(Case1Cut, BoundaryAnchorTouchesTheFaceAndStaysAbove) {
  const ahd::AhdProblem problem(small_params(StateVec{2, 3}, 4));
  const auto table = exact_solve(problem);
  const auto v2 = [&](const StateVec& x) {
    return problem.space().contains(x) ? table.at(2, x) : problem.initial_upper_bound()(x);
  };
  for (const auto& anchor : problem.space().states()) {
    const Hyperplane h = case1_cut(problem, v2, anchor);
    EXPECT_NEAR(h(anchor), table.at(1, anchor), 1e-9);
    for (std::size_t s = 1; s <= 2; ++s) {
      const StateVec y = anchor.step(s);
      if (problem.space().contains(y)) EXPECT_NEAR(h(y), table.at(1, y), 1e-9);
    }
    for (const auto& x : problem.space().states()) EXPECT_GE(h(x), table.at(1, x) - 1e-9);
  }
}

TEST(Case2Cut, SingleCutMatchesCase1) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  PwaValue q(Hyperplane{{-2.0, -1.0}, 30.0});
  const StateVec x{1, 2};
  const auto out = case2_cut(problem, q.view(), x);
  const Hyperplane direct = case1_cut(problem, q.cuts()[0], x);
  EXPECT_EQ(out.chosen, 0u);
  EXPECT_EQ(out.cut.slope, direct.slope);
  EXPECT_EQ(out.cut.offset, direct.offset);
}

TEST(Case2Cut, PicksSmallestImage) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  // Both support at (1, 1) with value 20; the second falls faster ahead,
  // so its image at (1, 1) is smaller.
  PwaValue q(Hyperplane{{-1.0, -1.0}, 22.0});
  q.add_cut(Hyperplane{{-5.0, -5.0}, 30.0});
  const StateVec x{1, 1};
  ASSERT_EQ(q.supporting_indices(x).size(), 2u);
  const double v0 = bellman_apply(problem, q.cuts()[0], x).value;
  const double v1 = bellman_apply(problem, q.cuts()[1], x).value;
  ASSERT_LT(v1, v0);
  EXPECT_EQ(case2_cut(problem, q.view(), x).chosen, 1u);

  PwaValue tie(Hyperplane{{-1.0, -1.0}, 22.0});
  tie.add_cut(Hyperplane{{-1.0, -1.0}, 22.0});
  EXPECT_EQ(case2_cut(problem, tie.view(), x).chosen, 0u);
}

TEST(Case2Cut, DominatesImageOfChosenCutOnTheBox) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  // max-like shape: not submodular near (1, 1).
  PwaValue q(Hyperplane{{-4.0, 0.0}, 24.0});
  q.add_cut(Hyperplane{{0.0, -4.0}, 24.0});
  q.add_cut(Hyperplane{{-1.0, -1.0}, 22.0});
  const StateVec x{1, 1};
  ASSERT_FALSE(is_submodular_on(q, local_check_set(x)).holds);
  const auto out = backward_cut(problem, q.view(), x);
  EXPECT_EQ(out.branch, CutCase::fallback);
  const Hyperplane& chosen = q.cuts()[out.chosen];
  for (const auto& y : problem.space().states()) {
    EXPECT_GE(out.cut(y), bellman_apply(problem, chosen, y).value - 1e-9) << y.to_string();
  }
}

TEST(BackwardCut, AffineContinuationIsCase1) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  PwaValue q(Hyperplane{{-2.0, -3.0}, 40.0});
  EXPECT_EQ(backward_cut(problem, q.view(), StateVec{0, 1}).branch, CutCase::submodular);
  const auto terminal = [&](const StateVec& y) { return problem.terminal_value(y); };
  EXPECT_EQ(backward_cut_terminal(problem, terminal, StateVec{3, 3}).branch, CutCase::submodular);
}

TEST(BackwardCut, Case1FromPatchMatchesDirectFit) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  PwaValue q(Hyperplane{{-2.0, -3.0}, 40.0});
  q.add_cut(Hyperplane{{-6.0, -3.5}, 44.0});
  for (const auto& x : problem.space().states()) {
    const auto out = backward_cut(problem, q.view(), x, 1e-6);
    if (out.branch != CutCase::submodular) continue;
    const Hyperplane direct = case1_cut(problem, q, x, 1e-6);
    EXPECT_EQ(out.cut.slope, direct.slope);
    EXPECT_EQ(out.cut.offset, direct.offset);
  }
}

TEST(BackwardCut, TerminalThatIsNotSubmodularIsReported) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  const auto bad = [](const StateVec& y) { return 1.0 * y[0] * y[1]; };
  EXPECT_THROW(backward_cut_terminal(problem, bad, StateVec{1, 1}), AssumptionViolation);
}

TEST(BellmanApply, MonotoneInTheContinuation) {
  const ahd::AhdProblem problem(small_params(StateVec{3, 3}));
  const auto g = [](const StateVec& x) { return 10.0 - 2.0 * x[0] - x[1]; };
  const auto f = [&](const StateVec& x) { return g(x) + 0.1 * (x[0] + 1) * (x[1] + 2); };
  for (const auto& x : problem.space().states()) {
    EXPECT_GE(bellman_apply(problem, f, x).value, bellman_apply(problem, g, x).value - 1e-12);
  }
}

TEST(BellmanApply, UpperBoundsPropagate) {
  const ahd::AhdProblem problem(small_params(StateVec{2, 2}, 3));
  const auto table = exact_solve(problem);
  // Any f >= V_2 on X gives T f >= V_1.
  const auto f = [&](const StateVec& x) {
    return problem.space().contains(x) ? table.at(2, x) + 0.5 * x[0] : 0.0;
  };
  for (const auto& x : problem.space().states()) {
    EXPECT_GE(bellman_apply(problem, f, x).value, table.at(1, x) - 1e-12);
  }
}

// Submodularity and concave extensibility of T f on X do not make the case I
// hyperplane a global majorant: here it undercuts f at (0, 2) by 1.
TEST(Case1Cut, NeedNotSeparateAwayFromTheAnchor) {
  const StayOnly problem;
  PwaValue f(Hyperplane{{-3.0, 1.0}, -6.0});
  f.add_cut(Hyperplane{{-4.0, -4.0}, 4.0});
  std::vector<double> values;
  for (const auto& x : problem.space().states()) values.push_back(f.evaluate(x));
  ASSERT_TRUE(check_submodular_all(values, problem.space()).holds);
  ASSERT_TRUE(check_concave_extensible(values, problem.space()).holds);

  const Hyperplane h = case1_cut(problem, f, StateVec{1, 1});
  EXPECT_DOUBLE_EQ(h(StateVec{1, 1}), -8.0);
  EXPECT_DOUBLE_EQ(h(StateVec{0, 2}), -5.0);
  EXPECT_DOUBLE_EQ(f.evaluate(StateVec{0, 2}), -4.0);
}

}  // namespace
}  // namespace gbdp
