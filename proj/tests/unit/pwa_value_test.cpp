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

#include <limits>
#include <random>

#include "gbdp/pwa_value.hpp"

namespace gbdp {
namespace {

Hyperplane cut(std::vector<double> a, double b) { return Hyperplane{std::move(a), b}; }

TEST(PwaValue, EvaluatesPointwiseMinimum) {
  PwaValue q(cut({0, 0}, 5));
  q.add_cut(cut({1, 0}, 0));
  EXPECT_DOUBLE_EQ(q.evaluate(StateVec{3, 0}), 3.0);

  PwaValue constant(cut({0, 0}, 5));
  EXPECT_DOUBLE_EQ(constant.evaluate(StateVec{7, 9}), 5.0);

  PwaValue two(cut({-1, -1}, 10));
  two.add_cut(cut({0, 0}, 7));
  EXPECT_DOUBLE_EQ(two.evaluate(StateVec{2, 2}), 6.0);
}

TEST(PwaValue, EmptyFunctionCannotBeEvaluated) {
  const PwaValue q;
  EXPECT_THROW(q.evaluate(StateVec{0}), std::logic_error);
}

TEST(PwaValue, SupportingIndices) {
  PwaValue q(cut({0, 0}, 5));
  q.add_cut(cut({1, 0}, 0));
  EXPECT_EQ(q.supporting_indices(StateVec{5, 0}, 1e-9), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(q.supporting_indices(StateVec{3, 0}, 1e-9), (std::vector<std::size_t>{1}));

  PwaValue same(cut({1, 2}, 3));
  same.add_cut(cut({1, 2}, 3));
  same.add_cut(cut({1, 2}, 3));
  EXPECT_EQ(same.supporting_indices(StateVec{4, 1}), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(PwaValue, AddCutTakesMinimum) {
  PwaValue q(cut({0}, 5));
  q.add_cut(cut({0}, 3));
  EXPECT_DOUBLE_EQ(q.evaluate(StateVec{4}), 3.0);

  PwaValue r(cut({0}, 3));
  r.add_cut(cut({0}, 5));
  EXPECT_DOUBLE_EQ(r.evaluate(StateVec{4}), 3.0);
  EXPECT_EQ(r.size(), 2u);
}

TEST(PwaValue, AddCutMatchesElementwiseMinimumAtRandomPoints) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_int_distribution<int> coord(0, 20);
  PwaValue before(cut({coef(gen), coef(gen), coef(gen)}, coef(gen)));
  before.add_cut(cut({coef(gen), coef(gen), coef(gen)}, coef(gen)));
  const Hyperplane h = cut({coef(gen), coef(gen), coef(gen)}, coef(gen));
  PwaValue after = before;
  after.add_cut(h);
  for (int k = 0; k < 100; ++k) {
    const StateVec x{coord(gen), coord(gen), coord(gen)};
    EXPECT_EQ(after.evaluate(x), std::min(before.evaluate(x), h(x)));
  }
}

TEST(PwaValue, RejectsNonFiniteAndMismatchedCuts) {
  PwaValue q(cut({0, 0}, 1));
  EXPECT_THROW(q.add_cut(cut({std::numeric_limits<double>::infinity(), 0}, 0)), std::invalid_argument);
  EXPECT_THROW(q.add_cut(cut({0, 0}, std::numeric_limits<double>::quiet_NaN())), std::invalid_argument);
  EXPECT_THROW(q.add_cut(cut({0}, 0)), std::invalid_argument);
}

TEST(FitHyperplane, UnitSimplexAtOrigin) {
  const std::vector<double> v{1, 3, 2};
  const Hyperplane h = fit_hyperplane(StateVec{0, 0}, v);
  EXPECT_EQ(h.slope, (std::vector<double>{2, 1}));
  EXPECT_DOUBLE_EQ(h.offset, 1.0);
}

TEST(FitHyperplane, ShiftedAnchor) {
  const std::vector<double> v{10, 9, 8};
  const Hyperplane h = fit_hyperplane(StateVec{1, 1}, v);
  EXPECT_EQ(h.slope, (std::vector<double>{-1, -2}));
  EXPECT_DOUBLE_EQ(h.offset, 13.0);
  EXPECT_DOUBLE_EQ(h(StateVec{1, 1}), 10.0);
}

TEST(FitHyperplane, ConstantValues) {
  const std::vector<double> v{5, 5, 5};
  const Hyperplane h = fit_hyperplane(StateVec{0, 0}, v);
  EXPECT_EQ(h.slope, (std::vector<double>{0, 0}));
  EXPECT_DOUBLE_EQ(h.offset, 5.0);
}

TEST(FitHyperplane, ReconstructsInputsWithinTolerance) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> value(-1e6, 1e6);
  std::uniform_int_distribution<int> coord(0, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const StateVec anchor{coord(gen), coord(gen), coord(gen), coord(gen)};
    std::vector<double> v(5);
    for (double& e : v) e = value(gen);
    const Hyperplane h = fit_hyperplane(anchor, v);
    const auto ys = successors(anchor);
    for (std::size_t s = 0; s < ys.size(); ++s) EXPECT_LE(std::abs(h(ys[s]) - v[s]), 1e-9 * 1e3);
  }
}

TEST(FitHyperplane, RejectsNonFiniteValues) {
  const std::vector<double> v{1, std::numeric_limits<double>::infinity(), 0};
  EXPECT_THROW(fit_hyperplane(StateVec{0, 0}, v), std::invalid_argument);
}

TEST(ValueStack, TerminalIsExactAndStagesStartUniform) {
  const auto stack = ValueStack::uniform(3, cut({-1}, 10), [](const StateVec& x) { return -2.0 * x[0]; });
  EXPECT_EQ(stack.t_bar(), 3);
  EXPECT_DOUBLE_EQ(stack.evaluate(1, StateVec{2}), 8.0);
  EXPECT_DOUBLE_EQ(stack.evaluate(3, StateVec{2}), 8.0);
  EXPECT_DOUBLE_EQ(stack.evaluate(4, StateVec{2}), -4.0);
  EXPECT_EQ(stack.total_cuts(), 3u);
}

TEST(PwaValue, CompactionKeepsValuesOnTheBox) {
  const StateSpace space(StateVec{3, 3});
  PwaValue q(cut({0, 0}, 10));
  q.add_cut(cut({-1, -1}, 8));
  q.add_cut(cut({0, 0}, 100));
  PwaValue compacted = q;
  EXPECT_EQ(compacted.compact(space), 2u);
  EXPECT_EQ(compacted.size(), 1u);
  for (const auto& x : space.states()) EXPECT_EQ(compacted.evaluate(x), q.evaluate(x));
}

}  // namespace
}  // namespace gbdp
