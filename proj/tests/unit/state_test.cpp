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
#include <cmath>

#include <set>

#include "gbdp/state.hpp"

namespace gbdp {
namespace {

TEST(StateVec, RejectsNegativeEntries) {
  EXPECT_THROW(StateVec({1, -1}), std::invalid_argument);
  EXPECT_THROW(StateVec(std::vector<int>{-2}), std::invalid_argument);
}

TEST(Successors, OriginListsStayThenUnitSteps) {
  const StateSpace space(StateVec{2, 2});
  const std::vector<StateVec> expected{{0, 0}, {1, 0}, {0, 1}};
  EXPECT_EQ(successors(StateVec{0, 0}, space), expected);
}

TEST(Successors, CornerStillHasNPlusOnePoints) {
  const StateSpace space(StateVec{2, 2});
  const auto ys = successors(StateVec{2, 2}, space);
  const std::vector<StateVec> expected{{2, 2}, {3, 2}, {2, 3}};
  EXPECT_EQ(ys, expected);
  EXPECT_TRUE(space.contains(ys[0]));
  EXPECT_FALSE(space.contains(ys[1]));
  EXPECT_FALSE(space.contains(ys[2]));
}

TEST(Successors, OneDimension) {
  const std::vector<StateVec> expected{StateVec{5}, StateVec{6}};
  EXPECT_EQ(successors(StateVec{5}), expected);
}

TEST(Successors, DimensionMismatchThrows) {
  const StateSpace space(StateVec{2, 2});
  EXPECT_THROW(successors(StateVec{0, 0, 0}, space), std::invalid_argument);
}

TEST(LocalCheckSet, TwoDimensionsAtOrigin) {
  const auto z = local_check_set(StateVec{0, 0});
  const std::set<StateVec> got(z.begin(), z.end());
  const std::set<StateVec> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}};
  EXPECT_EQ(got, expected);
  EXPECT_EQ(z.size(), got.size());
}

TEST(LocalCheckSet, OneDimension) {
  const std::vector<StateVec> expected{StateVec{3}, StateVec{4}, StateVec{5}};
  EXPECT_EQ(local_check_set(StateVec{3}), expected);
}

TEST(LocalCheckSet, SizeIsOnePlusNPlusPairs) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto z = local_check_set(StateVec(n));
    EXPECT_EQ(z.size(), 1 + n + n * (n + 1) / 2);
    EXPECT_EQ(std::set<StateVec>(z.begin(), z.end()).size(), z.size());
  }
  EXPECT_EQ(local_check_set(StateVec{0, 0, 0}).size(), 10u);
}

TEST(StateSpace, IndexRoundTripsInLexicographicOrder) {
  const StateSpace space(StateVec{2, 1, 3});
  ASSERT_EQ(space.cardinality(), 3u * 2u * 4u);
  const auto all = space.states();
  for (std::uint64_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(space.index(all[i]), i);
    EXPECT_EQ(space.state_at(i), all[i]);
    if (i > 0) EXPECT_LT(all[i - 1], all[i]);
  }
}

TEST(StateSpace, CardinalityEstimateForLargeBoxes) {
  const StateSpace space(StateVec(std::vector<int>(17, 6)));
  EXPECT_NEAR(space.cardinality_estimate(), std::pow(7.0, 17), 1.0);
}

TEST(HorizonSpec, RejectsEmptyHorizon) {
  EXPECT_THROW(HorizonSpec(0), std::invalid_argument);
  EXPECT_EQ(HorizonSpec(5).terminal(), 6);
}

}  // namespace
}  // namespace gbdp
