// Copyright 2026 The btcurate Authors.
//
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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "btcurate/state_space.hpp"

namespace bc = btcurate;

TEST(Enumerate, UnitIntervalThreePoints) {
  const auto s = bc::StateSpace::grid({{0.0, 1.0}}, 3);
  const auto pts = bc::enumerate(s);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0][0], 0.0);
  EXPECT_EQ(pts[1][0], 0.5);
  EXPECT_EQ(pts[2][0], 1.0);
}

TEST(Enumerate, AlphabetInOrder) {
  const auto s = bc::StateSpace::alphabet_range(1, 6);
  const auto pts = bc::enumerate(s);
  ASSERT_EQ(pts.size(), 6u);
  for (long l = 1; l <= 6; ++l) EXPECT_EQ(pts[static_cast<std::size_t>(l - 1)].as_label(), l);
}

TEST(Enumerate, GridCount) {
  EXPECT_EQ(bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 101).size(), 10201u);
  EXPECT_EQ(bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 61).size(), 3721u);
}

TEST(Enumerate, RowMajorAndExactCoordinates) {
  const auto s = bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 61);
  // first coordinate varies slowest
  EXPECT_EQ(s.point(0), (bc::StatePoint{-5.0, -5.0}));
  EXPECT_EQ(s.point(1), (bc::StatePoint{-5.0, -5.0 + 10.0 / 60.0}));
  // lattice values that are representable come out exactly
  const auto idx = s.index_of(bc::StatePoint{1.0, 0.0});
  ASSERT_TRUE(idx.has_value());
  EXPECT_EQ(s.point(*idx), (bc::StatePoint{1.0, 0.0}));
  EXPECT_EQ(s.point(s.size() - 1), (bc::StatePoint{5.0, 5.0}));
}

TEST(Enumerate, DeterministicAcrossConstructions) {
  const auto a = bc::StateSpace::grid({{-1, 2}, {0, 3}}, 7);
  const auto b = bc::StateSpace::grid({{-1, 2}, {0, 3}}, 7);
  EXPECT_EQ(a.points(), b.points());
}

TEST(StateSpaceInvalid, Rejected) {
  EXPECT_THROW(bc::StateSpace::grid({{1, 1}}, 3), bc::PreconditionError);
  EXPECT_THROW(bc::StateSpace::grid({{0, 1}}, 1), bc::PreconditionError);
  EXPECT_THROW(bc::StateSpace::alphabet({}), bc::PreconditionError);
  EXPECT_THROW(bc::StateSpace::alphabet({1, 3, 2}), bc::PreconditionError);
  EXPECT_THROW(bc::StateSpace::alphabet({1, 1}), bc::PreconditionError);
}

TEST(Distance, ThreeFourFive) {
  const auto s = bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 11);
  EXPECT_DOUBLE_EQ(bc::distance(s, {0.0, 0.0}, {3.0, 4.0}), 5.0);
  EXPECT_EQ(bc::distance(s, {1.0, 2.0}, {1.0, 2.0}), 0.0);
}

TEST(Distance, AlphabetAbsoluteDifference) {
  const auto s = bc::StateSpace::alphabet_range(1, 8);
  EXPECT_EQ(bc::distance(s, bc::StatePoint::label(2), bc::StatePoint::label(5)), 3.0);
}

TEST(Distance, DimensionMismatchThrows) {
  const auto s = bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 11);
  EXPECT_THROW(bc::distance(s, {0.0, 0.0}, {1.0}), bc::PreconditionError);
}

TEST(Distance, MetricAxiomsOnRandomTriples) {
  const auto s = bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 61);
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  for (int k = 0; k < 1000; ++k) {
    const auto i = pick(rng), j = pick(rng), l = pick(rng);
    const double dij = s.distance(i, j), dji = s.distance(j, i);
    EXPECT_EQ(dij, dji);
    EXPECT_GE(dij, 0.0);
    EXPECT_EQ(dij == 0.0, i == j);
    EXPECT_LE(s.distance(i, l), dij + s.distance(j, l) + 1e-12);
  }
}

TEST(Region, SortedDeduplicated) {
  const bc::Region r(std::vector<std::size_t>{5, 1, 5, 3, 1});
  EXPECT_EQ(r.indices(), (std::vector<std::size_t>{1, 3, 5}));
  const auto s = bc::StateSpace::alphabet_range(1, 4);
  EXPECT_FALSE(r.valid_for(s));
  EXPECT_TRUE(bc::Region(std::vector<std::size_t>{0, 3}).valid_for(s));
}

TEST(Region, SetOperations) {
  const auto s = bc::StateSpace::alphabet_range(1, 6);
  const bc::Region a(std::vector<std::size_t>{0, 1, 2});
  const bc::Region b(std::vector<std::size_t>{2, 3});
  EXPECT_EQ(bc::intersection(a, b).indices(), (std::vector<std::size_t>{2}));
  EXPECT_EQ(bc::difference(a, b).indices(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(bc::complement(a, s).indices(), (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_TRUE(bc::intersection(a, b).subset_of(a));
}

TEST(Neighborhood, OneSidedOnCoarseGrid) {
  const auto s = bc::StateSpace::grid({{0.0, 1.0}}, 3);
  const bc::Region core(std::vector<std::size_t>{0});
  EXPECT_EQ(bc::neighborhood(s, core, 0.6).indices(), (std::vector<std::size_t>{0, 1}));
}

TEST(Neighborhood, StrictInequality) {
  const auto s = bc::StateSpace::grid({{0.0, 1.0}}, 3);
  const bc::Region core(std::vector<std::size_t>{0});
  // distance exactly 0.5 is not < 0.5
  EXPECT_EQ(bc::neighborhood(s, core, 0.5).indices(), (std::vector<std::size_t>{0}));
}

TEST(Neighborhood, LargeEtaCoversSpace) {
  const auto s = bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 21);
  const bc::Region core(std::vector<std::size_t>{0});
  EXPECT_EQ(bc::neighborhood(s, core, 100.0).size(), s.size());
}

TEST(Neighborhood, FullCoreIsFullSpace) {
  const auto s = bc::StateSpace::alphabet_range(1, 8);
  EXPECT_EQ(bc::neighborhood(s, bc::Region::all(s), 0.01), bc::Region::all(s));
}

TEST(Neighborhood, Errors) {
  const auto s = bc::StateSpace::alphabet_range(1, 8);
  EXPECT_THROW(bc::neighborhood(s, bc::Region{}, 1.0), bc::PreconditionError);
  EXPECT_THROW(bc::neighborhood(s, bc::Region::all(s), 0.0), bc::PreconditionError);
}

TEST(Neighborhood, CellEtaIncludesAxisAndDiagonalNeighbours) {
  const auto s = bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 61);
  const auto c = *s.index_of(bc::StatePoint{0.0, 0.0});
  const auto n = bc::neighborhood(s, bc::Region(std::vector<std::size_t>{c}), bc::cell_eta(s));
  EXPECT_EQ(n.size(), 9u);
}

TEST(NeighborhoodProperty, MonotoneAndSuperset) {
  const auto s = bc::StateSpace::grid({{-2, 2}, {-2, 2}}, 17);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
  std::uniform_real_distribution<double> eta(0.01, 2.0);
  for (int k = 0; k < 50; ++k) {
    std::vector<std::size_t> idx;
    const std::size_t m = 1 + pick(rng) % 6;
    for (std::size_t i = 0; i < m; ++i) idx.push_back(pick(rng));
    const bc::Region core(idx);
    double e1 = eta(rng), e2 = eta(rng);
    if (e1 > e2) std::swap(e1, e2);
    const auto n1 = bc::neighborhood(s, core, e1);
    const auto n2 = bc::neighborhood(s, core, e2);
    EXPECT_TRUE(core.subset_of(n1));
    EXPECT_TRUE(n1.subset_of(n2));
  }
}

TEST(IndexLookup, NearestAndExact) {
  const auto s = bc::StateSpace::alphabet({1, 2, 4, 8});
  EXPECT_EQ(s.index_of(bc::StatePoint::label(4)), std::optional<std::size_t>(2));
  EXPECT_FALSE(s.index_of(bc::StatePoint::label(3)).has_value());
  EXPECT_EQ(s.nearest_index(bc::StatePoint{6.5}), 3u);
  const auto g = bc::StateSpace::grid({{0, 1}}, 11);
  EXPECT_EQ(g.nearest_index(bc::StatePoint{0.26}), 3u);
  EXPECT_EQ(g.nearest_index(bc::StatePoint{-4.0}), 0u);
}

TEST(Neighborhood, AlphabetCellEtaIsTheCore) {
  const auto s = bc::StateSpace::alphabet_range(1, 8);
  const bc::Region core(std::vector<std::size_t>{2, 3});
  EXPECT_EQ(bc::neighborhood(s, core, bc::cell_eta(s)), core);
  EXPECT_LT(bc::cell_eta(s), s.spacing());
}
