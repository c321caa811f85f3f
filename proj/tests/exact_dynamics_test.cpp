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

#include "btcurate/diagnostics.hpp"
#include "btcurate/exact_dynamics.hpp"

namespace bc = btcurate;

namespace {

bc::SpacePtr words8() { return bc::share(bc::StateSpace::alphabet_range(1, 8)); }

bc::ExactRunConfig words_cfg(long olo, long ohi, long plo, long phi, std::size_t t = 500) {
  bc::ExactRunConfig c;
  c.space = words8();
  c.owner = bc::RewardField::range(olo, ohi);
  c.public_ = bc::RewardField::range(plo, phi);
  c.iterations = t;
  return c;
}

bc::ExactRunConfig disks_cfg(double px, std::size_t t = 200) {
  bc::ExactRunConfig c;
  c.space = bc::share(bc::StateSpace::grid({{-5, 5}, {-5, 5}}, 61));
  c.owner = bc::RewardField::circular({0, 0}, 1);
  c.public_ = bc::RewardField::circular({px, 0}, 1);
  c.iterations = t;
  return c;
}

// Oracle: p_0 renormalised on the given labels.
std::vector<double> renormalized_on(const bc::DiscreteDistribution& p0, const bc::StateSpace& s,
                                    std::initializer_list<long> labels) {
  std::vector<double> w(p0.size(), 0.0);
  double z = 0.0;
  for (long l : labels) {
    const auto i = *s.index_of(bc::StatePoint::label(l));
    w[i] = p0[i];
    z += p0[i];
  }
  for (auto& v : w) v /= z;
  return w;
}

bc::DiscreteDistribution random_full_support(const bc::SpacePtr& s, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(s->size());
  for (auto& v : w) v = u(g);
  return bc::DiscreteDistribution::from_weights(s, w);
}

}  // namespace

TEST(Step, ConstantRewardsAreIdentity) {
  auto c = words_cfg(1, 1, 1, 1);
  c.owner = bc::RewardField::constant(1.0);
  c.public_ = bc::RewardField::constant(-2.0);
  const auto p = random_full_support(c.space, 1);
  const auto q = bc::step(p, c);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(q[i], p[i], 1e-15);
}

TEST(Step, PointMassIsFixed) {
  auto c = words_cfg(2, 4, 4, 6);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto p = bc::DiscreteDistribution::point_mass(c.space, i);
    const auto q = bc::step(p, c);
    EXPECT_EQ(q[i], 1.0);
  }
}

TEST(Step, OneStepRaisesOptimalMass) {
  const auto c = words_cfg(3, 4, 3, 4);
  const auto p0 = c.initial_distribution();
  const auto q = bc::step(p0, c);
  const bc::Region band({2, 3});
  EXPECT_GT(q.mass(band), p0.mass(band));
  // hand-computed two tilts
  const auto& r = c.owner.values(*c.space);
  std::vector<double> m(8, 1.0 / 8);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> h(8, 0.0);
    for (int x = 0; x < 8; ++x) {
      for (int y = 0; y < 8; ++y) h[x] += m[y] * 2.0 / (1.0 + std::exp(r[y] - r[x]));
    }
    double z = 0;
    for (int x = 0; x < 8; ++x) z += m[x] *= h[x];
    for (auto& v : m) v /= z;
  }
  for (int x = 0; x < 8; ++x) EXPECT_NEAR(q[x], m[x], 1e-14);
}

TEST(Run, PerfectBandLimit) {
  const auto c = words_cfg(3, 4, 3, 4, 200);
  const auto traj = bc::run(c);
  ASSERT_EQ(traj.size(), 201u);
  const auto oracle = renormalized_on(traj.front(), *c.space, {3, 4});
  EXPECT_LE(bc::total_variation(traj.back().weights(), oracle), 1e-3);
}

TEST(Run, PartialConcentratesOnSharedLabel) {
  const auto c = words_cfg(2, 4, 4, 6);
  const auto p = bc::ExactDynamics(c).final_state();
  EXPECT_GE(p[3], 1.0 - 1e-3);
}

TEST(Run, DisjointConcentratesOnConditionalArgmax) {
  const auto c = words_cfg(1, 3, 5, 6);
  const auto p = bc::ExactDynamics(c).final_state();
  EXPECT_GE(p[2], 1.0 - 1e-3);  // label 3
}

TEST(Run, DisjointGridMatchesPrediction) {
  const auto c = disks_cfg(3.0);
  const auto p = bc::ExactDynamics(c).final_state();
  EXPECT_LE(bc::total_variation(p, bc::predicted_limit(c)), 1e-3);
}

TEST(Run, FinalStateEqualsRunTail) {
  const auto c = words_cfg(2, 4, 4, 6, 40);
  EXPECT_EQ(bc::run(c).back().weights().size(), 8u);
  const auto a = bc::run(c).back();
  const auto b = bc::ExactDynamics(c).final_state();
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Run, MonteCarloPoolsAreSeeded) {
  auto c = words_cfg(3, 4, 3, 4, 20);
  c.owner_pool = 4;
  c.mc_samples = 2000;
  c.seed = 7;
  const auto a = bc::ExactDynamics(c).final_state();
  const auto b = bc::ExactDynamics(c).final_state();
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_GT(a.mass(bc::Region({2, 3})), 0.99);
}

TEST(Run, ConfigErrors) {
  auto c = words_cfg(1, 2, 1, 2);
  c.iterations = 0;
  EXPECT_THROW(bc::run(c), bc::PreconditionError);
  c = words_cfg(1, 2, 1, 2);
  c.public_pool = 1;
  EXPECT_THROW(bc::ExactDynamics{c}, bc::PreconditionError);
  c = words_cfg(1, 2, 1, 2);
  c.initial = bc::DiscreteDistribution::uniform(bc::share(bc::StateSpace::alphabet_range(1, 5)));
  EXPECT_THROW(bc::ExactDynamics{c}, bc::PreconditionError);
  c = words_cfg(1, 2, 1, 2);
  c.space = nullptr;
  EXPECT_THROW(bc::predict(c), bc::PreconditionError);
}

TEST(Predict, PerfectUniformHalves) {
  const auto pr = bc::predict(words_cfg(3, 4, 3, 4));
  EXPECT_EQ(pr.regime, bc::Regime::perfect);
  EXPECT_EQ(pr.limit[2], 0.5);
  EXPECT_EQ(pr.limit[3], 0.5);
  EXPECT_NEAR(pr.limit.total(), 1.0, 1e-15);
}

TEST(Predict, PartialSingletonIsDirac) {
  const auto pr = bc::predict(words_cfg(2, 4, 4, 6));
  EXPECT_EQ(pr.regime, bc::Regime::partial);
  EXPECT_EQ(pr.target, bc::Region({3}));
  EXPECT_EQ(pr.limit[3], 1.0);
}

TEST(Predict, DisjointDependsOnOrder) {
  auto c = words_cfg(1, 3, 5, 6);
  const auto of = bc::predict(c);
  c.order = bc::Order::public_first;
  const auto pf = bc::predict(c);
  EXPECT_EQ(of.regime, bc::Regime::disjoint);
  EXPECT_EQ(of.target, bc::Region({2}));  // label 3
  EXPECT_EQ(pf.target, bc::Region({4}));  // label 5
  EXPECT_EQ(bc::total_variation(of.limit, pf.limit), 1.0);
}

TEST(Predict, UsesInitialWeights) {
  auto c = words_cfg(3, 4, 3, 4);
  c.initial = bc::DiscreteDistribution::from_weights(c.space, {1, 1, 1, 3, 1, 1, 1, 1});
  const auto pr = bc::predict(c);
  EXPECT_NEAR(pr.limit[2], 0.25, 1e-15);
  EXPECT_NEAR(pr.limit[3], 0.75, 1e-15);
}

// Properties over random initialisations.

TEST(ExactProperties, MassConservation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto c = words_cfg(2, 4, 4, 6, 100);
    c.initial = random_full_support(c.space, seed);
    for (const auto& p : bc::run(c)) EXPECT_NEAR(p.total(), 1.0, 1e-10);
  }
  const auto traj = bc::run(disks_cfg(1.5, 30));
  for (const auto& p : traj) EXPECT_NEAR(p.total(), 1.0, 1e-10);
}

TEST(ExactProperties, MonotoneConcentrationPerfect) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto c = words_cfg(3, 4, 3, 4, 100);
    c.initial = random_full_support(c.space, 100 + seed);
    const auto traj = bc::run(c);
    const bc::Region a({2, 3});
    for (std::size_t t = 1; t < traj.size(); ++t) {
      EXPECT_GE(traj[t].mass(a), traj[t - 1].mass(a) - 1e-15);
    }
  }
  const auto c = disks_cfg(0.0, 60);
  const auto a = bc::argmax_set(c.owner, *c.space);
  const auto traj = bc::run(c);
  for (std::size_t t = 1; t < traj.size(); ++t) {
    EXPECT_GE(traj[t].mass(a), traj[t - 1].mass(a) - 1e-15);
  }
}

TEST(ExactProperties, LimitAgreementAllScenarios) {
  for (const auto& c : {words_cfg(3, 4, 3, 4), words_cfg(2, 4, 4, 6), words_cfg(1, 3, 5, 6)}) {
    EXPECT_LE(bc::total_variation(bc::ExactDynamics(c).final_state(), bc::predicted_limit(c)), 1e-3);
  }
  for (double px : {0.0, 1.5, 3.0}) {
    const auto c = disks_cfg(px);
    EXPECT_LE(bc::total_variation(bc::ExactDynamics(c).final_state(), bc::predicted_limit(c)), 1e-3)
        << px;
  }
}

TEST(ExactProperties, InitialisationDependence) {
  auto c = words_cfg(1, 5, 2, 8);  // shared optimum {2..5}
  c.initial = random_full_support(c.space, 11);
  const auto a = bc::ExactDynamics(c).final_state();
  c.initial = bc::DiscreteDistribution::from_weights(c.space, {1, 2, 3, 4, 5, 6, 7, 8});
  const auto b = bc::ExactDynamics(c).final_state();
  EXPECT_GT(bc::total_variation(a, b), 0.05);
}

TEST(ExactProperties, OrderDependenceDisjoint) {
  auto c = words_cfg(1, 3, 5, 6);
  const auto of = bc::ExactDynamics(c).final_state();
  c.order = bc::Order::public_first;
  const auto pf = bc::ExactDynamics(c).final_state();
  EXPECT_GE(bc::total_variation(of, pf), 0.5);
}
