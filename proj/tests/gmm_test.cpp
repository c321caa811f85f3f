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


#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "btcurate/gmm.hpp"

namespace bc = btcurate;

namespace {

bc::GaussianMixture standard_normal_2d() {
  bc::GaussianMixture m;
  m.weights = {1.0};
  m.means = {Eigen::Vector2d::Zero()};
  m.covariances = {Eigen::Matrix2d::Identity()};
  return m;
}

std::vector<bc::StatePoint> gaussian_cloud(std::mt19937_64& g, std::size_t n, double mx, double my,
                                           double sd) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<bc::StatePoint> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({mx + sd * z(g), my + sd * z(g)});
  return out;
}

}  // namespace

TEST(LogLikelihood, StandardNormalAtOrigin) {
  const std::vector<bc::StatePoint> x{{0.0, 0.0}};
  EXPECT_NEAR(bc::log_likelihood(standard_normal_2d(), x), -std::log(2.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(bc::log_likelihood(standard_normal_2d(), x), -1.8379, 1e-4);
}

TEST(LogLikelihood, Additive) {
  const auto m = standard_normal_2d();
  const std::vector<bc::StatePoint> one{{0.4, -1.0}}, two{{0.4, -1.0}, {0.4, -1.0}};
  EXPECT_NEAR(bc::log_likelihood(m, two), 2.0 * bc::log_likelihood(m, one), 1e-12);
  EXPECT_THROW(bc::log_likelihood(m, std::vector<bc::StatePoint>{}), bc::PreconditionError);
}

TEST(LogLikelihood, FarPointsStayFinite) {
  auto m = standard_normal_2d();
  m.weights = {0.5, 0.5};
  m.means.push_back(Eigen::Vector2d(3.0, 0.0));
  m.covariances.push_back(1e-6 * Eigen::Matrix2d::Identity());
  const std::vector<bc::StatePoint> x{{200.0, 0.0}};
  EXPECT_TRUE(std::isfinite(bc::log_likelihood(m, x)));
}

TEST(Fit, SingleGaussianMatchesSampleStatistics) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<bc::StatePoint> pts;
  for (int i = 0; i < 5000; ++i) pts.push_back({1.0 + z(g), 2.0 + z(g)});
  bc::EMConfig cfg;
  cfg.n_components = 1;
  const auto m = bc::fit(pts, cfg);
  // sample-statistics oracle
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += p[0];
    my += p[1];
  }
  mx /= 5000;
  my /= 5000;
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& p : pts) {
    sxx += (p[0] - mx) * (p[0] - mx);
    syy += (p[1] - my) * (p[1] - my);
    sxy += (p[0] - mx) * (p[1] - my);
  }
  EXPECT_NEAR(m.means[0][0], mx, 1e-9);
  EXPECT_NEAR(m.means[0][1], my, 1e-9);
  EXPECT_NEAR(m.covariances[0](0, 0), sxx / 5000 + 1e-6, 1e-9);
  EXPECT_NEAR(m.covariances[0](1, 1), syy / 5000 + 1e-6, 1e-9);
  EXPECT_NEAR(m.covariances[0](0, 1), sxy / 5000, 1e-9);
  EXPECT_NEAR(m.means[0][0], 1.0, 0.1);
  EXPECT_NEAR(m.means[0][1], 2.0, 0.1);
  EXPECT_NEAR(m.covariances[0](0, 0), 1.0, 0.15);
  EXPECT_NEAR(m.covariances[0](1, 1), 1.0, 0.15);
  EXPECT_NEAR(m.covariances[0](0, 1), 0.0, 0.15);
}

TEST(Fit, IdenticalPointsCollapseToFloor) {
  const std::vector<bc::StatePoint> pts(30, bc::StatePoint{0.7, -1.1});
  bc::EMConfig cfg;
  cfg.n_components = 3;
  const auto m = bc::fit(pts, cfg);
  for (std::size_t c = 0; c < m.n_components(); ++c) {
    if (m.weights[c] == 0.0) continue;
    EXPECT_NEAR(m.means[c][0], 0.7, 1e-12);
    EXPECT_NEAR(m.means[c][1], -1.1, 1e-12);
    EXPECT_TRUE(m.covariances[c].isApprox(1e-6 * Eigen::Matrix2d::Identity(), 1e-9));
  }
}

TEST(Fit, FewerPointsThanComponents) {
  const std::vector<bc::StatePoint> pts{{0.0, 0.0}, {1.0, 1.0}};
  bc::EMConfig cfg;  // 5 components
  const auto m = bc::fit(pts, cfg);
  double w = 0;
  for (double v : m.weights) w += v;
  EXPECT_NEAR(w, 1.0, 1e-10);
  EXPECT_TRUE(std::isfinite(bc::log_likelihood(m, pts)));
}

TEST(Fit, TwoClustersArePure) {
  std::mt19937_64 g(2);
  auto a = gaussian_cloud(g, 300, -3.0, 0.0, 0.4);
  auto b = gaussian_cloud(g, 300, 3.0, 1.0, 0.4);
  std::vector<bc::StatePoint> all(a);
  all.insert(all.end(), b.begin(), b.end());
  bc::EMConfig cfg;
  cfg.n_components = 2;
  cfg.rng_seed = 5;
  const auto m = bc::fit(all, cfg);
  const auto lab = bc::assign(m, all);
  // permutation-invariant purity: majority label per cluster
  const auto purity = [&](std::size_t from) {
    std::size_t zeros = 0;
    for (std::size_t i = from; i < from + 300; ++i) zeros += lab[i] == 0;
    return std::max(zeros, 300 - zeros) / 300.0;
  };
  EXPECT_GE(purity(0), 0.99);
  EXPECT_GE(purity(300), 0.99);
  EXPECT_NE(lab[0], lab[300]);
}

TEST(Fit, RecoversKnownMixtureMeans) {
  std::mt19937_64 g(3);
  const double sd = 0.5;
  const std::size_t per = 400;
  const std::vector<std::pair<double, double>> centres{{-2, -2}, {2, -1}, {0, 2.5}};
  std::vector<bc::StatePoint> all;
  for (auto [x, y] : centres) {
    auto c = gaussian_cloud(g, per, x, y, sd);
    all.insert(all.end(), c.begin(), c.end());
  }
  bc::EMConfig cfg;
  cfg.n_components = 3;
  const auto m = bc::fit(all, cfg);
  for (auto [x, y] : centres) {
    double best = 1e9;
    for (const auto& mu : m.means) best = std::min(best, std::hypot(mu[0] - x, mu[1] - y));
    EXPECT_LE(best, 3.0 * sd / std::sqrt(static_cast<double>(per)) * std::sqrt(2.0));
  }
}

// Property: EM log-likelihood never decreases, on 50 random datasets.
TEST(FitProperties, EmMonotone) {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_int_distribution<int> ncl(1, 4);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<bc::StatePoint> pts;
    const int k = ncl(g);
    for (int c = 0; c < k; ++c) {
      auto cl = gaussian_cloud(g, 40, u(g), u(g), 0.2 + 0.1 * c);
      pts.insert(pts.end(), cl.begin(), cl.end());
    }
    bc::EMConfig cfg;
    cfg.rng_seed = static_cast<std::uint64_t>(rep);
    const auto res = bc::fit_traced(pts, cfg);
    const auto& tr = res.log_likelihood_trace;
    ASSERT_GE(tr.size(), 2u);
    for (std::size_t i = 1; i < tr.size(); ++i) EXPECT_GE(tr[i], tr[i - 1] - 1e-8) << rep;
    for (std::size_t c = 0; c < res.model.n_components(); ++c) {
      const auto& s = res.model.covariances[c];
      EXPECT_NEAR(s(0, 1), s(1, 0), 1e-15);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
      EXPECT_GE(es.eigenvalues().minCoeff(), 1e-6 * (1 - 1e-9));
    }
    double w = 0;
    for (double v : res.model.weights) w += v;
    EXPECT_NEAR(w, 1.0, 1e-10);
  }
}

TEST(Fit, Errors) {
  bc::EMConfig cfg;
  EXPECT_THROW(bc::fit(std::vector<bc::StatePoint>{}, cfg), bc::PreconditionError);
  cfg.tol = 0;
  const std::vector<bc::StatePoint> one{{0.0, 0.0}};
  EXPECT_THROW(bc::fit(one, cfg), bc::PreconditionError);
}

TEST(Sample, DeterministicAndWeighted) {
  bc::GaussianMixture m;
  m.weights = {0.3, 0.7};
  m.means = {Eigen::Vector2d(-10, 0), Eigen::Vector2d(10, 0)};
  m.covariances = {Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity()};
  EXPECT_EQ(bc::sample(m, 50, 9), bc::sample(m, 50, 9));
  const auto xs = bc::sample(m, 100000, 10);
  double left = 0;
  for (const auto& x : xs) left += x[0] < 0;
  EXPECT_NEAR(left / 100000.0, 0.3, 0.01);
}

TEST(Sample, ZeroWeightNeverDrawn) {
  bc::GaussianMixture m;
  m.weights = {1.0, 0.0};
  m.means = {Eigen::Vector2d(-10, 0), Eigen::Vector2d(10, 0)};
  m.covariances = {Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity()};
  for (const auto& x : bc::sample(m, 2000, 3)) EXPECT_LT(x[0], 0.0);
}

TEST(Sample, FloorCovarianceConcentrates) {
  bc::GaussianMixture m;
  m.weights = {1.0};
  m.means = {Eigen::Vector2d(1.5, -0.5)};
  m.covariances = {1e-6 * Eigen::Matrix2d::Identity()};
  for (const auto& x : bc::sample(m, 1000, 4)) {
    EXPECT_LE(std::hypot(x[0] - 1.5, x[1] + 0.5), 5.0 * std::sqrt(1e-6));
  }
  EXPECT_THROW(bc::sample(m, 0, 1), bc::PreconditionError);
}
