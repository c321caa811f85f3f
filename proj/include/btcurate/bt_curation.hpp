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

// Bradley-Terry curation.
//
// The BT weight of a state x under distribution p, pool size K, reward r and
// temperature tau is the expected K-way score share of x against K-1 iid
// competitors Y_j ~ p:
//
//   H(x) = E[ K e^{r(x)/tau} / (e^{r(x)/tau} + sum_j e^{r(Y_j)/tau}) ].
//
// Multiplying p by H gives the distribution of BT tournament winners, and
// sum_x p(x) H(x) = 1. For K = 2 the expectation is a finite sum and is
// computed exactly; for K > 2 it is estimated by Monte Carlo.

#ifndef BTCURATE_BT_CURATION_HPP_
#define BTCURATE_BT_CURATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "btcurate/common.hpp"
#include "btcurate/distribution.hpp"
#include "btcurate/rewards.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

struct BTParams {
  std::size_t pool_size = 2;  // K (owner) or M (public)
  double temperature = 1.0;
  std::size_t mc_samples = 10000;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (pool_size < 2) throw PreconditionError("BTParams: pool size must be >= 2");
    if (!(temperature > 0.0)) throw PreconditionError("BTParams: temperature must be positive");
    if (mc_samples < 1) throw PreconditionError("BTParams: mc_samples must be >= 1");
  }
};

using BTWeights = std::vector<double>;

inline constexpr double kDegenerateMass = 1e-300;

/// Exact K = 2 weights, H(x) = sum_y p(y) * 2 sigma((r(x) - r(y)) / tau).
///
/// States are grouped by distinct r/tau so the cost is O(L^2) in the number
/// of reward levels L rather than in the number of states. The level-pair
/// logistic table is cached when it fits in memory; construct once per
/// (reward, tau) and call weights() every step.
class PairwiseKernel {
 public:
  PairwiseKernel(std::span<const double> rewards, double temperature) {
    if (!(temperature > 0.0)) throw PreconditionError("PairwiseKernel: temperature must be positive");
    if (rewards.empty()) throw PreconditionError("PairwiseKernel: empty reward vector");
    std::vector<double> z(rewards.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = rewards[i] / temperature;
      if (!std::isfinite(z[i])) throw PreconditionError("PairwiseKernel: non-finite reward");
    }
    levels_ = z;
    std::sort(levels_.begin(), levels_.end());
    levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    level_of_.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      level_of_[i] = static_cast<std::size_t>(
          std::lower_bound(levels_.begin(), levels_.end(), z[i]) - levels_.begin());
    }
    const std::size_t l = levels_.size();
    if (l <= kMaxCachedLevels) {
      table_.resize(l * l);
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = 0; b < l; ++b) table_[a * l + b] = share(levels_[a], levels_[b]);
      }
    }
  }

  std::size_t states() const { return level_of_.size(); }
  std::size_t levels() const { return levels_.size(); }

  BTWeights weights(std::span<const double> p) const {
    if (p.size() != level_of_.size()) throw PreconditionError("PairwiseKernel: size mismatch");
    const std::size_t l = levels_.size();
    std::vector<double> level_mass(l, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) level_mass[level_of_[i]] += p[i];

    std::vector<double> level_weight(l, 0.0);
    for (std::size_t a = 0; a < l; ++a) {
      double h = 0.0;
      if (table_.empty()) {
        for (std::size_t b = 0; b < l; ++b) {
          if (level_mass[b] != 0.0) h += level_mass[b] * share(levels_[a], levels_[b]);
        }
      } else {
        const double* row = table_.data() + a * l;
        for (std::size_t b = 0; b < l; ++b) h += level_mass[b] * row[b];
      }
      level_weight[a] = h;
    }
    BTWeights out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = level_weight[level_of_[i]];
    return out;
  }

 private:
  static constexpr std::size_t kMaxCachedLevels = 2500;

  // 2 e^a / (e^a + e^b) in the form that cannot overflow.
  static double share(double a, double b) { return 2.0 / (1.0 + std::exp(b - a)); }

  std::vector<double> levels_;
  std::vector<std::size_t> level_of_;
  std::vector<double> table_;
};

inline BTWeights bt_weight_exact_pairwise(const DiscreteDistribution& p,
                                          std::span<const double> rewards, double temperature) {
  return PairwiseKernel(rewards, temperature).weights(p.weights());
}

inline BTWeights bt_weight_exact_pairwise(const DiscreteDistribution& p, const RewardField& r,
                                          double temperature) {
  const auto v = r.values(p.space());
  return bt_weight_exact_pairwise(p, v, temperature);
}

namespace detail {

class CumulativeSampler {
 public:
  explicit CumulativeSampler(std::span<const double> p) : cdf_(p.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      cdf_[i] = acc;
    }
    if (!(acc > 0.0)) throw PreconditionError("sampler: zero total mass");
  }

  std::size_t operator()(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, cdf_.back());
    const double x = u(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), x);
    auto i = static_cast<std::size_t>(it - cdf_.begin());
    if (i >= cdf_.size()) i = cdf_.size() - 1;
    // x can round onto cdf.back(); step off any zero-mass tail states
    while (i > 0 && cdf_[i] == cdf_[i - 1]) --i;
    return i;
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace detail

/// Monte Carlo estimate of the K-way weights. The same mc_samples pools of
/// K-1 competitors are shared across all states; each state's estimate is
/// an average over mc_samples iid pools. Deterministic given params.rng_seed.
inline BTWeights bt_weight_mc(const DiscreteDistribution& p, std::span<const double> rewards,
                              const BTParams& params) {
  params.validate();
  if (rewards.size() != p.size()) throw PreconditionError("bt_weight_mc: size mismatch");
  std::vector<double> z(p.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = rewards[i] / params.temperature;

  Rng rng(params.rng_seed);
  detail::CumulativeSampler draw(p.weights());
  const std::size_t competitors = params.pool_size - 1;
  // log sum_j e^{z(Y_j)} for each sampled pool
  std::vector<double> pool_log_sum(params.mc_samples);
  std::vector<double> pool(competitors);
  for (auto& ls : pool_log_sum) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (auto& v : pool) {
      v = z[draw(rng)];
      zmax = std::max(zmax, v);
    }
    double acc = 0.0;
    for (double v : pool) acc += std::exp(v - zmax);
    ls = zmax + std::log(acc);
  }
  const double k = static_cast<double>(params.pool_size);
  BTWeights h(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double acc = 0.0;
    for (double ls : pool_log_sum) acc += k / (1.0 + std::exp(ls - z[i]));
    h[i] = acc / static_cast<double>(params.mc_samples);
  }
  return h;
}

inline BTWeights bt_weight_mc(const DiscreteDistribution& p, const RewardField& r,
                              const BTParams& params) {
  const auto v = r.values(p.space());
  return bt_weight_mc(p, v, params);
}

/// p * H, renormalised. Entries below kDegenerateMass are clamped to zero.
inline DiscreteDistribution tilt(const DiscreteDistribution& p, std::span<const double> h) {
  if (h.size() != p.size()) throw PreconditionError("tilt: weight vector size mismatch");
  std::vector<double> q(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = p[i] * h[i];
    total += q[i];
  }
  if (!(total >= kDegenerateMass)) throw DegenerateStateError("tilt: total mass underflow");
  for (double& v : q) {
    v /= total;
    if (v < kDegenerateMass) v = 0.0;
  }
  return DiscreteDistribution::from_weights(p.space_ptr(), std::move(q));
}

/// Index of the BT winner among `rewards`, chosen with probability
/// proportional to e^{r_i / tau}.
inline std::size_t choose_winner(std::span<const double> rewards, double temperature, Rng& rng) {
  if (rewards.empty()) throw PreconditionError("choose_winner: empty pool");
  double zmax = -std::numeric_limits<double>::infinity();
  for (double r : rewards) zmax = std::max(zmax, r / temperature);
  std::vector<double> w(rewards.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(rewards[i] / temperature - zmax);
  return detail::CumulativeSampler(w)(rng);
}

/// n_select independent tournaments; each draws params.pool_size members iid
/// (with replacement) from `source` and keeps the BT winner.
inline std::vector<StatePoint> tournament_select(std::span<const StatePoint> source,
                                                 const RewardField& r, const BTParams& params,
                                                 std::size_t n_select, Rng& rng) {
  params.validate();
  if (source.empty()) throw PreconditionError("tournament_select: empty source");
  if (n_select < 1) throw PreconditionError("tournament_select: n_select must be >= 1");
  std::vector<double> source_reward(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) source_reward[i] = r(source[i]);

  std::uniform_int_distribution<std::size_t> pick(0, source.size() - 1);
  std::vector<std::size_t> pool(params.pool_size);
  std::vector<double> pool_reward(params.pool_size);
  std::vector<StatePoint> out;
  out.reserve(n_select);
  for (std::size_t n = 0; n < n_select; ++n) {
    for (std::size_t j = 0; j < pool.size(); ++j) {
      pool[j] = pick(rng);
      pool_reward[j] = source_reward[pool[j]];
    }
    out.push_back(source[pool[choose_winner(pool_reward, params.temperature, rng)]]);
  }
  return out;
}

inline std::vector<StatePoint> tournament_select(std::span<const StatePoint> source,
                                                 const RewardField& r, const BTParams& params,
                                                 std::size_t n_select) {
  Rng rng(params.rng_seed);
  return tournament_select(source, r, params, n_select, rng);
}

}  // namespace btcurate

#endif  // BTCURATE_BT_CURATION_HPP_
