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

// Measure-level curation loop on a finite support. One iteration is the
// first curator's BT tilt followed by the second curator's BT tilt; the
// model is assumed to reproduce its curated training distribution exactly.

#ifndef BTCURATE_EXACT_DYNAMICS_HPP_
#define BTCURATE_EXACT_DYNAMICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "btcurate/bt_curation.hpp"
#include "btcurate/common.hpp"
#include "btcurate/distribution.hpp"
#include "btcurate/rewards.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

enum class Order { owner_first, public_first };

inline std::string_view to_string(Order o) {
  return o == Order::owner_first ? "owner-first" : "public-first";
}

struct ExactRunConfig {
  SpacePtr space;
  RewardField owner = RewardField::constant();
  RewardField public_ = RewardField::constant();
  std::size_t owner_pool = 2;   // K
  std::size_t public_pool = 2;  // M
  double temperature = 1.0;
  std::size_t iterations = 500;
  std::optional<DiscreteDistribution> initial;  // uniform when unset
  Order order = Order::owner_first;
  std::size_t mc_samples = 10000;  // only used when a pool size exceeds 2
  std::uint64_t seed = 0;

  DiscreteDistribution initial_distribution() const {
    if (initial) return *initial;
    return DiscreteDistribution::uniform(space);
  }

  void validate() const {
    if (!space) throw PreconditionError("ExactRunConfig: space is not set");
    if (iterations < 1) throw PreconditionError("ExactRunConfig: iterations must be >= 1");
    if (owner_pool < 2 || public_pool < 2) {
      throw PreconditionError("ExactRunConfig: pool sizes must be >= 2");
    }
    if (!(temperature > 0.0)) throw PreconditionError("ExactRunConfig: temperature must be positive");
    if (initial && !initial->same_support_enumeration(DiscreteDistribution::uniform(space))) {
      throw PreconditionError("ExactRunConfig: initial distribution lives on another space");
    }
  }
};

/// Precomputed curation operators for one configuration.
class ExactDynamics {
 public:
  explicit ExactDynamics(ExactRunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    owner_values_ = cfg_.owner.values(*cfg_.space);
    public_values_ = cfg_.public_.values(*cfg_.space);
    if (cfg_.owner_pool == 2) owner_kernel_.emplace(owner_values_, cfg_.temperature);
    if (cfg_.public_pool == 2) public_kernel_.emplace(public_values_, cfg_.temperature);
  }

  const ExactRunConfig& config() const { return cfg_; }

  /// Owner curation, idealised model update, public curation (or the reverse
  /// for Order::public_first). `t` selects the Monte Carlo sub-seed.
  DiscreteDistribution step(const DiscreteDistribution& p, std::size_t t = 0) const {
    if (cfg_.order == Order::owner_first) {
      return curate_public(curate_owner(p, t), t);
    }
    return curate_owner(curate_public(p, t), t);
  }

  /// p_0, p_1, ..., p_T.
  std::vector<DiscreteDistribution> run() const {
    std::vector<DiscreteDistribution> traj;
    traj.reserve(cfg_.iterations + 1);
    traj.push_back(cfg_.initial_distribution());
    for (std::size_t t = 1; t <= cfg_.iterations; ++t) traj.push_back(step(traj.back(), t));
    return traj;
  }

  /// p_T only, without keeping the trajectory.
  DiscreteDistribution final_state() const {
    auto p = cfg_.initial_distribution();
    for (std::size_t t = 1; t <= cfg_.iterations; ++t) p = step(p, t);
    return p;
  }

  const std::vector<double>& owner_values() const { return owner_values_; }
  const std::vector<double>& public_values() const { return public_values_; }

 private:
  DiscreteDistribution curate_owner(const DiscreteDistribution& p, std::size_t t) const {
    return curate(p, owner_kernel_, owner_values_, cfg_.owner_pool, "owner", t);
  }
  DiscreteDistribution curate_public(const DiscreteDistribution& p, std::size_t t) const {
    return curate(p, public_kernel_, public_values_, cfg_.public_pool, "public", t);
  }

  DiscreteDistribution curate(const DiscreteDistribution& p,
                              const std::optional<PairwiseKernel>& kernel,
                              const std::vector<double>& values, std::size_t pool,
                              std::string_view label, std::size_t t) const {
    if (kernel) return tilt(p, kernel->weights(p.weights()));
    BTParams params{pool, cfg_.temperature, cfg_.mc_samples, derive_seed(cfg_.seed, label, t)};
    return tilt(p, bt_weight_mc(p, values, params));
  }

  ExactRunConfig cfg_;
  std::vector<double> owner_values_;
  std::vector<double> public_values_;
  std::optional<PairwiseKernel> owner_kernel_;
  std::optional<PairwiseKernel> public_kernel_;
};

inline DiscreteDistribution step(const DiscreteDistribution& p, const ExactRunConfig& cfg) {
  return ExactDynamics(cfg).step(p);
}

inline std::vector<DiscreteDistribution> run(const ExactRunConfig& cfg) {
  return ExactDynamics(cfg).run();
}

/// Optimal sets, regime and the support the limit theorems predict.
struct LimitPrediction {
  Region owner_opt;
  Region public_opt;
  Regime regime = Regime::perfect;
  Region target;  // A_star, A_shared, A_{P|O} or A_{O|P}
  DiscreteDistribution limit;
};

inline LimitPrediction predict(const ExactRunConfig& cfg) {
  cfg.validate();
  const auto& space = *cfg.space;
  Region a_o = argmax_set(cfg.owner, space);
  Region a_p = argmax_set(cfg.public_, space);
  const Regime regime = classify_regime(a_o, a_p);
  Region target;
  switch (regime) {
    case Regime::perfect:
      target = a_o;
      break;
    case Regime::partial:
      target = intersection(a_o, a_p);
      break;
    case Regime::disjoint:
      target = cfg.order == Order::owner_first ? conditional_argmax(cfg.public_, a_o, space)
                                               : conditional_argmax(cfg.owner, a_p, space);
      break;
  }
  if (target.empty()) throw PreconditionError("predicted_limit: empty target region");
  auto limit = cfg.initial_distribution().restricted_to(target);
  return LimitPrediction{std::move(a_o), std::move(a_p), regime, std::move(target),
                         std::move(limit)};
}

/// p_0 renormalised on the limiting support of the configuration's regime.
inline DiscreteDistribution predicted_limit(const ExactRunConfig& cfg) {
  return predict(cfg).limit;
}

}  // namespace btcurate

#endif  // BTCURATE_EXACT_DYNAMICS_HPP_
