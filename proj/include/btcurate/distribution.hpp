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

#ifndef BTCURATE_DISTRIBUTION_HPP_
#define BTCURATE_DISTRIBUTION_HPP_

#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "btcurate/common.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

using SpacePtr = std::shared_ptr<const StateSpace>;

inline SpacePtr share(StateSpace space) {
  return std::make_shared<const StateSpace>(std::move(space));
}

/// Probability weights over the enumerated states of a space. Weights are
/// non-negative and sum to one; every constructor normalises.
class DiscreteDistribution {
 public:
  static DiscreteDistribution uniform(SpacePtr space) {
    const std::size_t n = space->size();
    return DiscreteDistribution(std::move(space),
                                std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static DiscreteDistribution from_weights(SpacePtr space, std::vector<double> w) {
    if (w.size() != space->size()) {
      throw PreconditionError("distribution: weight count does not match space");
    }
    double total = 0.0;
    for (double v : w) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw PreconditionError("distribution: weights must be finite and non-negative");
      }
      total += v;
    }
    if (!(total > 0.0)) throw PreconditionError("distribution: zero total mass");
    for (double& v : w) v /= total;
    return DiscreteDistribution(std::move(space), std::move(w));
  }

  static DiscreteDistribution point_mass(SpacePtr space, std::size_t i) {
    std::vector<double> w(space->size(), 0.0);
    w.at(i) = 1.0;
    return DiscreteDistribution(std::move(space), std::move(w));
  }

  /// This distribution conditioned on `region`.
  DiscreteDistribution restricted_to(const Region& region) const {
    if (!region.valid_for(*space_)) throw PreconditionError("restricted_to: index out of range");
    std::vector<double> w(size(), 0.0);
    for (std::size_t i : region) w[i] = weights_[i];
    if (!(std::accumulate(w.begin(), w.end(), 0.0) > 0.0)) {
      throw PreconditionError("restricted_to: region carries no mass");
    }
    return from_weights(space_, std::move(w));
  }

  const SpacePtr& space_ptr() const { return space_; }
  const StateSpace& space() const { return *space_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  double total() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

  double mass(const Region& region) const {
    double m = 0.0;
    for (std::size_t i : region) m += weights_.at(i);
    return m;
  }

  double expectation(std::span<const double> values) const {
    if (values.size() != size()) throw PreconditionError("expectation: size mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < size(); ++i) e += weights_[i] * values[i];
    return e;
  }

  /// States carrying more than `threshold` mass.
  Region support(double threshold = 0.0) const {
    return Region::where(size(), [&](std::size_t i) { return weights_[i] > threshold; });
  }

  bool same_support_enumeration(const DiscreteDistribution& other) const {
    return space_ == other.space_ || (space_->size() == other.space_->size() &&
                                      space_->points() == other.space_->points());
  }

 private:
  DiscreteDistribution(SpacePtr space, std::vector<double> w)
      : space_(std::move(space)), weights_(std::move(w)) {}

  SpacePtr space_;
  std::vector<double> weights_;
};

}  // namespace btcurate

#endif  // BTCURATE_DISTRIBUTION_HPP_
