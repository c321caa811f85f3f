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

// Particle form of the curation loop: a growing dataset, owner tournaments,
// a Gaussian mixture as the generative model, public tournaments on its
// samples, and accumulation of the publicly kept samples.

#ifndef BTCURATE_PARTICLE_DYNAMICS_HPP_
#define BTCURATE_PARTICLE_DYNAMICS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "btcurate/bt_curation.hpp"
#include "btcurate/common.hpp"
#include "btcurate/diagnostics.hpp"
#include "btcurate/gmm.hpp"
#include "btcurate/rewards.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

/// Points in insertion order, each tagged with the iteration that added it.
struct ParticleDataset {
  std::vector<StatePoint> points;
  std::vector<std::size_t> iteration_added;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  void append(std::span<const StatePoint> batch, std::size_t tag) {
    if (!iteration_added.empty() && tag < iteration_added.back()) {
      throw PreconditionError("ParticleDataset: tags must be non-decreasing");
    }
    points.insert(points.end(), batch.begin(), batch.end());
    iteration_added.insert(iteration_added.end(), batch.size(), tag);
  }

  /// Drops every point tagged before `min_tag`.
  void drop_before(std::size_t min_tag) {
    std::size_t first = 0;
    while (first < iteration_added.size() && iteration_added[first] < min_tag) ++first;
    points.erase(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(first));
    iteration_added.erase(iteration_added.begin(),
                          iteration_added.begin() + static_cast<std::ptrdiff_t>(first));
  }

  std::size_t count_tagged(std::size_t tag) const {
    return static_cast<std::size_t>(std::count(iteration_added.begin(), iteration_added.end(), tag));
  }
};

enum class Accumulation { accumulate, window };

struct ParticleRunConfig {
  std::size_t init_n = 1000;
  std::vector<Interval> box{{-5.0, 5.0}, {-5.0, 5.0}};
  std::size_t owner_select_n = 100;
  std::size_t gen_n = 200;
  std::size_t public_select_n = 50;
  std::size_t iterations = 100;
  // pool = source size / selections: 1000 / 100 and 200 / 50
  BTParams owner_bt{10, 0.5, 10000, 0};
  BTParams public_bt{4, 0.5, 10000, 0};
  EMConfig em{};
  Accumulation accumulation = Accumulation::accumulate;
  std::size_t window = 10;  // iterations kept in window mode
  bool mean_dist_over_dataset = false;
  std::uint64_t seed = 0;

  void validate() const {
    if (init_n < 1 || owner_select_n < 1 || gen_n < 1 || public_select_n < 1) {
      throw PreconditionError("ParticleRunConfig: all counts must be >= 1");
    }
    if (iterations < 1) throw PreconditionError("ParticleRunConfig: iterations must be >= 1");
    if (box.empty()) throw PreconditionError("ParticleRunConfig: empty box");
    for (const auto& b : box) {
      if (!(b.lo < b.hi)) throw PreconditionError("ParticleRunConfig: box needs lo < hi");
    }
    if (accumulation == Accumulation::window && window < 1) {
      throw PreconditionError("ParticleRunConfig: window must be >= 1");
    }
    owner_bt.validate();
    public_bt.validate();
    em.validate();
  }
};

struct IterationArtifacts {
  std::vector<StatePoint> owner_curated;
  GaussianMixture model;
  std::vector<StatePoint> generated;
  std::vector<StatePoint> public_curated;
};

/// init_n iid uniform points over the box, tagged 0.
inline ParticleDataset init_dataset(const ParticleRunConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, "init"));
  std::vector<std::uniform_real_distribution<double>> coord;
  for (const auto& b : cfg.box) coord.emplace_back(b.lo, b.hi);
  ParticleDataset d;
  std::vector<StatePoint> pts;
  pts.reserve(cfg.init_n);
  for (std::size_t i = 0; i < cfg.init_n; ++i) {
    std::vector<double> c(cfg.box.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = coord[k](rng);
    pts.emplace_back(std::move(c));
  }
  d.append(pts, 0);
  return d;
}

/// One round at iteration t >= 1: owner tournaments on the dataset, mixture
/// fit on the owner-curated points, generation, public tournaments on the
/// generated points, dataset update.
inline std::pair<ParticleDataset, IterationArtifacts> iterate(ParticleDataset data,
                                                              const ParticleRunConfig& cfg,
                                                              const RewardField& owner,
                                                              const RewardField& pub,
                                                              std::size_t t) {
  if (data.empty()) throw PreconditionError("iterate: empty dataset");
  IterationArtifacts art;
  {
    Rng rng(derive_seed(cfg.seed, "owner", t));
    art.owner_curated = tournament_select(data.points, owner, cfg.owner_bt, cfg.owner_select_n, rng);
  }
  EMConfig em = cfg.em;
  em.rng_seed = derive_seed(cfg.seed, "em", t);
  art.model = fit(art.owner_curated, em);
  art.generated = sample(art.model, cfg.gen_n, derive_seed(cfg.seed, "generate", t));
  {
    Rng rng(derive_seed(cfg.seed, "public", t));
    art.public_curated = tournament_select(art.generated, pub, cfg.public_bt, cfg.public_select_n, rng);
  }
  data.append(art.public_curated, t);
  if (cfg.accumulation == Accumulation::window && t >= cfg.window) {
    data.drop_before(t - cfg.window + 1);
  }
  return {std::move(data), std::move(art)};
}

using ParticleObserver =
    std::function<void(std::size_t t, const ParticleDataset&, const IterationArtifacts&)>;

/// T iterations from init_dataset, one record per iteration computed on the
/// publicly kept points of that iteration (or on the whole dataset for the
/// mean distances when cfg.mean_dist_over_dataset is set).
inline std::vector<TrajectoryRecord> run_particles(const ParticleRunConfig& cfg,
                                                   const RewardField& owner,
                                                   const RewardField& pub,
                                                   const RegimeGeometry& geometry,
                                                   const ParticleObserver& observe = {}) {
  cfg.validate();
  ParticleDataset data = init_dataset(cfg);
  std::vector<TrajectoryRecord> out;
  out.reserve(cfg.iterations);
  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    auto [next, art] = iterate(std::move(data), cfg, owner, pub, t);
    data = std::move(next);
    const std::span<const StatePoint> dist_cloud =
        cfg.mean_dist_over_dataset ? std::span<const StatePoint>(data.points)
                                   : std::span<const StatePoint>(art.public_curated);
    out.push_back(geometry.record(t, art.public_curated, dist_cloud));
    if (observe) observe(t, data, art);
  }
  return out;
}

}  // namespace btcurate

#endif  // BTCURATE_PARTICLE_DYNAMICS_HPP_
