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

// Trajectory measurements: neighbourhood masses, log-linear decay fits,
// satisfaction rates, total variation and kernel density grids.

#ifndef BTCURATE_DIAGNOSTICS_HPP_
#define BTCURATE_DIAGNOSTICS_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "btcurate/common.hpp"
#include "btcurate/distribution.hpp"
#include "btcurate/exact_dynamics.hpp"
#include "btcurate/rewards.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

struct TrajectoryRecord {
  std::size_t iteration = 0;
  double mass_outside_owner = 0.0;
  double mass_outside_public = 0.0;
  double mass_outside_target = 0.0;
  double mean_dist_owner = 0.0;
  double mean_dist_public = 0.0;
  double satisfaction_owner = 0.0;
  double satisfaction_public = 0.0;
  double tv_to_predicted = 0.0;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

inline constexpr std::string_view kTrajectoryHeader =
    "iteration,mass_outside_owner,mass_outside_public,mass_outside_target,"
    "mean_dist_owner,mean_dist_public,satisfaction_owner,satisfaction_public,"
    "tv_to_predicted";

inline void write_trajectory_csv(std::ostream& os, std::span<const TrajectoryRecord> rows) {
  os << kTrajectoryHeader << '\n';
  for (const auto& r : rows) {
    os << r.iteration << ',' << format_double(r.mass_outside_owner) << ','
       << format_double(r.mass_outside_public) << ',' << format_double(r.mass_outside_target)
       << ',' << format_double(r.mean_dist_owner) << ',' << format_double(r.mean_dist_public)
       << ',' << format_double(r.satisfaction_owner) << ','
       << format_double(r.satisfaction_public) << ',' << format_double(r.tv_to_predicted)
       << '\n';
  }
}

// ---------------------------------------------------------------------------
// Masses

inline double region_mass(const DiscreteDistribution& p, const Region& region) {
  if (!region.valid_for(p.space())) throw PreconditionError("region_mass: index out of range");
  return std::clamp(p.mass(region), 0.0, 1.0);
}

/// Mass off `region`, summed directly so tiny values keep full precision.
inline double outside_mass(const DiscreteDistribution& p, const Region& region) {
  if (!region.valid_for(p.space())) throw PreconditionError("outside_mass: index out of range");
  double m = 0.0;
  auto it = region.begin();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (it != region.end() && *it == i) {
      ++it;
      continue;
    }
    m += p[i];
  }
  return std::clamp(m, 0.0, 1.0);
}

struct Disk {
  StatePoint center;
  double radius = 1.0;

  bool contains(const StatePoint& x) const {
    return euclidean(x.coords, center.coords) <= radius + kBoundaryTolerance;
  }
};

/// Fraction of the cloud satisfying `inside`.
template <class Pred>
  requires std::predicate<Pred&, const StatePoint&>
double region_mass(std::span<const StatePoint> cloud, Pred&& inside) {
  if (cloud.empty()) throw PreconditionError("region_mass: empty point cloud");
  std::size_t hits = 0;
  for (const auto& x : cloud) {
    if (inside(x)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(cloud.size());
}

inline double region_mass(std::span<const StatePoint> cloud, const Disk& disk) {
  return region_mass(cloud, [&](const StatePoint& x) { return disk.contains(x); });
}

// ---------------------------------------------------------------------------
// Exponential decay fits

struct DecaySample {
  double iteration = 0.0;
  double mass = 0.0;
};

struct DecayFit {
  double rate = 0.0;           // c in mass ~ C e^{-c t}
  double log_intercept = 0.0;  // log C
  double r_squared = 0.0;
  double first_iteration = 0.0;
  double last_iteration = 0.0;
  std::size_t points = 0;

  bool decaying() const { return rate > 0.0; }
};

inline constexpr double kDecayFloor = 1e-12;
inline constexpr double kDecayCeiling = 0.5;

/// OLS of log(mass) on iteration over the samples with mass in
/// [floor, ceiling]. A zero-variance window reports R^2 = 1.
inline DecayFit fit_exponential_decay(std::span<const DecaySample> series,
                                      double floor = kDecayFloor,
                                      double ceiling = kDecayCeiling) {
  std::vector<double> t;
  std::vector<double> y;
  for (const auto& s : series) {
    if (s.mass >= floor && s.mass <= ceiling && s.mass > 0.0) {
      t.push_back(s.iteration);
      y.push_back(std::log(s.mass));
    }
  }
  if (t.size() < 3) throw PreconditionError("fit_exponential_decay: fewer than 3 points in window");
  const auto n = static_cast<double>(t.size());
  double tm = 0.0;
  double ym = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tm += t[i];
    ym += y[i];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - tm) * (t[i] - tm);
    sty += (t[i] - tm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (!(stt > 0.0)) throw PreconditionError("fit_exponential_decay: window has a single iteration");
  const double slope = sty / stt;
  DecayFit f;
  f.rate = -slope;
  f.log_intercept = ym - slope * tm;
  f.points = t.size();
  f.first_iteration = *std::min_element(t.begin(), t.end());
  f.last_iteration = *std::max_element(t.begin(), t.end());
  if (syy <= 1e-300) {
    f.r_squared = 1.0;
    f.rate = 0.0;
  } else {
    double sse = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = y[i] - (f.log_intercept + slope * t[i]);
      sse += e * e;
    }
    f.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return f;
}

/// Mass series p_t(region) for t = 0..T.
inline std::vector<DecaySample> mass_series(std::span<const DiscreteDistribution> traj,
                                            const Region& region) {
  std::vector<DecaySample> out;
  out.reserve(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    out.push_back({static_cast<double>(t), region_mass(traj[t], region)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Satisfaction and distances

/// Fraction of points on the field's plateau (inside the disk / word range).
inline double satisfaction(std::span<const StatePoint> cloud, const RewardField& field) {
  if (cloud.empty()) throw PreconditionError("satisfaction: empty point cloud");
  if (field.kind() == RewardField::Kind::tabular) {
    throw PreconditionError("satisfaction: tabular fields need enumerated states");
  }
  const double top = *field.plateau() - kArgmaxEps;
  return region_mass(cloud, [&](const StatePoint& x) { return field(x) >= top; });
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw PreconditionError("total_variation: support mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

inline double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (!p.same_support_enumeration(q)) throw PreconditionError("total_variation: support mismatch");
  return total_variation(p.weights(), q.weights());
}

// ---------------------------------------------------------------------------
// Regime geometry: optimal sets, neighbourhoods and the predicted limit on a
// reference space, turned into per-iteration records.

class RegimeGeometry {
 public:
  RegimeGeometry(const ExactRunConfig& cfg, double eta)
      : space_(cfg.space), owner_(cfg.owner), public_(cfg.public_), eta_(eta),
        prediction_(predict(cfg)) {
    const auto& s = *space_;
    owner_nbhd_ = neighborhood(s, prediction_.owner_opt, eta_);
    public_nbhd_ = neighborhood(s, prediction_.public_opt, eta_);
    target_nbhd_ = neighborhood(s, prediction_.target, eta_);
    owner_mask_ = prediction_.owner_opt.mask(s.size());
    public_mask_ = prediction_.public_opt.mask(s.size());
    dist_owner_ = anchor_distances(owner_, prediction_.owner_opt);
    dist_public_ = anchor_distances(public_, prediction_.public_opt);
  }

  const StateSpace& space() const { return *space_; }
  double eta() const { return eta_; }
  const LimitPrediction& prediction() const { return prediction_; }
  const Region& owner_neighborhood() const { return owner_nbhd_; }
  const Region& public_neighborhood() const { return public_nbhd_; }
  const Region& target_neighborhood() const { return target_nbhd_; }

  TrajectoryRecord record(std::size_t t, const DiscreteDistribution& p) const {
    TrajectoryRecord r;
    r.iteration = t;
    r.mass_outside_owner = outside_mass(p, owner_nbhd_);
    r.mass_outside_public = outside_mass(p, public_nbhd_);
    r.mass_outside_target = outside_mass(p, target_nbhd_);
    r.mean_dist_owner = p.expectation(dist_owner_);
    r.mean_dist_public = p.expectation(dist_public_);
    r.satisfaction_owner = region_mass(p, prediction_.owner_opt);
    r.satisfaction_public = region_mass(p, prediction_.public_opt);
    r.tv_to_predicted = total_variation(p, prediction_.limit);
    return r;
  }

  /// Record for a point cloud. Neighbourhood membership is the distance to
  /// the region's reference states; satisfaction uses the reward plateau
  /// directly; the TV term compares the cloud binned onto the reference
  /// states with the predicted limit.
  TrajectoryRecord record(std::size_t t, std::span<const StatePoint> cloud,
                          std::span<const StatePoint> distance_cloud) const {
    const auto& s = *space_;
    TrajectoryRecord r;
    r.iteration = t;
    const auto outside = [&](const Region& core) {
      return region_mass(cloud, [&](const StatePoint& x) { return distance_to(s, x, core) >= eta_; });
    };
    r.mass_outside_owner = outside(prediction_.owner_opt);
    r.mass_outside_public = outside(prediction_.public_opt);
    r.mass_outside_target = outside(prediction_.target);
    r.mean_dist_owner = mean_distance(distance_cloud, owner_, prediction_.owner_opt);
    r.mean_dist_public = mean_distance(distance_cloud, public_, prediction_.public_opt);
    r.satisfaction_owner = cloud_satisfaction(cloud, owner_, owner_mask_);
    r.satisfaction_public = cloud_satisfaction(cloud, public_, public_mask_);
    std::vector<double> hist(s.size(), 0.0);
    for (const auto& x : cloud) hist[s.nearest_index(x)] += 1.0 / static_cast<double>(cloud.size());
    r.tv_to_predicted = total_variation(hist, prediction_.limit.weights());
    return r;
  }

 private:
  std::vector<double> anchor_distances(const RewardField& f, const Region& opt) const {
    const auto& s = *space_;
    std::vector<double> d(s.size());
    const auto anchor = f.anchor();
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = anchor ? s.distance(s.point(i), *anchor) : distance_to(s, i, opt);
    }
    return d;
  }

  double mean_distance(std::span<const StatePoint> cloud, const RewardField& f,
                       const Region& opt) const {
    if (cloud.empty()) throw PreconditionError("mean distance: empty point cloud");
    const auto anchor = f.anchor();
    double acc = 0.0;
    for (const auto& x : cloud) {
      acc += anchor ? euclidean(x.coords, anchor->coords) : distance_to(*space_, x, opt);
    }
    return acc / static_cast<double>(cloud.size());
  }

  double cloud_satisfaction(std::span<const StatePoint> cloud, const RewardField& f,
                            const std::vector<char>& mask) const {
    if (f.kind() != RewardField::Kind::tabular) return satisfaction(cloud, f);
    return region_mass(cloud, [&](const StatePoint& x) { return mask[space_->nearest_index(x)] != 0; });
  }

  SpacePtr space_;
  RewardField owner_;
  RewardField public_;
  double eta_;
  LimitPrediction prediction_;
  Region owner_nbhd_;
  Region public_nbhd_;
  Region target_nbhd_;
  std::vector<char> owner_mask_;
  std::vector<char> public_mask_;
  std::vector<double> dist_owner_;
  std::vector<double> dist_public_;
};

/// Records for t = 1..T of an exact trajectory p_0..p_T.
inline std::vector<TrajectoryRecord> exact_records(const RegimeGeometry& geometry,
                                                   std::span<const DiscreteDistribution> traj) {
  std::vector<TrajectoryRecord> out;
  for (std::size_t t = 1; t < traj.size(); ++t) out.push_back(geometry.record(t, traj[t]));
  return out;
}

// ---------------------------------------------------------------------------
// Kernel density on a grid

struct Bandwidth {
  enum class Rule { scott, fixed };
  Rule rule = Rule::scott;
  double h = 0.0;

  static Bandwidth scott() { return {}; }
  static Bandwidth fixed(double h) {
    if (!(h > 0.0)) throw PreconditionError("Bandwidth: fixed width must be positive");
    return {Rule::fixed, h};
  }
};

inline constexpr double kKdeFallbackWidth = 0.1;

struct KdeGrid {
  std::vector<double> density;    // one value per grid state
  std::vector<double> bandwidth;  // per dimension
};

/// Gaussian product-kernel density evaluated at every grid state. Scott's
/// rule uses h_d = sigma_d * n^{-1/(dim + 4)}; a zero-variance dimension falls
/// back to h = 0.1.
inline KdeGrid kde_grid(std::span<const StatePoint> points, const StateSpace& grid,
                        Bandwidth bw = Bandwidth::scott()) {
  if (grid.kind() != StateSpace::Kind::grid) throw PreconditionError("kde_grid: needs a grid space");
  if (points.size() < 2) throw PreconditionError("kde_grid: needs at least 2 points");
  const std::size_t dim = grid.dim();
  const std::size_t n = points.size();
  for (const auto& p : points) {
    if (p.dim() != dim) throw PreconditionError("kde_grid: point dimension mismatch");
  }
  KdeGrid out;
  out.bandwidth.assign(dim, bw.h);
  if (bw.rule == Bandwidth::Rule::scott) {
    const double factor = std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(dim) + 4.0));
    for (std::size_t d = 0; d < dim; ++d) {
      double mean = 0.0;
      for (const auto& p : points) mean += p[d];
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (const auto& p : points) var += (p[d] - mean) * (p[d] - mean);
      var /= static_cast<double>(n - 1);
      const double sd = std::sqrt(var);
      out.bandwidth[d] = sd > 0.0 ? sd * factor : kKdeFallbackWidth;
    }
  }

  const auto res = static_cast<Eigen::Index>(grid.resolution());
  // Per-dimension kernel matrices K_d(g, i) = phi((g - x_i) / h) / h.
  std::vector<Eigen::MatrixXd> kernels;
  for (std::size_t d = 0; d < dim; ++d) {
    const auto& b = grid.bounds()[d];
    const double h = out.bandwidth[d];
    Eigen::MatrixXd k(res, static_cast<Eigen::Index>(n));
    for (Eigen::Index g = 0; g < res; ++g) {
      const double gc = b.lo + (b.hi - b.lo) * static_cast<double>(g) / static_cast<double>(res - 1);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = (gc - points[i][d]) / h;
        k(g, static_cast<Eigen::Index>(i)) = std::exp(-0.5 * u * u) / (h * std::sqrt(2.0 * std::numbers::pi));
      }
    }
    kernels.push_back(std::move(k));
  }
  out.density.resize(grid.size());
  if (dim == 1) {
    const Eigen::VectorXd dens = kernels[0].rowwise().sum() / static_cast<double>(n);
    for (Eigen::Index g = 0; g < res; ++g) out.density[static_cast<std::size_t>(g)] = dens[g];
  } else {
    const Eigen::MatrixXd dens = kernels[0] * kernels[1].transpose() / static_cast<double>(n);
    for (Eigen::Index i = 0; i < res; ++i) {
      for (Eigen::Index j = 0; j < res; ++j) {
        out.density[static_cast<std::size_t>(i * res + j)] = dens(i, j);
      }
    }
  }
  return out;
}

/// Midpoint-rule cell volume of a grid.
inline double cell_volume(const StateSpace& grid) {
  double v = 1.0;
  for (const auto& b : grid.bounds()) v *= (b.hi - b.lo) / static_cast<double>(grid.resolution() - 1);
  return v;
}

inline void write_kde_csv(std::ostream& os, const StateSpace& grid, const KdeGrid& kde) {
  os << (grid.dim() == 2 ? "x,y,density\n" : "x,density\n");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid.point(i);
    for (std::size_t d = 0; d < p.dim(); ++d) os << format_double(p[d]) << ',';
    os << format_double(kde.density[i]) << '\n';
  }
}

}  // namespace btcurate

#endif  // BTCURATE_DIAGNOSTICS_HPP_
