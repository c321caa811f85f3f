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

// Finite content domains: endpoint-inclusive lattices over boxes and integer
// alphabets, the metric on them, and open neighbourhoods of index sets.

#ifndef BTCURATE_STATE_SPACE_HPP_
#define BTCURATE_STATE_SPACE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "btcurate/common.hpp"

namespace btcurate {

/// A content point. Grid points carry 1 or 2 real coordinates; alphabet
/// points carry their integer label as the single coordinate.
struct StatePoint {
  std::vector<double> coords;

  StatePoint() = default;
  StatePoint(std::initializer_list<double> c) : coords(c) {}
  explicit StatePoint(std::vector<double> c) : coords(std::move(c)) {}

  static StatePoint label(long v) { return StatePoint{static_cast<double>(v)}; }

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  long as_label() const { return std::lround(coords.at(0)); }

  bool finite() const {
    return std::all_of(coords.begin(), coords.end(),
                       [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const StatePoint&, const StatePoint&) = default;
};

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw PreconditionError("distance: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

class StateSpace {
 public:
  enum class Kind { grid, alphabet };

  /// Row-major lattice of resolution^dim points including both endpoints of
  /// every interval. The first dimension varies slowest.
  static StateSpace grid(std::vector<Interval> bounds, std::size_t resolution) {
    if (bounds.empty() || bounds.size() > 2) {
      throw PreconditionError("grid: dimension must be 1 or 2");
    }
    if (resolution < 2) throw PreconditionError("grid: resolution must be >= 2");
    for (const auto& b : bounds) {
      if (!(std::isfinite(b.lo) && std::isfinite(b.hi)) || !(b.lo < b.hi)) {
        throw PreconditionError("grid: each interval needs finite lo < hi");
      }
    }
    StateSpace s;
    s.kind_ = Kind::grid;
    s.bounds_ = std::move(bounds);
    s.resolution_ = resolution;
    s.build_grid();
    return s;
  }

  static StateSpace alphabet(std::vector<long> labels) {
    if (labels.empty()) throw PreconditionError("alphabet: labels must be non-empty");
    for (std::size_t i = 1; i < labels.size(); ++i) {
      if (labels[i] <= labels[i - 1]) {
        throw PreconditionError("alphabet: labels must be strictly increasing");
      }
    }
    StateSpace s;
    s.kind_ = Kind::alphabet;
    s.labels_ = std::move(labels);
    s.points_.reserve(s.labels_.size());
    for (long l : s.labels_) s.points_.push_back(StatePoint::label(l));
    return s;
  }

  static StateSpace alphabet_range(long first, long last) {
    std::vector<long> labels;
    for (long l = first; l <= last; ++l) labels.push_back(l);
    return alphabet(std::move(labels));
  }

  Kind kind() const { return kind_; }
  std::size_t dim() const { return kind_ == Kind::grid ? bounds_.size() : 1; }
  std::size_t size() const { return points_.size(); }
  const std::vector<StatePoint>& points() const { return points_; }
  const StatePoint& point(std::size_t i) const { return points_.at(i); }

  const std::vector<Interval>& bounds() const { return bounds_; }
  std::size_t resolution() const { return resolution_; }
  const std::vector<long>& labels() const { return labels_; }

  double distance(const StatePoint& a, const StatePoint& b) const {
    if (a.dim() != dim() || b.dim() != dim()) {
      throw PreconditionError("distance: point dimension does not match space");
    }
    return euclidean(a.coords, b.coords);
  }
  double distance(std::size_t i, std::size_t j) const {
    return euclidean(points_[i].coords, points_[j].coords);
  }

  /// Smallest step between neighbouring enumerated points.
  double spacing() const {
    if (kind_ == Kind::grid) {
      double h = std::numeric_limits<double>::infinity();
      for (const auto& b : bounds_) {
        h = std::min(h, (b.hi - b.lo) / static_cast<double>(resolution_ - 1));
      }
      return h;
    }
    if (labels_.size() < 2) return 1.0;
    long gap = labels_[1] - labels_[0];
    for (std::size_t i = 2; i < labels_.size(); ++i) {
      gap = std::min(gap, labels_[i] - labels_[i - 1]);
    }
    return static_cast<double>(gap);
  }

  /// Index of the enumerated point equal to x (within 1e-9 per coordinate).
  std::optional<std::size_t> index_of(const StatePoint& x) const {
    if (x.dim() != dim() || !x.finite()) return std::nullopt;
    if (kind_ == Kind::alphabet) {
      const double v = x[0];
      if (std::abs(v - std::round(v)) > 1e-9) return std::nullopt;
      auto it = std::lower_bound(labels_.begin(), labels_.end(), std::lround(v));
      if (it == labels_.end() || *it != std::lround(v)) return std::nullopt;
      return static_cast<std::size_t>(it - labels_.begin());
    }
    std::size_t idx = 0;
    for (std::size_t d = 0; d < bounds_.size(); ++d) {
      const auto& b = bounds_[d];
      const double steps = static_cast<double>(resolution_ - 1);
      const double u = (x[d] - b.lo) / (b.hi - b.lo) * steps;
      const double k = std::round(u);
      if (k < 0 || k > steps || std::abs(u - k) > 1e-9 * steps) return std::nullopt;
      idx = idx * resolution_ + static_cast<std::size_t>(k);
    }
    return idx;
  }

  /// Enumerated point closest to x; used to bin continuous samples.
  std::size_t nearest_index(const StatePoint& x) const {
    if (x.dim() != dim()) throw PreconditionError("nearest_index: dimension mismatch");
    if (kind_ == Kind::alphabet) {
      std::size_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < labels_.size(); ++i) {
        const double d = std::abs(static_cast<double>(labels_[i]) - x[0]);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      return best;
    }
    std::size_t idx = 0;
    for (std::size_t d = 0; d < bounds_.size(); ++d) {
      const auto& b = bounds_[d];
      const double steps = static_cast<double>(resolution_ - 1);
      const double k =
          std::clamp(std::round((x[d] - b.lo) / (b.hi - b.lo) * steps), 0.0, steps);
      idx = idx * resolution_ + static_cast<std::size_t>(k);
    }
    return idx;
  }

 private:
  StateSpace() = default;

  void build_grid() {
    const std::size_t n = resolution_;
    const auto coord = [&](std::size_t d, std::size_t i) {
      const auto& b = bounds_[d];
      return b.lo + (b.hi - b.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    if (bounds_.size() == 1) {
      for (std::size_t i = 0; i < n; ++i) points_.push_back(StatePoint{coord(0, i)});
      return;
    }
    points_.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        points_.push_back(StatePoint{coord(0, i), coord(1, j)});
      }
    }
  }

  Kind kind_ = Kind::alphabet;
  std::vector<Interval> bounds_;
  std::size_t resolution_ = 0;
  std::vector<long> labels_;
  std::vector<StatePoint> points_;
};

inline std::vector<StatePoint> enumerate(const StateSpace& space) { return space.points(); }

inline double distance(const StateSpace& space, const StatePoint& a, const StatePoint& b) {
  return space.distance(a, b);
}

/// A set of state indices, kept sorted and deduplicated.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<std::size_t> idx) : idx_(std::move(idx)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
  }

  static Region all(const StateSpace& space) {
    std::vector<std::size_t> idx(space.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return Region(std::move(idx));
  }

  /// Indices i with pred(i) true.
  template <class Pred>
  static Region where(std::size_t n, Pred&& pred) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (pred(i)) idx.push_back(i);
    }
    Region r;
    r.idx_ = std::move(idx);
    return r;
  }

  bool empty() const { return idx_.empty(); }
  std::size_t size() const { return idx_.size(); }
  const std::vector<std::size_t>& indices() const { return idx_; }
  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  bool contains(std::size_t i) const {
    return std::binary_search(idx_.begin(), idx_.end(), i);
  }
  bool subset_of(const Region& other) const {
    return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
  }
  bool valid_for(const StateSpace& space) const {
    return idx_.empty() || idx_.back() < space.size();
  }

  /// Dense membership mask over n states.
  std::vector<char> mask(std::size_t n) const {
    std::vector<char> m(n, 0);
    for (std::size_t i : idx_) {
      if (i < n) m[i] = 1;
    }
    return m;
  }

  friend Region intersection(const Region& a, const Region& b) {
    Region r;
    std::set_intersection(a.idx_.begin(), a.idx_.end(), b.idx_.begin(), b.idx_.end(),
                          std::back_inserter(r.idx_));
    return r;
  }
  friend Region difference(const Region& a, const Region& b) {
    Region r;
    std::set_difference(a.idx_.begin(), a.idx_.end(), b.idx_.begin(), b.idx_.end(),
                        std::back_inserter(r.idx_));
    return r;
  }
  friend Region complement(const Region& a, const StateSpace& space) {
    return difference(Region::all(space), a);
  }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::vector<std::size_t> idx_;
};

Region intersection(const Region& a, const Region& b);
Region difference(const Region& a, const Region& b);
Region complement(const Region& a, const StateSpace& space);

/// Infimum distance from point i to the core set.
inline double distance_to(const StateSpace& space, std::size_t i, const Region& core) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j : core) {
    best = std::min(best, space.distance(i, j));
    if (best == 0.0) break;
  }
  return best;
}

inline double distance_to(const StateSpace& space, const StatePoint& x, const Region& core) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j : core) best = std::min(best, space.distance(x, space.point(j)));
  return best;
}

/// Open neighbourhood { x : inf_{y in core} d(x, y) < eta }.
inline Region neighborhood(const StateSpace& space, const Region& core, double eta) {
  if (core.empty()) throw PreconditionError("neighborhood: core region is empty");
  if (!(eta > 0.0)) throw PreconditionError("neighborhood: eta must be positive");
  if (!core.valid_for(space)) throw PreconditionError("neighborhood: index out of range");
  return Region::where(space.size(), [&](std::size_t i) {
    if (core.contains(i)) return true;
    for (std::size_t j : core) {
      if (space.distance(i, j) < eta) return true;
    }
    return false;
  });
}

/// Neighbourhood radius used by the diagnostics. On a grid it reaches the
/// axis and diagonal neighbours of a cell but not cells two steps away, which
/// absorbs the lattice sampling of a continuous optimum's boundary. An
/// alphabet has no such boundary, so B_eta(A) = A there (half a label gap).
inline double cell_eta(const StateSpace& space) {
  return (space.kind() == StateSpace::Kind::grid ? 1.5 : 0.5) * space.spacing();
}

}  // namespace btcurate

#endif  // BTCURATE_STATE_SPACE_HPP_
