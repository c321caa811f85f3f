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

#ifndef BTCURATE_REWARDS_HPP_
#define BTCURATE_REWARDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "btcurate/common.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

// Points within this absolute distance outside a disk still count as inside.
// Lattice coordinates and centres are exact decimals, but their differences
// are not always exact in binary.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Owner / public reward over the state space.
///
/// circular: 1 inside the disk ||x - c|| <= radius, -slope * (||x - c|| - radius)
///           outside.
/// range:    1 for labels in [lo, hi], -slope * (distance to nearest endpoint)
///           outside.
/// tabular:  explicit value per enumerated state.
/// constant: the same value everywhere.
class RewardField {
 public:
  enum class Kind { circular, range, tabular, constant };

  static RewardField circular(StatePoint center, double radius, double slope = 2.0) {
    if (!(radius > 0.0)) throw PreconditionError("circular reward: radius must be positive");
    if (!center.finite()) throw PreconditionError("circular reward: center must be finite");
    RewardField f(Kind::circular, slope);
    f.center_ = std::move(center);
    f.radius_ = radius;
    return f;
  }

  static RewardField range(long lo, long hi, double slope = 2.0) {
    if (lo > hi) throw PreconditionError("range reward: lo must be <= hi");
    RewardField f(Kind::range, slope);
    f.lo_ = lo;
    f.hi_ = hi;
    return f;
  }

  static RewardField tabular(std::vector<double> table) {
    if (table.empty()) throw PreconditionError("tabular reward: empty table");
    for (double v : table) {
      if (!std::isfinite(v)) throw PreconditionError("tabular reward: non-finite entry");
    }
    RewardField f(Kind::tabular, 0.0);
    f.table_ = std::move(table);
    return f;
  }

  static RewardField constant(double value = 0.0) {
    RewardField f(Kind::constant, 0.0);
    f.value_ = value;
    return f;
  }

  Kind kind() const { return kind_; }
  double slope() const { return slope_; }
  const StatePoint& center() const { return center_; }
  double radius() const { return radius_; }
  long lo() const { return lo_; }
  long hi() const { return hi_; }
  const std::vector<double>& table() const { return table_; }
  double constant_value() const { return value_; }

  /// Reward of an analytic field at an arbitrary point. Tabular fields are
  /// only defined on enumerated states; use evaluate(field, space, x) or at().
  double operator()(const StatePoint& x) const {
    switch (kind_) {
      case Kind::circular: {
        const double d = euclidean(x.coords, center_.coords);
        return d <= radius_ + kBoundaryTolerance ? 1.0 : -slope_ * (d - radius_);
      }
      case Kind::range: {
        const double v = x.coords.at(0);
        if (v >= static_cast<double>(lo_) && v <= static_cast<double>(hi_)) return 1.0;
        const double gap = v < static_cast<double>(lo_) ? static_cast<double>(lo_) - v
                                                        : v - static_cast<double>(hi_);
        return -slope_ * gap;
      }
      case Kind::constant:
        return value_;
      case Kind::tabular:
        break;
    }
    throw PreconditionError("tabular reward needs a state index");
  }

  double at(const StateSpace& space, std::size_t i) const {
    if (kind_ == Kind::tabular) return table_.at(i);
    return (*this)(space.point(i));
  }

  /// Rewards of every enumerated state, in enumeration order.
  std::vector<double> values(const StateSpace& space) const {
    if (kind_ == Kind::tabular && table_.size() != space.size()) {
      throw PreconditionError("tabular reward: table size does not match space");
    }
    std::vector<double> out(space.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(space, i);
    return out;
  }

  /// Reward of the flat top for plateau-shaped fields.
  std::optional<double> plateau() const {
    switch (kind_) {
      case Kind::circular:
      case Kind::range:
        return 1.0;
      case Kind::constant:
        return value_;
      case Kind::tabular:
        return *std::max_element(table_.begin(), table_.end());
    }
    return std::nullopt;
  }

  /// Reference point for "mean distance" diagnostics: disk centre or range
  /// midpoint.
  std::optional<StatePoint> anchor() const {
    if (kind_ == Kind::circular) return center_;
    if (kind_ == Kind::range) {
      return StatePoint{0.5 * static_cast<double>(lo_ + hi_)};
    }
    return std::nullopt;
  }

  friend bool operator==(const RewardField&, const RewardField&) = default;

 private:
  RewardField(Kind k, double slope) : kind_(k), slope_(slope) {}

  Kind kind_;
  double slope_ = 2.0;
  StatePoint center_;
  double radius_ = 1.0;
  long lo_ = 0;
  long hi_ = 0;
  std::vector<double> table_;
  double value_ = 0.0;
};

inline double evaluate(const RewardField& field, const StatePoint& x) { return field(x); }

inline double evaluate(const RewardField& field, const StateSpace& space, const StatePoint& x) {
  if (field.kind() != RewardField::Kind::tabular) return field(x);
  const auto i = space.index_of(x);
  if (!i) throw PreconditionError("evaluate: point is not an enumerated state");
  return field.at(space, *i);
}

inline constexpr double kArgmaxEps = 1e-9;

namespace detail {
inline Region argmax_over(const std::vector<double>& values, const Region& domain, double eps) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : domain) best = std::max(best, values[i]);
  std::vector<std::size_t> out;
  for (std::size_t i : domain) {
    if (values[i] >= best - eps) out.push_back(i);
  }
  return Region(std::move(out));
}
}  // namespace detail

/// { x : r(x) >= max_y r(y) - eps }.
inline Region argmax_set(const RewardField& field, const StateSpace& space,
                         double eps = kArgmaxEps) {
  if (eps < 0.0) throw PreconditionError("argmax_set: eps must be non-negative");
  return detail::argmax_over(field.values(space), Region::all(space), eps);
}

/// Maximisers of `inner` restricted to `outer`.
inline Region conditional_argmax(const RewardField& inner, const Region& outer,
                                 const StateSpace& space, double eps = kArgmaxEps) {
  if (outer.empty()) throw PreconditionError("conditional_argmax: outer region is empty");
  if (!outer.valid_for(space)) throw PreconditionError("conditional_argmax: index out of range");
  return detail::argmax_over(inner.values(space), outer, eps);
}

enum class Regime { perfect, partial, disjoint };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::perfect:
      return "perfect";
    case Regime::partial:
      return "partial";
    case Regime::disjoint:
      return "disjoint";
  }
  return "unknown";
}

inline Regime classify_regime(const Region& owner_opt, const Region& public_opt) {
  if (owner_opt.empty() || public_opt.empty()) {
    throw PreconditionError("classify_regime: optimal sets must be non-empty");
  }
  if (owner_opt == public_opt) return Regime::perfect;
  return intersection(owner_opt, public_opt).empty() ? Regime::disjoint : Regime::partial;
}

}  // namespace btcurate

#endif  // BTCURATE_REWARDS_HPP_
