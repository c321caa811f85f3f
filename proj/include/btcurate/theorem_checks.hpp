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

// Verdict batteries for the limiting behaviour of the exact dynamics.
//
//   T1  consensus collapse (aligned rewards)
//   C1  mode collapse for a unique maximiser
//   T2  only the intersection of the optimal sets survives
//   T3  owner sets the support, public refines inside it
//   T4  coverage loss and dependence on the initial distribution
//   T5  truthful reporting against a grid of misreports
//   T6  order dependence of the limit
//   R1  support containment in a one-cell neighbourhood of the limit

#ifndef BTCURATE_THEOREM_CHECKS_HPP_
#define BTCURATE_THEOREM_CHECKS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "btcurate/common.hpp"
#include "btcurate/diagnostics.hpp"
#include "btcurate/distribution.hpp"
#include "btcurate/exact_dynamics.hpp"
#include "btcurate/rewards.hpp"
#include "btcurate/scenario.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

inline constexpr double kLimitTolerance = 1e-3;
inline constexpr double kMinFitR2 = 0.98;
inline constexpr double kCollapseMass = 0.999;
inline constexpr double kCoverageThreshold = 1e-6;
inline constexpr double kInitDependenceTv = 0.05;
inline constexpr double kOrderDependenceTv = 0.5;
inline constexpr double kUtilityTolerance = 1e-9;
inline constexpr double kSupportThreshold = 1e-6;

struct CheckVerdict {
  std::string id;
  bool passed = false;
  std::vector<std::pair<std::string, double>> evidence;  // insertion order
  std::string config_digest;

  void add(std::string key, double value) { evidence.emplace_back(std::move(key), value); }

  std::optional<double> get(std::string_view key) const {
    for (const auto& [k, v] : evidence) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

inline const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{"T1", "C1", "T2", "T3", "T4", "T5", "T6", "R1"};
  return ids;
}

// ---------------------------------------------------------------------------
// Shared plumbing

namespace detail {

// Trajectory p_0..p_T of a scenario; T = 0 yields just p_0.
struct ExactOutcome {
  LimitPrediction prediction;
  std::vector<DiscreteDistribution> trajectory;
  double eta = 0.0;

  const DiscreteDistribution& final_state() const { return trajectory.back(); }
  const StateSpace& space() const { return trajectory.front().space(); }
};

inline ExactOutcome run_scenario(const ScenarioConfig& s) {
  ExactRunConfig cfg = s.exact();
  const std::size_t t = cfg.iterations;
  cfg.iterations = std::max<std::size_t>(t, 1);  // the prediction does not depend on T
  ExactOutcome out{predict(cfg), {}, cell_eta(*cfg.space)};
  if (t == 0) {
    out.trajectory.push_back(cfg.initial_distribution());
  } else {
    out.trajectory = run(cfg);
  }
  return out;
}

inline std::string digest_of(std::span<const ScenarioConfig> scenarios) {
  std::string all;
  for (const auto& s : scenarios) all += serialize_ini(s);
  return hex32(crc32(all));
}

inline double bool_value(bool b) { return b ? 1.0 : 0.0; }

// Decay fit with a failed fit reported as rate 0, R^2 0.
inline DecayFit safe_fit(std::span<const DecaySample> series) {
  try {
    return fit_exponential_decay(series);
  } catch (const PreconditionError&) {
    return DecayFit{};
  }
}

inline std::vector<DecaySample> from_peak(std::vector<DecaySample> series) {
  if (series.empty()) return series;
  auto peak = std::max_element(series.begin(), series.end(),
                               [](const DecaySample& a, const DecaySample& b) { return a.mass < b.mass; });
  return {peak, series.end()};
}

// Outside mass of X \ region at every t.
inline std::vector<DecaySample> outside_series(std::span<const DiscreteDistribution> traj,
                                               const Region& region) {
  std::vector<DecaySample> out;
  out.reserve(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    out.push_back({static_cast<double>(t), outside_mass(traj[t], region)});
  }
  return out;
}

inline bool support_contained(const ExactOutcome& o, const Region& core) {
  const Region nbhd = neighborhood(o.space(), core, o.eta);
  return o.final_state().support(kSupportThreshold).subset_of(nbhd);
}

inline void require_regime(const ExactOutcome& o, Regime want, std::string_view who,
                           const std::string& scenario) {
  if (o.prediction.regime != want) {
    throw PreconditionError(std::string(who) + ": scenario '" + scenario + "' is " +
                            std::string(to_string(o.prediction.regime)) + ", needs " +
                            std::string(to_string(want)));
  }
}

inline std::vector<ScenarioConfig> presets(std::initializer_list<std::string_view> names,
                                           std::optional<std::size_t> iterations = std::nullopt) {
  std::vector<ScenarioConfig> out;
  for (auto n : names) {
    out.push_back(preset(n));
    if (iterations) out.back().iterations = *iterations;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// C1

inline ScenarioConfig unique_max_scenario() {
  ScenarioConfig s = preset("perfect-words");
  s.name = "unique-max-tabular";
  const RewardField table = RewardField::tabular({0.3, -1.2, 0.8, 1.5, 0.2, -0.4, 1.1, 0.0});
  s.owner = table;
  s.public_ = table;
  return s;
}

/// Final mass on the single argmax state is at least kCollapseMass.
inline CheckVerdict check_mode_collapse(std::span<const ScenarioConfig> scenarios) {
  CheckVerdict v{"C1", true, {}, detail::digest_of(scenarios)};
  for (const auto& s : scenarios) {
    auto o = detail::run_scenario(s);
    detail::require_regime(o, Regime::perfect, "mode collapse", s.name);
    if (o.prediction.target.size() != 1) {
      throw PreconditionError("mode collapse: scenario '" + s.name + "' has no unique maximiser");
    }
    const double m = o.final_state().mass(o.prediction.target);
    v.add(s.name + ".argmax_mass", m);
    v.passed = v.passed && m >= kCollapseMass;
  }
  return v;
}

inline CheckVerdict check_mode_collapse() {
  const std::vector<ScenarioConfig> s{unique_max_scenario(), preset("perfect-words")};
  return check_mode_collapse(s);
}

// ---------------------------------------------------------------------------
// T1

/// Aligned rewards: outside mass decays exponentially, the limit is p_0
/// renormalised on the common optimum, and unique-maximiser variants collapse.
inline CheckVerdict check_consensus_collapse(std::span<const ScenarioConfig> scenarios,
                                             std::span<const ScenarioConfig> unique_max) {
  std::vector<ScenarioConfig> all(scenarios.begin(), scenarios.end());
  all.insert(all.end(), unique_max.begin(), unique_max.end());
  CheckVerdict v{"T1", true, {}, detail::digest_of(all)};
  for (const auto& s : scenarios) {
    auto o = detail::run_scenario(s);
    detail::require_regime(o, Regime::perfect, "consensus collapse", s.name);
    const Region nbhd = neighborhood(o.space(), o.prediction.target, o.eta);
    const auto fit = detail::safe_fit(detail::outside_series(o.trajectory, nbhd));
    const double tv = total_variation(o.final_state(), o.prediction.limit);
    const bool contained = detail::support_contained(o, o.prediction.target);
    v.add(s.name + ".fit_rate", fit.rate);
    v.add(s.name + ".fit_r2", fit.r_squared);
    v.add(s.name + ".fit_points", static_cast<double>(fit.points));
    v.add(s.name + ".tv_to_limit", tv);
    v.add(s.name + ".support_contained", detail::bool_value(contained));
    v.passed = v.passed && fit.decaying() && fit.r_squared >= kMinFitR2 && tv <= kLimitTolerance;
  }
  if (!unique_max.empty()) {
    const auto c1 = check_mode_collapse(unique_max);
    for (const auto& [k, x] : c1.evidence) v.add(k, x);
    v.passed = v.passed && c1.passed;
  }
  return v;
}

inline CheckVerdict check_consensus_collapse(std::optional<std::size_t> iterations = std::nullopt) {
  auto s = detail::presets({"perfect-words", "perfect-words-band"}, iterations);
  auto grid = detail::presets({"perfect-2d"}, iterations);
  s.insert(s.end(), grid.begin(), grid.end());
  std::vector<ScenarioConfig> u{unique_max_scenario()};
  if (iterations) u.front().iterations = *iterations;
  return check_consensus_collapse(s, u);
}

// ---------------------------------------------------------------------------
// T2

/// Final support inside B_eta(A_shared) and the limit equal to p_0
/// renormalised on A_shared. Aligned scenarios are accepted as the case
/// A_shared = A_O = A_P.
inline CheckVerdict check_intersection_survival(std::span<const ScenarioConfig> scenarios) {
  CheckVerdict v{"T2", true, {}, detail::digest_of(scenarios)};
  for (const auto& s : scenarios) {
    auto o = detail::run_scenario(s);
    if (o.prediction.regime == Regime::disjoint) {
      throw PreconditionError("intersection survival: scenario '" + s.name + "' is disjoint");
    }
    const Region shared = intersection(o.prediction.owner_opt, o.prediction.public_opt);
    const bool contained = detail::support_contained(o, shared);
    const double tv = total_variation(o.final_state(), o.prediction.limit);
    v.add(s.name + ".shared_size", static_cast<double>(shared.size()));
    v.add(s.name + ".mass_outside_shared", outside_mass(o.final_state(), shared));
    v.add(s.name + ".tv_to_limit", tv);
    v.add(s.name + ".support_contained", detail::bool_value(contained));
    v.passed = v.passed && contained && tv <= kLimitTolerance;
  }
  return v;
}

inline CheckVerdict check_intersection_survival(std::optional<std::size_t> iterations = std::nullopt) {
  const auto s = detail::presets({"partial-words", "partial-2d"}, iterations);
  return check_intersection_survival(s);
}

// ---------------------------------------------------------------------------
// T3

/// Disjoint optima, owner acting first: the limit sits on A_{P|O}; mass
/// outside B_eta(A_O) decays (stage 1) and mass in A_O away from A_{P|O}
/// decays after its peak (stage 2). The public-first run lands on A_{O|P}
/// and the two limits differ.
inline CheckVerdict check_owner_dominance(std::span<const ScenarioConfig> scenarios) {
  CheckVerdict v{"T3", true, {}, detail::digest_of(scenarios)};
  for (const auto& s0 : scenarios) {
    ScenarioConfig s = s0;
    s.order = Order::owner_first;
    auto o = detail::run_scenario(s);
    detail::require_regime(o, Regime::disjoint, "owner dominance", s.name);
    const auto& pred = o.prediction;
    const Region owner_nbhd = neighborhood(o.space(), pred.owner_opt, o.eta);
    const Region target_nbhd = neighborhood(o.space(), pred.target, o.eta);
    const auto stage1 = detail::safe_fit(detail::outside_series(o.trajectory, owner_nbhd));
    const auto stage2 = detail::safe_fit(
        detail::from_peak(mass_series(o.trajectory, difference(pred.owner_opt, target_nbhd))));
    const bool contained = detail::support_contained(o, pred.target);
    const double tv = total_variation(o.final_state(), pred.limit);

    ScenarioConfig r = s;
    r.order = Order::public_first;
    auto pf = detail::run_scenario(r);
    const double tv_pf = total_variation(pf.final_state(), pf.prediction.limit);
    const double tv_orders = total_variation(o.final_state(), pf.final_state());

    v.add(s.name + ".support_contained", detail::bool_value(contained));
    v.add(s.name + ".stage1_rate", stage1.rate);
    v.add(s.name + ".stage1_r2", stage1.r_squared);
    v.add(s.name + ".stage2_rate", stage2.rate);
    v.add(s.name + ".stage2_r2", stage2.r_squared);
    v.add(s.name + ".tv_to_limit", tv);
    v.add(s.name + ".public_first_tv_to_limit", tv_pf);
    v.add(s.name + ".tv_between_orders", tv_orders);
    v.passed = v.passed && contained && stage1.decaying() && stage2.decaying() &&
               tv <= kLimitTolerance && tv_pf <= kLimitTolerance && tv_orders >= kOrderDependenceTv;
  }
  return v;
}

inline CheckVerdict check_owner_dominance(std::optional<std::size_t> iterations = std::nullopt) {
  const auto s = detail::presets({"disjoint-words", "disjoint-2d"}, iterations);
  return check_owner_dominance(s);
}

// ---------------------------------------------------------------------------
// T4

/// Misaligned scenario: both one-sided optimal sets lose their mass, and a
/// second full-support initial distribution (`alternative.init`) reaches a
/// different limit.
inline CheckVerdict check_impossibility_demo(const ScenarioConfig& scenario, InitKind alternative) {
  const std::vector<ScenarioConfig> used{scenario};
  CheckVerdict v{"T4", true, {}, detail::digest_of(used)};
  auto o = detail::run_scenario(scenario);
  const auto& pred = o.prediction;
  if (pred.owner_opt == pred.public_opt) {
    throw PreconditionError("impossibility demo: scenario '" + scenario.name +
                            "' is aligned, needs A_O != A_P");
  }
  const double owner_only = o.final_state().mass(difference(pred.owner_opt, pred.public_opt));
  const double public_only = o.final_state().mass(difference(pred.public_opt, pred.owner_opt));

  ScenarioConfig alt = scenario;
  if (alt.init == alternative) {
    throw PreconditionError("impossibility demo: alternative initialisation equals the scenario's");
  }
  alt.init = alternative;
  auto a = detail::run_scenario(alt);
  const double tv = total_variation(o.final_state(), a.final_state());

  v.add("horizon", static_cast<double>(scenario.iterations));
  v.add("coverage_threshold", kCoverageThreshold);
  v.add("mass_owner_only", owner_only);
  v.add("mass_public_only", public_only);
  v.add("init_tv", tv);
  v.passed = owner_only <= kCoverageThreshold && public_only <= kCoverageThreshold &&
             tv >= kInitDependenceTv;
  return v;
}

inline CheckVerdict check_impossibility_demo(std::optional<std::size_t> iterations = std::nullopt) {
  auto s = preset("partial-words-broad");
  if (iterations) s.iterations = *iterations;
  return check_impossibility_demo(s, InitKind::ramp);
}

// ---------------------------------------------------------------------------
// T5

struct Report {
  std::string label;
  RewardField field;
};

/// Truthful report first, then centre shifts along the first axis and
/// radius scalings (circular fields), or integer shifts of both endpoints
/// and half-width scalings (range fields). Duplicates are dropped; other
/// reward kinds only get the truthful report.
struct MisreportGrid {
  std::vector<double> center_shifts{-1.0, -0.5, 0.5, 1.0};
  std::vector<double> radius_scales{0.5, 2.0};

  std::vector<Report> reports(const RewardField& truth) const {
    std::vector<Report> out{{"truthful", truth}};
    const auto push = [&](std::string label, RewardField f) {
      for (const auto& r : out) {
        if (r.field == f) return;
      }
      out.push_back({std::move(label), std::move(f)});
    };
    if (truth.kind() == RewardField::Kind::circular) {
      for (double s : center_shifts) {
        auto c = truth.center().coords;
        c.at(0) += s;
        push("shift=" + format_double(s), RewardField::circular(StatePoint(c), truth.radius(), truth.slope()));
      }
      for (double k : radius_scales) {
        if (!(k > 0.0)) throw PreconditionError("misreport grid: radius scalings must be positive");
        push("scale=" + format_double(k),
             RewardField::circular(truth.center(), truth.radius() * k, truth.slope()));
      }
    } else if (truth.kind() == RewardField::Kind::range) {
      for (double s : center_shifts) {
        const long d = std::lround(s);
        push("shift=" + format_double(s), RewardField::range(truth.lo() + d, truth.hi() + d, truth.slope()));
      }
      for (double k : radius_scales) {
        if (!(k > 0.0)) throw PreconditionError("misreport grid: radius scalings must be positive");
        const double mid = 0.5 * static_cast<double>(truth.lo() + truth.hi());
        const double half = 0.5 * static_cast<double>(truth.hi() - truth.lo()) * k;
        push("scale=" + format_double(k),
             RewardField::range(std::lround(std::ceil(mid - half)), std::lround(std::floor(mid + half)),
                                truth.slope()));
      }
    }
    return out;
  }
};

struct StrategyCase {
  ScenarioConfig scenario;  // carries the true rewards
  std::vector<Report> owner_reports;
  std::vector<Report> public_reports;

  static StrategyCase from_grid(ScenarioConfig s, const MisreportGrid& grid) {
    StrategyCase c{std::move(s), {}, {}};
    c.owner_reports = grid.reports(c.scenario.owner);
    c.public_reports = grid.reports(c.scenario.public_);
    return c;
  }
};

/// Utilities of both agents under every report pair: owner[i][j] is
/// E_{p_T}[r_O^true] when the owner reports i and the public reports j.
struct UtilityMatrix {
  std::string scenario;
  std::vector<std::string> owner_labels;
  std::vector<std::string> public_labels;
  std::vector<std::vector<double>> owner;
  std::vector<std::vector<double>> public_;
  std::size_t owner_truth = 0;
  std::size_t public_truth = 0;
};

inline UtilityMatrix utility_matrix(const StrategyCase& c) {
  const auto find_truth = [](const std::vector<Report>& rs, const RewardField& truth,
                             std::string_view who) {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (rs[i].field == truth) return i;
    }
    throw PreconditionError(std::string("strategyproofness: ") + std::string(who) +
                            " reports do not include the truthful reward");
  };
  UtilityMatrix m;
  m.scenario = c.scenario.name;
  m.owner_truth = find_truth(c.owner_reports, c.scenario.owner, "owner");
  m.public_truth = find_truth(c.public_reports, c.scenario.public_, "public");
  for (const auto& r : c.owner_reports) m.owner_labels.push_back(r.label);
  for (const auto& r : c.public_reports) m.public_labels.push_back(r.label);

  const auto space = c.scenario.make_space();
  const auto true_owner = c.scenario.owner.values(*space);
  const auto true_public = c.scenario.public_.values(*space);
  const std::size_t no = c.owner_reports.size();
  const std::size_t np = c.public_reports.size();
  m.owner.assign(no, std::vector<double>(np));
  m.public_.assign(no, std::vector<double>(np));
  for (std::size_t i = 0; i < no; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      ExactRunConfig cfg = c.scenario.exact();
      cfg.space = space;
      if (cfg.initial) cfg.initial = c.scenario.initial_distribution(space);
      cfg.owner = c.owner_reports[i].field;
      cfg.public_ = c.public_reports[j].field;
      const auto p = ExactDynamics(std::move(cfg)).final_state();
      m.owner[i][j] = p.expectation(true_owner);
      m.public_[i][j] = p.expectation(true_public);
    }
  }
  return m;
}

/// Worst truthful-minus-best slack of one agent over the opponent's reports.
struct Slack {
  double value = std::numeric_limits<double>::infinity();
  std::size_t opponent = 0;
  std::size_t best_report = 0;
};

inline Slack owner_slack(const UtilityMatrix& m) {
  Slack s;
  for (std::size_t j = 0; j < m.public_labels.size(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < m.owner_labels.size(); ++i) {
      if (m.owner[i][j] > m.owner[best][j]) best = i;
    }
    const double d = m.owner[m.owner_truth][j] - m.owner[best][j];
    if (d < s.value) s = {d, j, best};
  }
  return s;
}

inline Slack public_slack(const UtilityMatrix& m) {
  Slack s;
  for (std::size_t i = 0; i < m.owner_labels.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < m.public_labels.size(); ++j) {
      if (m.public_[i][j] > m.public_[i][best]) best = j;
    }
    const double d = m.public_[i][m.public_truth] - m.public_[i][best];
    if (d < s.value) s = {d, i, best};
  }
  return s;
}

inline std::vector<ScenarioConfig> default_strategy_scenarios(
    std::optional<std::size_t> iterations = std::nullopt) {
  return detail::presets({"perfect-2d", "partial-2d", "disjoint-2d"}, iterations.value_or(500));
}

/// Truthful reports attain each agent's maximum utility (within
/// kUtilityTolerance) against every report of the other agent.
inline CheckVerdict check_strategyproofness(std::span<const StrategyCase> cases,
                                            std::vector<UtilityMatrix>* matrices = nullptr) {
  std::vector<ScenarioConfig> used;
  for (const auto& c : cases) used.push_back(c.scenario);
  CheckVerdict v{"T5", true, {}, detail::digest_of(used)};
  for (const auto& c : cases) {
    const auto m = utility_matrix(c);
    const auto so = owner_slack(m);
    const auto sp = public_slack(m);
    v.add(c.scenario.name + ".owner_truthful_utility", m.owner[m.owner_truth][m.public_truth]);
    v.add(c.scenario.name + ".public_truthful_utility", m.public_[m.owner_truth][m.public_truth]);
    v.add(c.scenario.name + ".owner_min_slack", so.value);
    v.add(c.scenario.name + ".public_min_slack", sp.value);
    v.passed = v.passed && so.value >= -kUtilityTolerance && sp.value >= -kUtilityTolerance;
    if (matrices) matrices->push_back(m);
  }
  return v;
}

inline CheckVerdict check_strategyproofness(const MisreportGrid& grid = {},
                                            std::optional<std::size_t> iterations = std::nullopt) {
  std::vector<StrategyCase> cases;
  for (auto& s : default_strategy_scenarios(iterations)) cases.push_back(StrategyCase::from_grid(s, grid));
  return check_strategyproofness(cases);
}

/// Rows of scenario, agent, own report, opponent report, utility.
inline void write_utility_csv(std::ostream& os, std::span<const UtilityMatrix> ms) {
  os << "scenario,agent,own_report,opponent_report,utility\n";
  for (const auto& m : ms) {
    for (std::size_t i = 0; i < m.owner_labels.size(); ++i) {
      for (std::size_t j = 0; j < m.public_labels.size(); ++j) {
        os << m.scenario << ",owner," << m.owner_labels[i] << ',' << m.public_labels[j] << ','
           << format_double(m.owner[i][j]) << '\n';
      }
    }
    for (std::size_t j = 0; j < m.public_labels.size(); ++j) {
      for (std::size_t i = 0; i < m.owner_labels.size(); ++i) {
        os << m.scenario << ",public," << m.public_labels[j] << ',' << m.owner_labels[i] << ','
           << format_double(m.public_[i][j]) << '\n';
      }
    }
  }
}

/// Misreport sweep input, an INI file with one section:
///
///   [sweep]
///   scenarios = perfect-2d partial-2d disjoint-2d   (preset names)
///   center_shifts = -1 -0.5 0.5 1                   (may be empty)
///   radius_scales = 0.5 2                           (may be empty)
///   iterations = 500
struct SweepConfig {
  std::vector<std::string> scenarios{"perfect-2d", "partial-2d", "disjoint-2d"};
  MisreportGrid grid{};
  std::size_t iterations = 500;

  std::vector<StrategyCase> cases() const {
    std::vector<StrategyCase> out;
    for (const auto& n : scenarios) {
      auto s = preset(n);
      s.iterations = iterations;
      out.push_back(StrategyCase::from_grid(std::move(s), grid));
    }
    return out;
  }
};

inline SweepConfig parse_sweep_ini(std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("sweep config: ") + e.what());
  }
  for (const auto& kv : tree) {
    if (kv.first != "sweep") throw ConfigError("sweep config: unknown section '" + kv.first + "'");
  }
  SweepConfig c;
  detail::Section sec(tree.get_child_optional("sweep").get_ptr(), "sweep");
  const auto numbers = [](const std::string& text, std::string_view key) {
    std::vector<double> out;
    for (const auto& t : detail::split_ws(text)) out.push_back(detail::parse_double(t, key));
    return out;
  };
  if (auto v = sec.raw("scenarios")) {
    c.scenarios = detail::split_ws(*v);
    if (c.scenarios.empty()) throw ConfigError("sweep.scenarios is empty");
    for (const auto& n : c.scenarios) preset(n);
  }
  if (auto v = sec.raw("center_shifts")) c.grid.center_shifts = numbers(*v, "sweep.center_shifts");
  if (auto v = sec.raw("radius_scales")) {
    c.grid.radius_scales = numbers(*v, "sweep.radius_scales");
    for (double k : c.grid.radius_scales) {
      if (!(k > 0.0)) throw ConfigError("sweep.radius_scales must be positive");
    }
  }
  sec.get("iterations", c.iterations);
  if (c.iterations < 1) throw ConfigError("sweep.iterations must be >= 1");
  sec.reject_unknown();
  return c;
}

// ---------------------------------------------------------------------------
// T6

/// Disjoint optima: owner-first and public-first limits are far apart.
inline CheckVerdict check_influence_parity_violation(std::span<const ScenarioConfig> scenarios,
                                                     std::span<const ScenarioConfig> controls = {}) {
  std::vector<ScenarioConfig> all(scenarios.begin(), scenarios.end());
  all.insert(all.end(), controls.begin(), controls.end());
  CheckVerdict v{"T6", true, {}, detail::digest_of(all)};
  const auto order_tv = [](ScenarioConfig s) {
    s.order = Order::owner_first;
    auto of = detail::run_scenario(s);
    s.order = Order::public_first;
    auto pf = detail::run_scenario(s);
    return std::pair{of.prediction.regime, total_variation(of.final_state(), pf.final_state())};
  };
  for (const auto& s : scenarios) {
    const auto [regime, tv] = order_tv(s);
    if (regime != Regime::disjoint) {
      throw PreconditionError("influence parity: scenario '" + s.name + "' is not disjoint");
    }
    v.add(s.name + ".tv_between_orders", tv);
    v.passed = v.passed && tv >= kOrderDependenceTv;
  }
  for (const auto& s : controls) v.add(s.name + ".control_tv_between_orders", order_tv(s).second);
  return v;
}

inline CheckVerdict check_influence_parity_violation(std::optional<std::size_t> iterations = std::nullopt) {
  const auto s = detail::presets({"disjoint-words", "disjoint-2d"}, iterations);
  const auto c = detail::presets({"perfect-words-band"}, iterations);
  return check_influence_parity_violation(s, c);
}

// ---------------------------------------------------------------------------
// R1

/// {x : p_T(x) > kSupportThreshold} lies inside B_eta of the predicted
/// support, eta one grid cell.
inline CheckVerdict check_support_containment(std::span<const ScenarioConfig> scenarios) {
  CheckVerdict v{"R1", true, {}, detail::digest_of(scenarios)};
  for (const auto& s : scenarios) {
    auto o = detail::run_scenario(s);
    const bool contained = detail::support_contained(o, o.prediction.target);
    v.add(s.name + ".support_size", static_cast<double>(o.final_state().support(kSupportThreshold).size()));
    v.add(s.name + ".target_size", static_cast<double>(o.prediction.target.size()));
    v.add(s.name + ".support_contained", detail::bool_value(contained));
    v.passed = v.passed && contained;
  }
  return v;
}

inline CheckVerdict check_support_containment(std::optional<std::size_t> iterations = std::nullopt) {
  const auto s = detail::presets({"perfect-words-band", "partial-words", "disjoint-words", "perfect-2d",
                                  "partial-2d", "disjoint-2d"},
                                 iterations);
  return check_support_containment(s);
}

// ---------------------------------------------------------------------------
// Battery

struct BatterySettings {
  std::optional<std::size_t> iterations;      // overrides every scenario's T
  std::optional<ScenarioConfig> scenario;     // replaces the default scenarios
  MisreportGrid misreports{};
  bool parallel = true;
};

inline CheckVerdict run_check(std::string_view id, const BatterySettings& st) {
  if (std::find(check_ids().begin(), check_ids().end(), id) == check_ids().end()) {
    throw ConfigError("unknown check id '" + std::string(id) + "'");
  }
  if (st.scenario) {
    std::vector<ScenarioConfig> one{*st.scenario};
    if (st.iterations) one.front().iterations = *st.iterations;
    if (id == "T1") return check_consensus_collapse(one, {});
    if (id == "C1") return check_mode_collapse(one);
    if (id == "T2") return check_intersection_survival(one);
    if (id == "T3") return check_owner_dominance(one);
    if (id == "T4") {
      return check_impossibility_demo(
          one.front(), one.front().init == InitKind::uniform ? InitKind::ramp : InitKind::uniform);
    }
    if (id == "T5") {
      const std::vector<StrategyCase> c{StrategyCase::from_grid(one.front(), st.misreports)};
      return check_strategyproofness(c);
    }
    if (id == "T6") return check_influence_parity_violation(one);
    return check_support_containment(one);
  }
  if (id == "T1") return check_consensus_collapse(st.iterations);
  if (id == "C1") {
    auto s = std::vector<ScenarioConfig>{unique_max_scenario(), preset("perfect-words")};
    if (st.iterations) {
      for (auto& x : s) x.iterations = *st.iterations;
    }
    return check_mode_collapse(s);
  }
  if (id == "T2") return check_intersection_survival(st.iterations);
  if (id == "T3") return check_owner_dominance(st.iterations);
  if (id == "T4") return check_impossibility_demo(st.iterations);
  if (id == "T5") return check_strategyproofness(st.misreports, st.iterations);
  if (id == "T6") return check_influence_parity_violation(st.iterations);
  return check_support_containment(st.iterations);
}

/// Runs the selected checks (in the given order). Checks share no state and
/// run concurrently when `parallel` is set; results keep the input order.
inline std::vector<CheckVerdict> run_battery(std::span<const std::string> ids,
                                             const BatterySettings& st = {}) {
  for (const auto& id : ids) {
    if (std::find(check_ids().begin(), check_ids().end(), id) == check_ids().end()) {
      throw ConfigError("unknown check id '" + id + "'");
    }
  }
  std::vector<CheckVerdict> out;
  if (!st.parallel) {
    for (const auto& id : ids) out.push_back(run_check(id, st));
    return out;
  }
  std::vector<std::future<CheckVerdict>> jobs;
  for (const auto& id : ids) {
    jobs.push_back(std::async(std::launch::async, [id, &st] { return run_check(id, st); }));
  }
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

inline std::string format_evidence(const CheckVerdict& v) {
  std::string out;
  for (const auto& [k, x] : v.evidence) {
    if (!out.empty()) out += ';';
    out += k + '=' + format_double(x);
  }
  return out;
}

inline void write_verdict_csv(std::ostream& os, std::span<const CheckVerdict> vs) {
  os << "id,passed,evidence,config_digest\n";
  for (const auto& v : vs) {
    os << v.id << ',' << (v.passed ? "true" : "false") << ',' << format_evidence(v) << ','
       << v.config_digest << '\n';
  }
}

}  // namespace btcurate

#endif  // BTCURATE_THEOREM_CHECKS_HPP_
