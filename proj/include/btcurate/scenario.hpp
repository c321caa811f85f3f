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

// Scenario configuration: named presets and an INI file format.
//
// Grammar (every section optional; unknown sections or keys are errors):
//
//   [scenario]  name, seed
//   [space]     kind = grid | alphabet
//               bounds = lo:hi lo:hi      (grid)
//               resolution = 61           (grid)
//               labels = 1 2 3 ...        (alphabet)
//   [owner], [public]
//               kind = circular | range | tabular | constant
//               center = x y, radius, slope      (circular)
//               lo, hi, slope                    (range)
//               values = v0 v1 ...               (tabular, enumeration order)
//               value                            (constant)
//   [exact]     owner_pool, public_pool, temperature, iterations,
//               order = owner-first | public-first, init = uniform | ramp,
//               mc_samples
//   [particle]  init_n, box, owner_select_n, gen_n, public_select_n,
//               iterations, owner_pool, public_pool, temperature, mc_samples,
//               accumulation = accumulate | window, window,
//               mean_dist = curated | dataset
//   [em]        n_components, max_iters, tol, cov_floor
//
// Lists are whitespace separated. Numbers are written in shortest
// round-trip form, so parse(serialize(c)) == c.

#ifndef BTCURATE_SCENARIO_HPP_
#define BTCURATE_SCENARIO_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "btcurate/common.hpp"
#include "btcurate/distribution.hpp"
#include "btcurate/exact_dynamics.hpp"
#include "btcurate/particle_dynamics.hpp"
#include "btcurate/rewards.hpp"
#include "btcurate/state_space.hpp"

namespace btcurate {

enum class InitKind { uniform, ramp };

struct ScenarioConfig {
  std::string name = "custom";
  std::uint64_t seed = 0;

  StateSpace::Kind space_kind = StateSpace::Kind::grid;
  std::vector<Interval> bounds{{-5.0, 5.0}, {-5.0, 5.0}};
  std::size_t resolution = 61;
  std::vector<long> labels;

  RewardField owner = RewardField::constant();
  RewardField public_ = RewardField::constant();

  // exact dynamics
  std::size_t owner_pool = 2;
  std::size_t public_pool = 2;
  double temperature = 1.0;
  std::size_t iterations = 200;
  Order order = Order::owner_first;
  InitKind init = InitKind::uniform;
  std::size_t mc_samples = 10000;

  ParticleRunConfig particle{};

  SpacePtr make_space() const {
    if (space_kind == StateSpace::Kind::grid) return share(StateSpace::grid(bounds, resolution));
    return share(StateSpace::alphabet(labels));
  }

  /// Uniform, or weights 1, 2, ..., n in enumeration order for `ramp`.
  DiscreteDistribution initial_distribution(const SpacePtr& space) const {
    if (init == InitKind::uniform) return DiscreteDistribution::uniform(space);
    std::vector<double> w(space->size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(i + 1);
    return DiscreteDistribution::from_weights(space, std::move(w));
  }

  ExactRunConfig exact() const {
    ExactRunConfig c;
    c.space = make_space();
    c.owner = owner;
    c.public_ = public_;
    c.owner_pool = owner_pool;
    c.public_pool = public_pool;
    c.temperature = temperature;
    c.iterations = iterations;
    c.order = order;
    c.mc_samples = mc_samples;
    c.seed = derive_seed(seed, "exact");
    if (init != InitKind::uniform) c.initial = initial_distribution(c.space);
    return c;
  }

  ParticleRunConfig particle_run() const {
    ParticleRunConfig p = particle;
    p.seed = derive_seed(seed, "particle");
    return p;
  }
};

inline std::string_view to_string(InitKind k) { return k == InitKind::uniform ? "uniform" : "ramp"; }

// ---------------------------------------------------------------------------
// Presets

namespace detail {

inline ScenarioConfig disk_preset(std::string name, StatePoint owner_c, StatePoint public_c) {
  ScenarioConfig s;
  s.name = std::move(name);
  s.owner = RewardField::circular(std::move(owner_c), 1.0);
  s.public_ = RewardField::circular(std::move(public_c), 1.0);
  s.iterations = 200;
  return s;
}

inline ScenarioConfig words_preset(std::string name, long olo, long ohi, long plo, long phi) {
  ScenarioConfig s;
  s.name = std::move(name);
  s.space_kind = StateSpace::Kind::alphabet;
  s.bounds.clear();
  s.labels = {1, 2, 3, 4, 5, 6, 7, 8};
  s.owner = RewardField::range(olo, ohi);
  s.public_ = RewardField::range(plo, phi);
  s.iterations = 500;
  return s;
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "perfect-2d",         "partial-2d",        "disjoint-2d",
      "perfect-words",      "partial-words",     "disjoint-words",
      "perfect-words-band", "partial-words-alt", "disjoint-words-alt",
      "partial-words-broad"};
  return names;
}

/// Built-in scenarios. The -2d family uses disks of radius 1 on a 61 x 61
/// grid over [-5, 5]^2; the word family uses ranges over labels 1..8.
inline ScenarioConfig preset(std::string_view name) {
  using detail::disk_preset;
  using detail::words_preset;
  if (name == "perfect-2d") return disk_preset("perfect-2d", {0.0, 0.0}, {0.0, 0.0});
  if (name == "partial-2d") return disk_preset("partial-2d", {0.0, 0.0}, {1.5, 0.0});
  if (name == "disjoint-2d") return disk_preset("disjoint-2d", {0.0, 0.0}, {3.0, 0.0});
  if (name == "perfect-words") return words_preset("perfect-words", 4, 4, 4, 4);
  if (name == "partial-words") return words_preset("partial-words", 2, 4, 4, 6);
  if (name == "disjoint-words") return words_preset("disjoint-words", 1, 3, 5, 6);
  if (name == "perfect-words-band") return words_preset("perfect-words-band", 3, 4, 3, 4);
  if (name == "partial-words-alt") return words_preset("partial-words-alt", 1, 3, 3, 5);
  if (name == "disjoint-words-alt") return words_preset("disjoint-words-alt", 3, 4, 5, 6);
  if (name == "partial-words-broad") return words_preset("partial-words-broad", 1, 5, 2, 8);
  throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// INI

namespace detail {

using boost::property_tree::ptree;

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

inline double parse_double(std::string_view s, std::string_view key) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("bad number for '" + std::string(key) + "': '" + std::string(s) + "'");
  }
  return v;
}

inline long parse_long(std::string_view s, std::string_view key) {
  long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError("bad integer for '" + std::string(key) + "': '" + std::string(s) + "'");
  }
  return v;
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view key) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError("bad unsigned integer for '" + std::string(key) + "': '" + std::string(s) + "'");
  }
  return v;
}

// Read access to one section that remembers which keys were consumed.
class Section {
 public:
  Section(const ptree* node, std::string name) : node_(node), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string& key) {
    seen_.insert(key);
    if (!node_) return std::nullopt;
    auto v = node_->get_optional<std::string>(ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    const auto b = v->find_first_not_of(" \t");
    const auto e = v->find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : v->substr(b, e - b + 1);
  }
  std::string full(const std::string& key) const { return name_ + "." + key; }

  void get(const std::string& key, double& out) {
    if (auto v = raw(key)) out = parse_double(*v, full(key));
  }
  void get(const std::string& key, std::size_t& out) {
    if (auto v = raw(key)) out = static_cast<std::size_t>(parse_u64(*v, full(key)));
  }
  void get(const std::string& key, std::string& out) {
    if (auto v = raw(key)) out = *v;
  }

  void reject_unknown() const {
    if (!node_) return;
    for (const auto& kv : *node_) {
      if (!seen_.count(kv.first)) throw ConfigError("unknown key '" + full(kv.first) + "'");
    }
  }

 private:
  const ptree* node_;
  std::string name_;
  std::set<std::string> seen_;
};

inline std::vector<Interval> parse_bounds(const std::string& s, std::string_view key) {
  std::vector<Interval> out;
  for (const auto& tok : split_ws(s)) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw ConfigError("bounds need lo:hi pairs in '" + std::string(key) + "'");
    out.push_back({parse_double(std::string_view(tok).substr(0, colon), key),
                   parse_double(std::string_view(tok).substr(colon + 1), key)});
  }
  if (out.empty()) throw ConfigError("empty bounds in '" + std::string(key) + "'");
  return out;
}

inline std::string format_bounds(const std::vector<Interval>& b) {
  std::string out;
  for (const auto& iv : b) {
    if (!out.empty()) out += ' ';
    out += format_double(iv.lo) + ":" + format_double(iv.hi);
  }
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& fmt) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += ' ';
    out += fmt(x);
  }
  return out;
}

inline RewardField parse_reward(Section& sec) {
  std::string kind = "constant";
  sec.get("kind", kind);
  double slope = 2.0;
  if (kind == "circular") {
    auto c = sec.raw("center");
    if (!c) throw ConfigError("missing '" + sec.full("center") + "'");
    std::vector<double> center;
    for (const auto& t : split_ws(*c)) center.push_back(parse_double(t, sec.full("center")));
    double radius = 1.0;
    sec.get("radius", radius);
    sec.get("slope", slope);
    return RewardField::circular(StatePoint(std::move(center)), radius, slope);
  }
  if (kind == "range") {
    auto lo = sec.raw("lo");
    auto hi = sec.raw("hi");
    if (!lo || !hi) throw ConfigError("range reward needs '" + sec.full("lo") + "' and 'hi'");
    sec.get("slope", slope);
    return RewardField::range(parse_long(*lo, sec.full("lo")), parse_long(*hi, sec.full("hi")), slope);
  }
  if (kind == "tabular") {
    auto v = sec.raw("values");
    if (!v) throw ConfigError("missing '" + sec.full("values") + "'");
    std::vector<double> table;
    for (const auto& t : split_ws(*v)) table.push_back(parse_double(t, sec.full("values")));
    return RewardField::tabular(std::move(table));
  }
  if (kind == "constant") {
    double value = 0.0;
    sec.get("value", value);
    return RewardField::constant(value);
  }
  throw ConfigError("unknown reward kind '" + kind + "' in '" + sec.full("kind") + "'");
}

inline void put_reward(ptree& tree, const std::string& sec, const RewardField& f) {
  const auto key = [&](const char* k) { return ptree::path_type(sec + "." + k, '.'); };
  switch (f.kind()) {
    case RewardField::Kind::circular:
      tree.put(key("kind"), "circular");
      tree.put(key("center"), join(f.center().coords, format_double));
      tree.put(key("radius"), format_double(f.radius()));
      tree.put(key("slope"), format_double(f.slope()));
      break;
    case RewardField::Kind::range:
      tree.put(key("kind"), "range");
      tree.put(key("lo"), std::to_string(f.lo()));
      tree.put(key("hi"), std::to_string(f.hi()));
      tree.put(key("slope"), format_double(f.slope()));
      break;
    case RewardField::Kind::tabular:
      tree.put(key("kind"), "tabular");
      tree.put(key("values"), join(f.table(), format_double));
      break;
    case RewardField::Kind::constant:
      tree.put(key("kind"), "constant");
      tree.put(key("value"), format_double(f.constant_value()));
      break;
  }
}

}  // namespace detail

/// Parses the INI grammar above on top of the defaults in `base`.
inline ScenarioConfig parse_scenario_ini(std::istream& is, ScenarioConfig base = {}) {
  using detail::ptree;
  using detail::Section;
  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  static const std::set<std::string> known{"scenario", "space", "owner", "public",
                                           "exact",    "particle", "em"};
  for (const auto& kv : tree) {
    if (!known.count(kv.first)) throw ConfigError("unknown section '" + kv.first + "'");
    if (kv.second.empty() && !kv.second.data().empty()) {
      throw ConfigError("key '" + kv.first + "' outside of a section");
    }
  }
  const auto child = [&](const char* name) { return tree.get_child_optional(name).get_ptr(); };

  ScenarioConfig c = std::move(base);
  try {
    Section scen(child("scenario"), "scenario");
    scen.get("name", c.name);
    if (auto v = scen.raw("seed")) c.seed = detail::parse_u64(*v, "scenario.seed");
    scen.reject_unknown();

    Section space(child("space"), "space");
    std::string kind = c.space_kind == StateSpace::Kind::grid ? "grid" : "alphabet";
    space.get("kind", kind);
    if (kind == "grid") {
      c.space_kind = StateSpace::Kind::grid;
      if (auto v = space.raw("bounds")) c.bounds = detail::parse_bounds(*v, "space.bounds");
      space.get("resolution", c.resolution);
      c.labels.clear();
    } else if (kind == "alphabet") {
      c.space_kind = StateSpace::Kind::alphabet;
      if (auto v = space.raw("labels")) {
        c.labels.clear();
        for (const auto& t : detail::split_ws(*v)) c.labels.push_back(detail::parse_long(t, "space.labels"));
      }
      c.bounds.clear();
    } else {
      throw ConfigError("unknown space kind '" + kind + "'");
    }
    space.reject_unknown();

    if (tree.get_child_optional("owner")) {
      Section s(child("owner"), "owner");
      c.owner = detail::parse_reward(s);
      s.reject_unknown();
    }
    if (tree.get_child_optional("public")) {
      Section s(child("public"), "public");
      c.public_ = detail::parse_reward(s);
      s.reject_unknown();
    }

    Section ex(child("exact"), "exact");
    ex.get("owner_pool", c.owner_pool);
    ex.get("public_pool", c.public_pool);
    ex.get("temperature", c.temperature);
    ex.get("iterations", c.iterations);
    ex.get("mc_samples", c.mc_samples);
    if (auto v = ex.raw("order")) {
      if (*v == "owner-first") c.order = Order::owner_first;
      else if (*v == "public-first") c.order = Order::public_first;
      else throw ConfigError("exact.order must be owner-first or public-first");
    }
    if (auto v = ex.raw("init")) {
      if (*v == "uniform") c.init = InitKind::uniform;
      else if (*v == "ramp") c.init = InitKind::ramp;
      else throw ConfigError("exact.init must be uniform or ramp");
    }
    ex.reject_unknown();

    auto& p = c.particle;
    Section pa(child("particle"), "particle");
    pa.get("init_n", p.init_n);
    if (auto v = pa.raw("box")) p.box = detail::parse_bounds(*v, "particle.box");
    pa.get("owner_select_n", p.owner_select_n);
    pa.get("gen_n", p.gen_n);
    pa.get("public_select_n", p.public_select_n);
    pa.get("iterations", p.iterations);
    pa.get("owner_pool", p.owner_bt.pool_size);
    pa.get("public_pool", p.public_bt.pool_size);
    if (auto v = pa.raw("temperature")) {
      p.owner_bt.temperature = p.public_bt.temperature = detail::parse_double(*v, "particle.temperature");
    }
    if (auto v = pa.raw("mc_samples")) {
      p.owner_bt.mc_samples = p.public_bt.mc_samples =
          static_cast<std::size_t>(detail::parse_u64(*v, "particle.mc_samples"));
    }
    if (auto v = pa.raw("accumulation")) {
      if (*v == "accumulate") p.accumulation = Accumulation::accumulate;
      else if (*v == "window") p.accumulation = Accumulation::window;
      else throw ConfigError("particle.accumulation must be accumulate or window");
    }
    pa.get("window", p.window);
    if (auto v = pa.raw("mean_dist")) {
      if (*v == "curated") p.mean_dist_over_dataset = false;
      else if (*v == "dataset") p.mean_dist_over_dataset = true;
      else throw ConfigError("particle.mean_dist must be curated or dataset");
    }
    pa.reject_unknown();

    Section em(child("em"), "em");
    em.get("n_components", p.em.n_components);
    em.get("max_iters", p.em.max_iters);
    em.get("tol", p.em.tol);
    em.get("cov_floor", p.em.cov_floor);
    em.reject_unknown();

    c.exact().validate();
    c.particle.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

inline ScenarioConfig parse_scenario_ini(const std::string& text, ScenarioConfig base = {}) {
  std::istringstream is(text);
  return parse_scenario_ini(is, std::move(base));
}

inline ScenarioConfig load_scenario_ini(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path + "'");
  return parse_scenario_ini(is);
}

/// Property tree of a scenario, one section per module.
inline boost::property_tree::ptree scenario_tree(const ScenarioConfig& c) {
  using detail::format_bounds;
  using detail::join;
  boost::property_tree::ptree t;
  t.put("scenario.name", c.name);
  t.put("scenario.seed", std::to_string(c.seed));
  if (c.space_kind == StateSpace::Kind::grid) {
    t.put("space.kind", "grid");
    t.put("space.bounds", format_bounds(c.bounds));
    t.put("space.resolution", std::to_string(c.resolution));
  } else {
    t.put("space.kind", "alphabet");
    t.put("space.labels", join(c.labels, [](long l) { return std::to_string(l); }));
  }
  detail::put_reward(t, "owner", c.owner);
  detail::put_reward(t, "public", c.public_);
  t.put("exact.owner_pool", std::to_string(c.owner_pool));
  t.put("exact.public_pool", std::to_string(c.public_pool));
  t.put("exact.temperature", format_double(c.temperature));
  t.put("exact.iterations", std::to_string(c.iterations));
  t.put("exact.order", std::string(to_string(c.order)));
  t.put("exact.init", std::string(to_string(c.init)));
  t.put("exact.mc_samples", std::to_string(c.mc_samples));
  const auto& p = c.particle;
  t.put("particle.init_n", std::to_string(p.init_n));
  t.put("particle.box", format_bounds(p.box));
  t.put("particle.owner_select_n", std::to_string(p.owner_select_n));
  t.put("particle.gen_n", std::to_string(p.gen_n));
  t.put("particle.public_select_n", std::to_string(p.public_select_n));
  t.put("particle.iterations", std::to_string(p.iterations));
  t.put("particle.owner_pool", std::to_string(p.owner_bt.pool_size));
  t.put("particle.public_pool", std::to_string(p.public_bt.pool_size));
  t.put("particle.temperature", format_double(p.owner_bt.temperature));
  t.put("particle.mc_samples", std::to_string(p.owner_bt.mc_samples));
  t.put("particle.accumulation", p.accumulation == Accumulation::accumulate ? "accumulate" : "window");
  t.put("particle.window", std::to_string(p.window));
  t.put("particle.mean_dist", p.mean_dist_over_dataset ? "dataset" : "curated");
  t.put("em.n_components", std::to_string(p.em.n_components));
  t.put("em.max_iters", std::to_string(p.em.max_iters));
  t.put("em.tol", format_double(p.em.tol));
  t.put("em.cov_floor", format_double(p.em.cov_floor));
  return t;
}

inline std::string serialize_ini(const ScenarioConfig& c) {
  std::ostringstream os;
  boost::property_tree::ini_parser::write_ini(os, scenario_tree(c));
  return os.str();
}

/// CRC-32 of the serialised config, as 8 hex digits.
inline std::string config_digest(const ScenarioConfig& c) { return hex32(crc32(serialize_ini(c))); }

}  // namespace btcurate

#endif  // BTCURATE_SCENARIO_HPP_
