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

// Run directories. Every run writes its CSVs plus manifest.json:
//
//   exact mode     trajectory.csv; distributions.csv (alphabet spaces:
//                  iteration,label,probability for t = 0..T);
//                  kde_initial.csv, kde_final.csv (grid spaces: p_t / cell
//                  volume as x,y,density)
//   particle mode  trajectory.csv; points.csv (x,y,iteration,stage);
//                  kde_final.csv (Scott KDE of the last generated batch)

#ifndef BTCURATE_RUNNER_HPP_
#define BTCURATE_RUNNER_HPP_

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "btcurate/common.hpp"
#include "btcurate/diagnostics.hpp"
#include "btcurate/exact_dynamics.hpp"
#include "btcurate/manifest.hpp"
#include "btcurate/particle_dynamics.hpp"
#include "btcurate/scenario.hpp"

namespace btcurate {

enum class RunMode { exact, particle };

inline std::string_view to_string(RunMode m) { return m == RunMode::exact ? "exact" : "particle"; }

inline RunMode parse_run_mode(std::string_view s) {
  if (s == "exact") return RunMode::exact;
  if (s == "particle") return RunMode::particle;
  throw ConfigError("mode must be exact or particle, got '" + std::string(s) + "'");
}

inline constexpr std::string_view kPointsHeader = "x,y,iteration,stage";
inline constexpr std::string_view kDistributionsHeader = "iteration,label,probability";

namespace detail {

inline void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write '" + p.string() + "'");
  return os;
}

inline void close_out(std::ofstream& os, const std::filesystem::path& p) {
  os.close();
  if (!os) throw IoError("write failed for '" + p.string() + "'");
}

inline void write_density(const std::filesystem::path& p, const DiscreteDistribution& d) {
  KdeGrid g;
  const double vol = cell_volume(d.space());
  g.density.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) g.density[i] = d[i] / vol;
  auto os = open_out(p);
  write_kde_csv(os, d.space(), g);
  close_out(os, p);
}

inline void write_points(std::ostream& os, std::span<const StatePoint> pts, std::size_t t,
                         std::string_view stage) {
  for (const auto& x : pts) {
    os << format_double(x[0]) << ',' << format_double(x.dim() > 1 ? x[1] : 0.0) << ',' << t << ','
       << stage << '\n';
  }
}

}  // namespace detail

/// Exact-dynamics run of `s` into `dir`. Returns the written file names.
inline std::vector<std::string> write_exact_run(const ScenarioConfig& s, const std::filesystem::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  detail::prepare_dir(dir);
  const ExactRunConfig cfg = s.exact();
  const auto traj = run(cfg);
  const RegimeGeometry geometry(cfg, cell_eta(*cfg.space));
  const auto records = exact_records(geometry, traj);

  std::vector<std::string> outputs{"trajectory.csv"};
  {
    auto os = detail::open_out(dir / "trajectory.csv");
    write_trajectory_csv(os, records);
    detail::close_out(os, dir / "trajectory.csv");
  }
  if (cfg.space->kind() == StateSpace::Kind::alphabet) {
    const auto path = dir / "distributions.csv";
    auto os = detail::open_out(path);
    os << kDistributionsHeader << '\n';
    for (std::size_t t = 0; t < traj.size(); ++t) {
      for (std::size_t i = 0; i < traj[t].size(); ++i) {
        os << t << ',' << cfg.space->labels()[i] << ',' << format_double(traj[t][i]) << '\n';
      }
    }
    detail::close_out(os, path);
    outputs.push_back("distributions.csv");
  } else {
    detail::write_density(dir / "kde_initial.csv", traj.front());
    detail::write_density(dir / "kde_final.csv", traj.back());
    outputs.push_back("kde_initial.csv");
    outputs.push_back("kde_final.csv");
  }

  RunManifest m;
  m.mode = "exact";
  m.config = config_echo(s);
  m.seeds = {{"root", s.seed}, {"exact", cfg.seed}};
  m.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, m, outputs);
  return outputs;
}

/// Particle run of `s` into `dir`; needs a two-dimensional grid scenario.
inline std::vector<std::string> write_particle_run(const ScenarioConfig& s,
                                                   const std::filesystem::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  if (s.space_kind != StateSpace::Kind::grid || s.bounds.size() != 2) {
    throw ConfigError("particle mode needs a two-dimensional grid scenario");
  }
  detail::prepare_dir(dir);
  const ExactRunConfig reference = s.exact();
  const RegimeGeometry geometry(reference, cell_eta(*reference.space));
  const ParticleRunConfig pcfg = s.particle_run();

  const auto points_path = dir / "points.csv";
  auto points = detail::open_out(points_path);
  points << kPointsHeader << '\n';
  std::vector<StatePoint> last_generated;
  const auto records = run_particles(
      pcfg, s.owner, s.public_, geometry,
      [&](std::size_t t, const ParticleDataset&, const IterationArtifacts& art) {
        detail::write_points(points, art.owner_curated, t, "owner_curated");
        detail::write_points(points, art.generated, t, "generated");
        detail::write_points(points, art.public_curated, t, "public_curated");
        if (t == pcfg.iterations) last_generated = art.generated;
      });
  detail::close_out(points, points_path);
  {
    auto os = detail::open_out(dir / "trajectory.csv");
    write_trajectory_csv(os, records);
    detail::close_out(os, dir / "trajectory.csv");
  }
  {
    const auto kde = kde_grid(last_generated, *reference.space, Bandwidth::scott());
    auto os = detail::open_out(dir / "kde_final.csv");
    write_kde_csv(os, *reference.space, kde);
    detail::close_out(os, dir / "kde_final.csv");
  }
  const std::vector<std::string> outputs{"trajectory.csv", "points.csv", "kde_final.csv"};

  RunManifest m;
  m.mode = "particle";
  m.config = config_echo(s);
  m.seeds = {{"root", s.seed}, {"particle", pcfg.seed}, {"init", derive_seed(pcfg.seed, "init")}};
  m.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, m, outputs);
  return outputs;
}

inline std::vector<std::string> write_run(const ScenarioConfig& s, RunMode mode,
                                          const std::filesystem::path& dir) {
  return mode == RunMode::exact ? write_exact_run(s, dir) : write_particle_run(s, dir);
}

}  // namespace btcurate

#endif  // BTCURATE_RUNNER_HPP_
