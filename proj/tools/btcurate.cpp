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

// btcurate command line.
//
//   btcurate run <scenario> [--config FILE] [--mode exact|particle] [--seed N]
//                           [--iterations N] [--out DIR]
//   btcurate check <ID...|all> [--config FILE] [--iterations N] [--out DIR]
//   btcurate sweep [--config FILE] [--out DIR]
//   btcurate export-figures [--seed N] [--out DIR]
//
// Exit codes: 0 success, 1 failed check, 2 usage or config error, 3 I/O error.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "btcurate/btcurate.hpp"

namespace bc = btcurate;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct RunArgs {
  std::string scenario;
  std::string config;
  std::string mode = "exact";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> iterations;
  std::string out = "run";
};

struct CheckArgs {
  std::vector<std::string> ids;
  std::string config;
  std::optional<std::size_t> iterations;
  std::string out = "checks";
};

struct SweepArgs {
  std::string config;
  std::string out = "sweep";
};

struct ExportArgs {
  std::uint64_t seed = 0;
  std::string out = "figure-data";
};

bc::ScenarioConfig resolve_scenario(const std::string& name, const std::string& config) {
  if (name.empty() && config.empty()) throw bc::ConfigError("run: give a scenario name or --config");
  bc::ScenarioConfig base = name.empty() ? bc::ScenarioConfig{} : bc::preset(name);
  if (config.empty()) return base;
  std::ifstream is(config);
  if (!is) throw bc::ConfigError("cannot open config '" + config + "'");
  return bc::parse_scenario_ini(is, std::move(base));
}

int cmd_run(const RunArgs& a) {
  auto s = resolve_scenario(a.scenario, a.config);
  const auto mode = bc::parse_run_mode(a.mode);
  if (a.seed) s.seed = *a.seed;
  if (a.iterations) {
    if (mode == bc::RunMode::exact) s.iterations = *a.iterations;
    else s.particle.iterations = *a.iterations;
  }
  const auto files = bc::write_run(s, mode, a.out);
  std::cout << s.name << " (" << bc::to_string(mode) << ") -> " << a.out << '\n';
  for (const auto& f : files) std::cout << "  " << f << '\n';
  return kExitOk;
}

int cmd_check(const CheckArgs& a) {
  std::vector<std::string> ids = a.ids;
  if (ids.size() == 1 && ids.front() == "all") ids = bc::check_ids();
  bc::BatterySettings st;
  st.iterations = a.iterations;
  if (!a.config.empty()) st.scenario = resolve_scenario("", a.config);
  bc::detail::prepare_dir(a.out);
  const auto verdicts = bc::run_battery(ids, st);

  const fs::path path = fs::path(a.out) / "verdicts.csv";
  auto os = bc::detail::open_out(path);
  bc::write_verdict_csv(os, verdicts);
  bc::detail::close_out(os, path);

  bool all = true;
  for (const auto& v : verdicts) {
    std::cout << v.id << "  " << (v.passed ? "PASS" : "FAIL") << "  " << bc::format_evidence(v) << '\n';
    all = all && v.passed;
  }
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const SweepArgs& a) {
  bc::SweepConfig cfg;
  if (!a.config.empty()) {
    std::ifstream is(a.config);
    if (!is) throw bc::ConfigError("cannot open sweep config '" + a.config + "'");
    cfg = bc::parse_sweep_ini(is);
  }
  bc::detail::prepare_dir(a.out);
  std::vector<bc::UtilityMatrix> ms;
  const auto v = bc::check_strategyproofness(cfg.cases(), &ms);

  const fs::path path = fs::path(a.out) / "utilities.csv";
  auto os = bc::detail::open_out(path);
  bc::write_utility_csv(os, ms);
  bc::detail::close_out(os, path);
  std::cout << "utilities -> " << path.string() << '\n' << bc::format_evidence(v) << '\n';
  return kExitOk;
}

int cmd_export(const ExportArgs& a) {
  for (const char* name : {"perfect-2d", "partial-2d", "disjoint-2d"}) {
    auto s = bc::preset(name);
    s.seed = a.seed;
    bc::write_particle_run(s, fs::path(a.out) / name);
    std::cout << name << " -> " << (fs::path(a.out) / name).string() << '\n';
  }
  for (const char* name : {"perfect-words", "partial-words", "disjoint-words"}) {
    auto s = bc::preset(name);
    s.seed = a.seed;
    bc::write_exact_run(s, fs::path(a.out) / name);
    std::cout << name << " -> " << (fs::path(a.out) / name).string() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bradley-Terry curation game simulator", "btcurate"};
  app.set_version_flag("--version", std::string(bc::kVersion));
  app.require_subcommand(1);

  RunArgs run;
  auto* r = app.add_subcommand("run", "run one scenario and write its run directory");
  r->add_option("scenario", run.scenario, "preset name");
  r->add_option("--config", run.config, "scenario INI file (applied on top of the preset)");
  r->add_option("--mode", run.mode, "exact or particle")->check(CLI::IsMember({"exact", "particle"}));
  r->add_option("--seed", run.seed, "root seed");
  r->add_option("--iterations", run.iterations, "override T");
  r->add_option("--out", run.out, "output directory");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "run verdict checks and write verdicts.csv");
  c->add_option("ids", check.ids, "check ids (T1 C1 T2 T3 T4 T5 T6 R1) or all")->required();
  c->add_option("--config", check.config, "scenario INI replacing the default scenarios");
  c->add_option("--iterations", check.iterations, "override T of every scenario");
  c->add_option("--out", check.out, "output directory");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "misreport utility sweep, writes utilities.csv");
  s->add_option("--config", sweep.config, "sweep INI file");
  s->add_option("--out", sweep.out, "output directory");

  ExportArgs ex;
  auto* e = app.add_subcommand("export-figures", "write the run directories the figure scripts read");
  e->add_option("--seed", ex.seed, "root seed");
  e->add_option("--out", ex.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (r->parsed()) return cmd_run(run);
    if (c->parsed()) return cmd_check(check);
    if (s->parsed()) return cmd_sweep(sweep);
    return cmd_export(ex);
  } catch (const bc::IoError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitIo;
  } catch (const bc::Error& err) {
    // config, precondition and degenerate-state errors
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitIo;
  }
}
