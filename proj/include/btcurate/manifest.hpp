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

// Run manifests: config echo, seeds, version, CRC-32 of every output file
// and wall-clock duration, stored as manifest.json next to the outputs.

#ifndef BTCURATE_MANIFEST_HPP_
#define BTCURATE_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include "json.hpp"

#include "btcurate/common.hpp"
#include "btcurate/scenario.hpp"

namespace btcurate {

inline constexpr const char* kManifestName = "manifest.json";

struct ManifestFile {
  std::string name;  // relative to the run directory
  std::string crc32;
};

struct RunManifest {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::uint64_t>> seeds;
  std::string version{kVersion};
  std::string mode;
  std::vector<ManifestFile> files;
  double duration_seconds = 0.0;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw IoError("cannot read '" + p.string() + "'");
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline std::string file_crc32(const std::filesystem::path& p) { return hex32(crc32(read_file(p))); }

/// Config echo as {section: {key: value}} in serialisation order.
inline nlohmann::ordered_json config_echo(const ScenarioConfig& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [section, keys] : scenario_tree(c)) {
    auto& s = j[section];
    s = nlohmann::ordered_json::object();
    for (const auto& [k, v] : keys) s[k] = v.data();
  }
  return j;
}

inline nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["version"] = m.version;
  j["mode"] = m.mode;
  j["config"] = m.config;
  auto& seeds = j["seeds"];
  seeds = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.seeds) seeds[k] = v;
  auto& files = j["files"];
  files = nlohmann::ordered_json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"crc32", f.crc32}});
  j["duration_seconds"] = m.duration_seconds;
  return j;
}

inline RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  try {
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.mode = j.at("mode").get<std::string>();
    m.config = j.at("config");
    for (const auto& [k, v] : j.at("seeds").items()) m.seeds.emplace_back(k, v.get<std::uint64_t>());
    for (const auto& f : j.at("files")) {
      m.files.push_back({f.at("name").get<std::string>(), f.at("crc32").get<std::string>()});
    }
    m.duration_seconds = j.at("duration_seconds").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

/// Checksums every listed file under `dir` and writes the manifest there.
inline void write_manifest(const std::filesystem::path& dir, RunManifest m,
                           const std::vector<std::string>& outputs) {
  m.files.clear();
  for (const auto& name : outputs) m.files.push_back({name, file_crc32(dir / name)});
  std::ofstream os(dir / kManifestName, std::ios::binary);
  if (!os) throw IoError("cannot write '" + (dir / kManifestName).string() + "'");
  os << to_json(m).dump(2) << '\n';
  if (!os) throw IoError("write failed for '" + (dir / kManifestName).string() + "'");
}

inline RunManifest load_manifest(const std::filesystem::path& dir) {
  const auto text = read_file(dir / kManifestName);
  try {
    return manifest_from_json(nlohmann::ordered_json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

/// Names of listed files whose checksum no longer matches (empty when the
/// run directory verifies).
inline std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  std::vector<std::string> bad;
  for (const auto& f : load_manifest(dir).files) {
    std::error_code ec;
    if (!std::filesystem::exists(dir / f.name, ec) || file_crc32(dir / f.name) != f.crc32) {
      bad.push_back(f.name);
    }
  }
  return bad;
}

}  // namespace btcurate

#endif  // BTCURATE_MANIFEST_HPP_
