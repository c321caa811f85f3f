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


#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "btcurate/scenario.hpp"

namespace bc = btcurate;

TEST(Presets, DiskCentresAndRadius) {
  const auto perfect = bc::preset("perfect-2d");
  const auto partial = bc::preset("partial-2d");
  const auto disjoint = bc::preset("disjoint-2d");
  EXPECT_EQ(perfect.owner.center(), (bc::StatePoint{0, 0}));
  EXPECT_EQ(perfect.public_.center(), (bc::StatePoint{0, 0}));
  EXPECT_EQ(partial.public_.center(), (bc::StatePoint{1.5, 0}));
  EXPECT_EQ(disjoint.public_.center(), (bc::StatePoint{3, 0}));
  for (const auto* s : {&perfect, &partial, &disjoint}) {
    EXPECT_EQ(s->owner.radius(), 1.0);
    EXPECT_EQ(s->public_.radius(), 1.0);
    EXPECT_EQ(s->iterations, 200u);
    EXPECT_EQ(s->make_space()->size(), 61u * 61u);
  }
}

TEST(Presets, ParticleDefaults) {
  const auto s = bc::preset("partial-2d");
  const auto& p = s.particle;
  EXPECT_EQ(p.init_n, 1000u);
  EXPECT_EQ(p.owner_select_n, 100u);
  EXPECT_EQ(p.gen_n, 200u);
  EXPECT_EQ(p.public_select_n, 50u);
  EXPECT_EQ(p.iterations, 100u);
  EXPECT_EQ(p.owner_bt.temperature, 0.5);
  EXPECT_EQ(p.public_bt.temperature, 0.5);
  EXPECT_EQ(p.box.size(), 2u);
  EXPECT_EQ(p.box[0].lo, -5.0);
  EXPECT_EQ(p.box[1].hi, 5.0);
}

TEST(Presets, WordScenariosHaveExpectedRegimes) {
  const auto regime = [](const char* n) { return bc::predict(bc::preset(n).exact()).regime; };
  EXPECT_EQ(regime("perfect-words"), bc::Regime::perfect);
  EXPECT_EQ(regime("perfect-words-band"), bc::Regime::perfect);
  EXPECT_EQ(regime("partial-words"), bc::Regime::partial);
  EXPECT_EQ(regime("partial-words-alt"), bc::Regime::partial);
  EXPECT_EQ(regime("partial-words-broad"), bc::Regime::partial);
  EXPECT_EQ(regime("disjoint-words"), bc::Regime::disjoint);
  EXPECT_EQ(regime("disjoint-words-alt"), bc::Regime::disjoint);
  EXPECT_EQ(regime("perfect-2d"), bc::Regime::perfect);
  EXPECT_EQ(regime("partial-2d"), bc::Regime::partial);
  EXPECT_EQ(regime("disjoint-2d"), bc::Regime::disjoint);
  EXPECT_EQ(bc::preset("partial-words").iterations, 500u);
}

TEST(Presets, AllNamesResolveAndUnknownFails) {
  for (const auto& n : bc::preset_names()) EXPECT_EQ(bc::preset(n).name, n);
  EXPECT_THROW(bc::preset("nope"), bc::ConfigError);
}

TEST(Presets, DerivedSeedsDiffer) {
  auto s = bc::preset("partial-2d");
  s.seed = 5;
  EXPECT_NE(s.exact().seed, s.particle_run().seed);
  auto t = s;
  t.seed = 6;
  EXPECT_NE(s.particle_run().seed, t.particle_run().seed);
}

TEST(Ini, RoundTripIsIdempotent) {
  for (const auto& n : bc::preset_names()) {
    const auto text = bc::serialize_ini(bc::preset(n));
    const auto back = bc::parse_scenario_ini(text);
    EXPECT_EQ(bc::serialize_ini(back), text) << n;
    EXPECT_EQ(back.owner, bc::preset(n).owner);
    EXPECT_EQ(bc::config_digest(back), bc::config_digest(bc::preset(n)));
  }
}

TEST(Ini, RoundTripAwkwardValues) {
  auto s = bc::preset("partial-2d");
  s.temperature = 0.1 + 0.2;  // not exactly representable in short decimal
  s.owner = bc::RewardField::circular({1.0 / 3.0, -0.7}, 0.9, 1.25);
  s.particle.em.cov_floor = 3e-7;
  s.order = bc::Order::public_first;
  s.init = bc::InitKind::ramp;
  const auto back = bc::parse_scenario_ini(bc::serialize_ini(s));
  EXPECT_EQ(back.temperature, s.temperature);
  EXPECT_EQ(back.owner, s.owner);
  EXPECT_EQ(back.particle.em.cov_floor, 3e-7);
  EXPECT_EQ(back.order, bc::Order::public_first);
  EXPECT_EQ(back.init, bc::InitKind::ramp);
}

TEST(Ini, OverridesApplyOnBase) {
  const auto s = bc::parse_scenario_ini(
      "[exact]\niterations = 17\n[public]\nkind = circular\ncenter = 2 0\nradius = 1\n",
      bc::preset("perfect-2d"));
  EXPECT_EQ(s.iterations, 17u);
  EXPECT_EQ(s.public_.center(), (bc::StatePoint{2, 0}));
  EXPECT_EQ(s.owner, bc::preset("perfect-2d").owner);
}

TEST(Ini, TabularAndAlphabet) {
  const auto s = bc::parse_scenario_ini(
      "[space]\nkind = alphabet\nlabels = 1 2 3\n"
      "[owner]\nkind = tabular\nvalues = 0.5 -1 2\n"
      "[public]\nkind = constant\nvalue = 0\n");
  EXPECT_EQ(s.make_space()->size(), 3u);
  EXPECT_EQ(s.owner.table(), (std::vector<double>{0.5, -1, 2}));
}

TEST(Ini, Errors) {
  EXPECT_THROW(bc::parse_scenario_ini("[exact]\nbogus = 1\n"), bc::ConfigError);
  EXPECT_THROW(bc::parse_scenario_ini("[nowhere]\nx = 1\n"), bc::ConfigError);
  EXPECT_THROW(bc::parse_scenario_ini("[exact]\niterations = ten\n"), bc::ConfigError);
  EXPECT_THROW(bc::parse_scenario_ini("[exact]\norder = sideways\n"), bc::ConfigError);
  EXPECT_THROW(bc::parse_scenario_ini("[owner]\nkind = star\n"), bc::ConfigError);
  EXPECT_THROW(bc::parse_scenario_ini("[space]\nbounds = 1:0 0:1\n"), bc::ConfigError);
  EXPECT_THROW(bc::parse_scenario_ini("[exact]\nowner_pool = 1\n"), bc::ConfigError);
  EXPECT_THROW(bc::parse_scenario_ini("not ini at all ["), bc::ConfigError);
  EXPECT_THROW(bc::load_scenario_ini("/nonexistent/x.ini"), bc::Error);
}

TEST(Ini, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "btcurate_scenario_test.ini";
  {
    std::ofstream os(path);
    os << bc::serialize_ini(bc::preset("disjoint-words"));
  }
  const auto s = bc::load_scenario_ini(path.string());
  EXPECT_EQ(s.name, "disjoint-words");
  EXPECT_EQ(s.public_.lo(), 5);
  std::filesystem::remove(path);
}
