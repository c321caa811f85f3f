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

#ifndef BTCURATE_BTCURATE_HPP_
#define BTCURATE_BTCURATE_HPP_

#include "btcurate/bt_curation.hpp"
#include "btcurate/common.hpp"
#include "btcurate/diagnostics.hpp"
#include "btcurate/distribution.hpp"
#include "btcurate/exact_dynamics.hpp"
#include "btcurate/gmm.hpp"
#include "btcurate/manifest.hpp"
#include "btcurate/particle_dynamics.hpp"
#include "btcurate/rewards.hpp"
#include "btcurate/runner.hpp"
#include "btcurate/scenario.hpp"
#include "btcurate/state_space.hpp"
#include "btcurate/theorem_checks.hpp"

#endif  // BTCURATE_BTCURATE_HPP_
