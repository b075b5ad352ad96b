// Copyright 2026 The remforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "remforge/core/geometry.hpp"
#include "remforge/estimators.hpp"
#include "remforge/fleetsim.hpp"
#include "remforge/radioenv.hpp"

namespace remforge::cli {

/// Everything a subcommand needs. Defaults, then the JSON config file, then
/// command-line flags.
struct RunConfig {
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
  core::Volume volume = core::Volume::reference();
  int waypoints = 72;
  int uavs = 2;
  std::optional<int> partition_axis = 1;  // empty: longest axis
  double margin_m = 0.35;
  double resolution_m = 0.25;
  std::string grid = "k=1,2,3,5,8,16;weights=uniform,distance;p=1,2;factor=1,3";
  int drop_threshold = 16;
  double train_fraction = 0.75;
  int interference_scans = 1000;
  radioenv::ScenarioConfig scenario;
  fleetsim::ProtocolParams protocol;
  fleetsim::BatteryModel battery = fleetsim::BatteryModel::calibrated();
  fleetsim::LocalizationModel localization;
  estimators::MlpConfig mlp;
};

/// Resolved configuration as written next to every output. The output
/// directory is left out so relocated runs compare equal.
nlohmann::json to_json(const RunConfig& c);
/// Overlays the keys present in `j` onto `base`.
RunConfig apply_json(RunConfig base, const nlohmann::json& j);

/// "LxWxH" in meters, origin at zero.
core::Volume parse_volume(const std::string& text);

/// Sub-seed for a pipeline stage.
std::uint64_t stage_seed(std::uint64_t seed, const char* stage);

/// Pipeline stages. Each reads its inputs from and writes its outputs to
/// `c.out`, plus a `<name>.config.json` snapshot.
void cmd_gen_env(const RunConfig& c);
void cmd_plan(const RunConfig& c);
void cmd_fly(const RunConfig& c);
void cmd_preprocess(const RunConfig& c);
void cmd_train(const RunConfig& c);
void cmd_eval(const RunConfig& c);
void cmd_rem(const RunConfig& c);
void cmd_interference(const RunConfig& c);
void cmd_endurance(const RunConfig& c);
void cmd_e2e(const RunConfig& c);

/// Command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace remforge::cli
