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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "remforge/core/geometry.hpp"
#include "remforge/core/mac.hpp"
#include "remforge/core/rng.hpp"

namespace remforge::radioenv {

using core::MacAddress;
using core::Vec3;

/// Reference loss at d0 = 1 m for the log-distance model.
inline constexpr double kReferenceLossDb = 40.0;
/// Shadowing is constant within cubic voxels of this edge length.
inline constexpr double kShadowVoxelM = 0.25;

struct AccessPoint {
  MacAddress mac;
  std::string ssid;
  int channel = 1;
  Vec3 position;
  double tx_power_dbm = 15.0;
  double path_loss_exponent = 3.0;
  int wall_count_toward_volume = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const AccessPoint&, const AccessPoint&) = default;
};

void validate(const AccessPoint& ap);

struct PropagationParams {
  double d0_m = 1.0;
  double shadow_sigma_db = 4.0;
  double temporal_sigma_db = 1.5;
  double wall_attenuation_db = 5.0;
  double sensitivity_dbm = -92.0;
  double detect_prob = 0.95;

  friend bool operator==(const PropagationParams&, const PropagationParams&) = default;
};

void validate(const PropagationParams& params);

/// Self-interference from the control radio. `radio_freq_mhz` empty means the
/// radio is off.
struct InterferenceModel {
  std::optional<int> radio_freq_mhz;
  double overlap_halfwidth_mhz = 11.0;
  double suppression_factor = 0.25;

  friend bool operator==(const InterferenceModel&, const InterferenceModel&) = default;
};

void validate(const InterferenceModel& model);

/// 2.4 GHz Wi-Fi channel center: 2412 + 5 (c - 1) MHz.
constexpr double channel_center_mhz(int channel) { return 2412.0 + 5.0 * (channel - 1); }

/// Multiplier applied to the detection probability of an AP on `channel`.
double suppression(const InterferenceModel& model, int channel);

/// Noiseless received power in dBm: log-distance path loss, wall losses and
/// the AP's deterministic shadowing field. Throws if `p` coincides with the AP.
double mean_rss(const AccessPoint& ap, Vec3 p, const PropagationParams& params);

/// Deterministic zero-mean field of standard deviation `sigma_db`, constant
/// within each 0.25 m voxel. Half of the variance is shared by 4x4x4 voxel
/// blocks so neighbouring voxels are correlated.
double shadow_field(std::uint64_t seed, Vec3 p, double sigma_db);

/// One <ssid, rssi, mac, channel> tuple as reported by the scanning chip.
struct ScanTuple {
  std::string ssid;
  int rssi_dbm = 0;
  MacAddress mac;
  int channel = 1;

  friend bool operator==(const ScanTuple&, const ScanTuple&) = default;
};

/// One beacon scan at `p`. Every AP consumes exactly one normal and one
/// uniform draw regardless of the outcome, so two scans fed identical streams
/// differ only through the interference model.
std::vector<ScanTuple> perform_scan(const std::vector<AccessPoint>& env, Vec3 p, const PropagationParams& params,
                                    const InterferenceModel& interference, core::Rng& rng);

struct InterferenceRow {
  std::optional<int> radio_freq_mhz;
  int channel = 1;
  double mean_ap_count = 0.0;
};

struct InterferenceTable {
  std::vector<InterferenceRow> rows;  // frequency-major, channels 1..13

  double mean_count(std::optional<int> radio_freq_mhz, int channel) const;
  /// CSV header: radio_freq,channel,mean_ap_count; the radio-off row uses "off".
  std::string to_csv() const;
};

/// Radio off followed by 2400..2525 MHz in 25 MHz steps.
std::vector<std::optional<int>> default_sweep_frequencies();

/// Mean detections per Wi-Fi channel for every radio frequency. Each
/// frequency replays the same random stream (common random numbers), so the
/// radio-off row bounds every other row channel by channel.
InterferenceTable interference_experiment(const std::vector<AccessPoint>& env, Vec3 p,
                                          const PropagationParams& params, const InterferenceModel& base,
                                          const std::vector<std::optional<int>>& freqs, int scans_per_freq,
                                          std::uint64_t seed);

struct ScenarioConfig {
  int ap_count = 73;
  int ssid_count = 49;
  double tx_power_min_dbm = 10.0;
  double tx_power_max_dbm = 18.0;
  double path_loss_exponent_min = 2.8;
  double path_loss_exponent_max = 3.2;
  /// Horizontal AP distance from the volume center.
  double min_distance_m = 3.0;
  double max_distance_m = 36.0;
  /// Horizontal direction towards the building center (more APs that way).
  double center_dir_x = 1.0;
  double center_dir_y = -1.0;
  /// 0 = isotropic placement; larger values concentrate APs towards the center.
  double center_bias = 0.8;
  double wall_spacing_m = 4.0;
  double floor_height_m = 2.8;
  int walls_per_floor = 2;
  double other_floor_prob = 0.4;
  PropagationParams propagation;
  std::uint64_t master_seed = 1;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

nlohmann::json to_json(const PropagationParams& p);
PropagationParams propagation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& c);
/// Missing keys keep their defaults.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AccessPoint& ap);
AccessPoint access_point_from_json(const nlohmann::json& j);

/// Deterministic AP population for `spec` around `volume`.
std::vector<AccessPoint> generate_environment(const ScenarioConfig& spec, const core::Volume& volume,
                                              std::uint64_t master_seed);

/// Ground truth handed to simulation and fidelity checks.
struct RadioEnvironment {
  std::vector<AccessPoint> aps;
  PropagationParams propagation;

  const AccessPoint* find(MacAddress mac) const;
};

nlohmann::json to_json(const RadioEnvironment& env);
RadioEnvironment environment_from_json(const nlohmann::json& j);

}  // namespace remforge::radioenv
