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
#include <string>
#include <string_view>
#include <vector>

#include "remforge/core/geometry.hpp"
#include "remforge/core/mac.hpp"

namespace remforge::core {

inline constexpr int kMinRssiDbm = -100;
inline constexpr int kMaxRssiDbm = 0;
inline constexpr int kMinChannel = 1;
inline constexpr int kMaxChannel = 13;
/// Localization noise may carry an estimate slightly outside the volume.
inline constexpr double kPositionSlackM = 0.5;

/// One location-annotated <ssid, rssi, mac, channel> observation.
struct BeaconSample {
  std::string uav_id;
  std::int64_t seq = 0;
  std::int64_t t_ms = 0;
  Vec3 est_position;
  std::string ssid;
  MacAddress mac;
  int channel = 1;
  int rssi_dbm = -100;

  friend bool operator==(const BeaconSample&, const BeaconSample&) = default;
};

/// Throws InvalidArgument if channel, rssi or position violate the sample invariants.
void validate_sample(const BeaconSample& s, const Volume& volume);

/// Round half away from zero and clamp into [kMinRssiDbm, kMaxRssiDbm].
int quantize_rssi(double rssi_dbm);

struct Waypoint {
  Vec3 position;
  double dwell_scan_s = 3.0;
  double transit_budget_s = 4.0;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

void validate_waypoint(const Waypoint& w, const Volume& volume);

// ---- JSONL sample log -------------------------------------------------------
// One object per line with keys, in this order when written:
//   uav_id, seq, t_ms, est_x, est_y, est_z, ssid, mac, channel, rssi_dbm
// Readers accept any key order.

std::string to_jsonl_line(const BeaconSample& s);
BeaconSample parse_jsonl_line(std::string_view line);
std::string to_jsonl(const std::vector<BeaconSample>& samples);

struct LineDiagnostic {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct SampleLog {
  std::vector<BeaconSample> samples;
  std::vector<LineDiagnostic> diagnostics;
};

/// Parses a JSONL document. Malformed lines are collected as diagnostics; if
/// more than 1% of non-blank lines are malformed a ParseError is thrown.
SampleLog parse_sample_log(std::string_view text);

void write_sample_log(const std::filesystem::path& path, const std::vector<BeaconSample>& samples);

}  // namespace remforge::core
