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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "remforge/core/error.hpp"
#include "remforge/radioenv.hpp"

namespace remforge::radioenv {

namespace {

// Vendor prefixes commonly seen on residential routers; cosmetic only.
constexpr std::array<std::uint64_t, 6> kOuis = {0x001A2B, 0x3C7C3F, 0x7CB733, 0xA4B1E9, 0xC8D3FF, 0xF0B014};

int draw_channel(core::Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.30) return 1;
  if (u < 0.55) return 6;
  if (u < 0.80) return 11;
  return 1 + static_cast<int>(rng.below(13));
}

std::string ssid_name(core::Rng& rng, int index) {
  static constexpr std::array<const char*, 6> kStems = {"telenet", "proximus", "orange", "home", "WiFi", "scarlet"};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%04X", kStems[static_cast<std::size_t>(index) % kStems.size()],
                static_cast<unsigned>(rng.below(0x10000)));
  return buf;
}

}  // namespace

std::vector<AccessPoint> generate_environment(const ScenarioConfig& spec, const core::Volume& volume,
                                              std::uint64_t master_seed) {
  if (spec.ap_count <= 0 || spec.ssid_count <= 0) throw InvalidArgument("AP and SSID counts must be positive");
  if (spec.ssid_count > spec.ap_count) throw InvalidArgument("ssid_count cannot exceed ap_count");
  if (!(spec.min_distance_m > 0.0) || spec.max_distance_m < spec.min_distance_m) {
    throw InvalidArgument("invalid AP distance range");
  }
  if (spec.tx_power_max_dbm < spec.tx_power_min_dbm || spec.path_loss_exponent_max < spec.path_loss_exponent_min) {
    throw InvalidArgument("invalid tx power or path loss exponent range");
  }
  if (spec.center_bias < 0.0) throw InvalidArgument("center_bias must be >= 0");
  validate(spec.propagation);

  core::Rng rng = core::Rng::derive(master_seed, "environment");
  const Vec3 center = volume.center();
  const double center_angle = std::atan2(spec.center_dir_y, spec.center_dir_x);

  std::vector<AccessPoint> aps;
  std::set<std::uint64_t> used_macs;
  std::vector<std::string> ssids;
  aps.reserve(static_cast<std::size_t>(spec.ap_count));

  for (int i = 0; i < spec.ap_count; ++i) {
    AccessPoint ap;

    // Azimuth by rejection: acceptance grows with alignment to the center.
    double theta = 0.0;
    for (;;) {
      theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const double accept = (1.0 + spec.center_bias * std::cos(theta - center_angle)) / (1.0 + spec.center_bias);
      if (rng.uniform() < accept) break;
    }
    const double r = rng.uniform(spec.min_distance_m, spec.max_distance_m);

    int level = 0;
    if (rng.uniform() < spec.other_floor_prob) level = rng.uniform() < 0.5 ? -1 : 1;
    const double height = rng.uniform(0.3, 2.5);

    ap.position = {center.x + r * std::cos(theta), center.y + r * std::sin(theta),
                   volume.origin().z + level * spec.floor_height_m + height};
    ap.wall_count_toward_volume =
        static_cast<int>(std::floor(r / spec.wall_spacing_m)) + spec.walls_per_floor * std::abs(level);
    ap.tx_power_dbm = rng.uniform(spec.tx_power_min_dbm, spec.tx_power_max_dbm);
    ap.path_loss_exponent = rng.uniform(spec.path_loss_exponent_min, spec.path_loss_exponent_max);
    ap.channel = draw_channel(rng);

    std::uint64_t bits;
    do {
      bits = (kOuis[rng.below(kOuis.size())] << 24) | rng.below(0x1000000);
    } while (!used_macs.insert(bits).second);
    ap.mac = MacAddress(bits);

    if (i < spec.ssid_count) {
      std::string name;
      do {
        name = ssid_name(rng, i);
      } while (std::find(ssids.begin(), ssids.end(), name) != ssids.end());
      ssids.push_back(name);
      ap.ssid = name;
    } else {
      // Extra radios of an existing network (mesh nodes, dual-band routers).
      ap.ssid = ssids[rng.below(ssids.size())];
    }
    ap.seed = rng.next_u64();
    validate(ap);
    aps.push_back(std::move(ap));
  }
  return aps;
}

const AccessPoint* RadioEnvironment::find(MacAddress mac) const {
  for (const auto& ap : aps) {
    if (ap.mac == mac) return &ap;
  }
  return nullptr;
}

}  // namespace remforge::radioenv
