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

#include <cmath>
#include <sstream>
#include <string>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/sample.hpp"
#include "remforge/radioenv.hpp"

namespace remforge::radioenv {

void validate(const AccessPoint& ap) {
  if (ap.channel < core::kMinChannel || ap.channel > core::kMaxChannel) {
    throw InvalidArgument("AP channel must be in [1, 13], got " + std::to_string(ap.channel));
  }
  if (!(ap.tx_power_dbm >= -10.0 && ap.tx_power_dbm <= 25.0)) {
    throw InvalidArgument("AP tx power must be in [-10, 25] dBm");
  }
  if (!(ap.path_loss_exponent >= 1.5 && ap.path_loss_exponent <= 6.0)) {
    throw InvalidArgument("path loss exponent must be in [1.5, 6]");
  }
  if (ap.wall_count_toward_volume < 0) throw InvalidArgument("wall count must be >= 0");
  if (!core::is_finite(ap.position)) throw InvalidArgument("AP position must be finite");
}

void validate(const PropagationParams& p) {
  if (!(p.d0_m > 0.0)) throw InvalidArgument("d0 must be positive");
  if (!(p.shadow_sigma_db >= 0.0) || !(p.temporal_sigma_db >= 0.0)) throw InvalidArgument("sigmas must be >= 0");
  if (!(p.sensitivity_dbm < 0.0)) throw InvalidArgument("sensitivity must be negative");
  if (!(p.detect_prob >= 0.0 && p.detect_prob <= 1.0)) throw InvalidArgument("detect_prob must be in [0, 1]");
  if (!(p.wall_attenuation_db >= 0.0)) throw InvalidArgument("wall attenuation must be >= 0");
}

void validate(const InterferenceModel& m) {
  if (!(m.suppression_factor >= 0.0 && m.suppression_factor <= 1.0)) {
    throw InvalidArgument("suppression factor must be in [0, 1]");
  }
  if (m.radio_freq_mhz && (*m.radio_freq_mhz < 2400 || *m.radio_freq_mhz > 2525)) {
    throw InvalidArgument("radio frequency must be in [2400, 2525] MHz");
  }
  if (!(m.overlap_halfwidth_mhz >= 0.0)) throw InvalidArgument("overlap half-width must be >= 0");
}

double suppression(const InterferenceModel& model, int channel) {
  if (!model.radio_freq_mhz) return 1.0;
  const double offset = std::abs(static_cast<double>(*model.radio_freq_mhz) - channel_center_mhz(channel));
  return offset <= model.overlap_halfwidth_mhz ? model.suppression_factor : 1.0;
}

double shadow_field(std::uint64_t seed, Vec3 p, double sigma_db) {
  if (sigma_db < 0.0) throw InvalidArgument("shadow sigma must be >= 0");
  if (sigma_db == 0.0) return 0.0;
  const auto ix = static_cast<std::int64_t>(std::floor(p.x / kShadowVoxelM));
  const auto iy = static_cast<std::int64_t>(std::floor(p.y / kShadowVoxelM));
  const auto iz = static_cast<std::int64_t>(std::floor(p.z / kShadowVoxelM));
  auto key = [seed](std::int64_t a, std::int64_t b, std::int64_t c, std::uint64_t level) {
    std::uint64_t h = core::mix64(seed ^ (level * 0xA24BAED4963EE407ULL));
    h = core::mix64(h ^ static_cast<std::uint64_t>(a));
    h = core::mix64(h ^ static_cast<std::uint64_t>(b));
    return core::mix64(h ^ static_cast<std::uint64_t>(c));
  };
  auto block = [](std::int64_t i) { return i >= 0 ? i / 4 : -((-i + 3) / 4); };
  const double coarse = core::hashed_normal(key(block(ix), block(iy), block(iz), 1));
  const double fine = core::hashed_normal(key(ix, iy, iz, 2));
  return sigma_db * std::sqrt(0.5) * (coarse + fine);
}

double mean_rss(const AccessPoint& ap, Vec3 p, const PropagationParams& params) {
  const double d = core::euclidean_distance(ap.position, p);
  if (!(d > 0.0)) throw InvalidArgument("query point coincides with access point " + ap.mac.to_string());
  return ap.tx_power_dbm - kReferenceLossDb - 10.0 * ap.path_loss_exponent * std::log10(d / params.d0_m) -
         ap.wall_count_toward_volume * params.wall_attenuation_db + shadow_field(ap.seed, p, params.shadow_sigma_db);
}

std::vector<ScanTuple> perform_scan(const std::vector<AccessPoint>& env, Vec3 p, const PropagationParams& params,
                                    const InterferenceModel& interference, core::Rng& rng) {
  std::vector<ScanTuple> out;
  for (const auto& ap : env) {
    const double rss = mean_rss(ap, p, params) + params.temporal_sigma_db * rng.normal();
    const double u = rng.uniform();
    if (rss < params.sensitivity_dbm) continue;
    if (!(u < params.detect_prob * suppression(interference, ap.channel))) continue;
    out.push_back({ap.ssid, core::quantize_rssi(rss), ap.mac, ap.channel});
  }
  return out;
}

double InterferenceTable::mean_count(std::optional<int> radio_freq_mhz, int channel) const {
  for (const auto& r : rows) {
    if (r.radio_freq_mhz == radio_freq_mhz && r.channel == channel) return r.mean_ap_count;
  }
  throw InvalidArgument("no such interference row");
}

std::string InterferenceTable::to_csv() const {
  std::ostringstream out;
  out << "radio_freq,channel,mean_ap_count\n";
  for (const auto& r : rows) {
    out << (r.radio_freq_mhz ? std::to_string(*r.radio_freq_mhz) : std::string("off")) << ',' << r.channel << ','
        << core::format_double(r.mean_ap_count) << '\n';
  }
  return out.str();
}

std::vector<std::optional<int>> default_sweep_frequencies() {
  return {std::nullopt, 2400, 2425, 2450, 2475, 2500, 2525};
}

InterferenceTable interference_experiment(const std::vector<AccessPoint>& env, Vec3 p,
                                          const PropagationParams& params, const InterferenceModel& base,
                                          const std::vector<std::optional<int>>& freqs, int scans_per_freq,
                                          std::uint64_t seed) {
  if (scans_per_freq < 1) throw InvalidArgument("scans_per_freq must be >= 1");
  InterferenceTable table;
  for (const auto& freq : freqs) {
    InterferenceModel model = base;
    model.radio_freq_mhz = freq;
    validate(model);
    std::vector<long> counts(core::kMaxChannel + 1, 0);
    core::Rng rng = core::Rng::derive(seed, "interference");
    for (int s = 0; s < scans_per_freq; ++s) {
      for (const auto& t : perform_scan(env, p, params, model, rng)) ++counts[static_cast<std::size_t>(t.channel)];
    }
    for (int c = core::kMinChannel; c <= core::kMaxChannel; ++c) {
      table.rows.push_back({freq, c, static_cast<double>(counts[static_cast<std::size_t>(c)]) / scans_per_freq});
    }
  }
  return table;
}

}  // namespace remforge::radioenv
