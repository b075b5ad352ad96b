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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "remforge/core/error.hpp"
#include "remforge/radioenv.hpp"

using namespace remforge;
using namespace remforge::radioenv;

namespace {

PropagationParams quiet_params() {
  PropagationParams p;
  p.shadow_sigma_db = 0.0;
  p.temporal_sigma_db = 0.0;
  return p;
}

AccessPoint ap_at(Vec3 pos, int channel = 6, double tx = 20.0, double n = 3.0) {
  AccessPoint ap;
  ap.mac = MacAddress(0x001122334400ULL + static_cast<unsigned>(channel));
  ap.ssid = "net";
  ap.channel = channel;
  ap.position = pos;
  ap.tx_power_dbm = tx;
  ap.path_loss_exponent = n;
  ap.seed = 17;
  return ap;
}

std::vector<AccessPoint> default_env() {
  const ScenarioConfig spec;
  return generate_environment(spec, core::Volume::reference(), spec.master_seed);
}

std::vector<Vec3> grid_points(const core::Volume& v, double res) {
  std::vector<Vec3> out;
  for (double z = res / 2; z < v.extent(2); z += res)
    for (double y = res / 2; y < v.extent(1); y += res)
      for (double x = res / 2; x < v.extent(0); x += res) out.push_back({x, y, z});
  return out;
}

}  // namespace

TEST(MeanRss, ReferenceDistance) {
  const auto ap = ap_at({0, 0, 0}, 6, 12.5);
  EXPECT_DOUBLE_EQ(mean_rss(ap, {1, 0, 0}, quiet_params()), 12.5 - 40.0);
}

TEST(MeanRss, TwoMetresHandEvaluated) {
  const auto ap = ap_at({0, 0, 0}, 6, 20.0, 3.0);
  EXPECT_NEAR(mean_rss(ap, {0, 2, 0}, quiet_params()), -29.03, 0.005);
}

TEST(MeanRss, WallsSubtract) {
  auto ap = ap_at({0, 0, 0});
  const double clear = mean_rss(ap, {2, 0, 0}, quiet_params());
  ap.wall_count_toward_volume = 3;
  EXPECT_DOUBLE_EQ(mean_rss(ap, {2, 0, 0}, quiet_params()), clear - 15.0);
}

TEST(MeanRss, CoincidentPointThrows) {
  EXPECT_THROW(mean_rss(ap_at({1, 1, 1}), {1, 1, 1}, quiet_params()), InvalidArgument);
}

TEST(MeanRss, StrictlyDecreasesWithDistance) {
  core::Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const auto ap = ap_at({0, 0, 0}, 6, rng.uniform(-10, 25), rng.uniform(1.5, 6));
    const Vec3 dir{rng.normal(), rng.normal(), rng.normal()};
    const double len = core::euclidean_distance({0, 0, 0}, dir);
    const double d1 = rng.uniform(0.01, 50), d2 = d1 + rng.uniform(1e-3, 50);
    const double r1 = mean_rss(ap, (d1 / len) * dir, quiet_params());
    const double r2 = mean_rss(ap, (d2 / len) * dir, quiet_params());
    EXPECT_GT(r1, r2);
  }
}

TEST(ShadowField, ZeroSigma) {
  core::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(shadow_field(rng.next_u64(), {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)}, 0.0), 0.0);
  }
}

TEST(ShadowField, Deterministic) {
  EXPECT_EQ(shadow_field(5, {1.3, 0.2, 0.9}, 4.0), shadow_field(5, {1.3, 0.2, 0.9}, 4.0));
  // Same voxel, different point.
  EXPECT_EQ(shadow_field(5, {1.26, 0.01, 0.76}, 4.0), shadow_field(5, {1.49, 0.24, 0.99}, 4.0));
}

TEST(ShadowField, EmpiricalStd) {
  // One point per voxel across many independent AP seeds.
  const int n = 100000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t seed = core::mix64(static_cast<std::uint64_t>(i));
    const Vec3 p{0.125 + 0.25 * (i % 37), 0.125 + 0.25 * (i % 23), 0.125};
    const double v = shadow_field(seed, p, 4.0);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(std::sqrt(s2 / n - mean * mean), 4.0, 0.1);
}

TEST(Scan, EmptyEnvironment) {
  core::Rng rng(1);
  EXPECT_TRUE(perform_scan({}, {1, 1, 1}, PropagationParams{}, InterferenceModel{}, rng).empty());
}

TEST(Scan, DeterministicLimit) {
  // tx - 40 - 30 log10(d) = -50 at d = 1 m with tx = -10.
  const auto ap = ap_at({0, 0, 0}, 6, -10.0);
  auto params = quiet_params();
  params.detect_prob = 1.0;
  core::Rng rng(4);
  const auto scan = perform_scan({ap}, {1, 0, 0}, params, InterferenceModel{}, rng);
  ASSERT_EQ(scan.size(), 1u);
  EXPECT_EQ(scan[0].rssi_dbm, -50);
  EXPECT_EQ(scan[0].mac, ap.mac);
  EXPECT_EQ(scan[0].channel, 6);
  EXPECT_EQ(scan[0].ssid, "net");
}

TEST(Scan, BelowSensitivityIsMissed) {
  const auto ap = ap_at({0, 0, 0}, 6, -10.0);
  auto params = quiet_params();
  params.detect_prob = 1.0;
  core::Rng rng(4);
  EXPECT_TRUE(perform_scan({ap}, {100, 0, 0}, params, InterferenceModel{}, rng).empty());
}

TEST(Scan, InterferenceRatesPerChannel) {
  const std::vector<AccessPoint> env{ap_at({0, 0, 0}, 9, 0.0), ap_at({0, 0, 0}, 1, 0.0)};
  const auto params = quiet_params();
  InterferenceModel radio;
  radio.radio_freq_mhz = 2450;
  core::Rng rng(21);
  int ch9 = 0, ch1 = 0;
  const int scans = 1000;
  for (int i = 0; i < scans; ++i) {
    for (const auto& t : perform_scan(env, {1, 0, 0}, params, radio, rng)) (t.channel == 9 ? ch9 : ch1)++;
  }
  EXPECT_NEAR(ch9 / double(scans), params.detect_prob * 0.25, 0.05);
  EXPECT_NEAR(ch1 / double(scans), params.detect_prob, 0.05);
}

TEST(Scan, SameStreamSameResult) {
  const auto env = default_env();
  core::Rng a(3), b(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(perform_scan(env, {1, 1, 1}, PropagationParams{}, InterferenceModel{}, a),
              perform_scan(env, {1, 1, 1}, PropagationParams{}, InterferenceModel{}, b));
  }
}

TEST(Scan, RadioOnIsSubsetOfRadioOff) {
  const auto env = default_env();
  core::Rng pos(99);
  for (int i = 0; i < 200; ++i) {
    const Vec3 p{pos.uniform(0, 3.74), pos.uniform(0, 3.2), pos.uniform(0, 2.1)};
    InterferenceModel on;
    on.radio_freq_mhz = 2400 + 25 * static_cast<int>(pos.below(6));
    const std::uint64_t seed = pos.next_u64();
    core::Rng a(seed), b(seed);
    const auto off_scan = perform_scan(env, p, PropagationParams{}, InterferenceModel{}, a);
    const auto on_scan = perform_scan(env, p, PropagationParams{}, on, b);
    for (const auto& t : on_scan) EXPECT_NE(std::find(off_scan.begin(), off_scan.end(), t), off_scan.end());
  }
}

TEST(Suppression, WindowEdges) {
  InterferenceModel m;
  EXPECT_EQ(suppression(m, 1), 1.0);
  m.radio_freq_mhz = 2423;  // 11 MHz above channel 1
  EXPECT_EQ(suppression(m, 1), 0.25);
  m.radio_freq_mhz = 2424;
  EXPECT_EQ(suppression(m, 1), 1.0);
  EXPECT_EQ(channel_center_mhz(13), 2472.0);
}

TEST(Environment, Deterministic) { EXPECT_EQ(default_env(), default_env()); }

TEST(Environment, DefaultCounts) {
  const auto env = default_env();
  std::set<MacAddress> macs;
  std::set<std::string> ssids;
  for (const auto& ap : env) {
    macs.insert(ap.mac);
    ssids.insert(ap.ssid);
  }
  EXPECT_EQ(macs.size(), 73u);
  EXPECT_EQ(ssids.size(), 49u);
}

TEST(Environment, RejectsMoreSsidsThanMacs) {
  ScenarioConfig spec;
  spec.ssid_count = 80;
  EXPECT_THROW(generate_environment(spec, core::Volume::reference(), 1), InvalidArgument);
}

TEST(Environment, DetectionsIncreaseWithX) {
  const auto env = default_env();
  const auto vol = core::Volume::reference();
  const PropagationParams params;
  core::Rng rng(5);
  double low = 0, high = 0;
  int n = 0;
  for (double y = 0.2; y < 3.2; y += 0.4) {
    for (double z = 0.2; z < 2.1; z += 0.4) {
      low += perform_scan(env, {vol.extent(0) * 0.125, y, z}, params, InterferenceModel{}, rng).size();
      high += perform_scan(env, {vol.extent(0) * 0.875, y, z}, params, InterferenceModel{}, rng).size();
      ++n;
    }
  }
  EXPECT_GT(high / n, low / n);
}

TEST(Environment, MeanDetectedRssCalibrated) {
  const auto env = default_env();
  const PropagationParams params;
  core::Rng rng(6);
  double sum = 0;
  long count = 0;
  for (const auto& p : grid_points(core::Volume::reference(), 0.25)) {
    for (const auto& t : perform_scan(env, p, params, InterferenceModel{}, rng)) {
      sum += t.rssi_dbm;
      ++count;
    }
  }
  ASSERT_GT(count, 0);
  const double mean = sum / static_cast<double>(count);
  EXPECT_GE(mean, -78.0);
  EXPECT_LE(mean, -68.0);
}

TEST(Environment, JsonRoundTrip) {
  RadioEnvironment env{default_env(), PropagationParams{}};
  const auto back = environment_from_json(to_json(env));
  EXPECT_EQ(back.aps, env.aps);
  EXPECT_EQ(back.propagation, env.propagation);
  ASSERT_NE(back.find(env.aps[3].mac), nullptr);
  EXPECT_EQ(back.find(MacAddress(0)), nullptr);
}

TEST(Interference, SevenRowsPerChannel) {
  const auto env = default_env();
  const auto table = interference_experiment(env, {1.87, 1.6, 1.05}, PropagationParams{}, InterferenceModel{},
                                             default_sweep_frequencies(), 3, 1);
  EXPECT_EQ(table.rows.size(), 7u * 13u);
  EXPECT_EQ(table.to_csv().rfind("radio_freq,channel,mean_ap_count\n", 0), 0u);
}

TEST(Interference, EmptyChannelIsZero) {
  std::vector<AccessPoint> env{ap_at({0, 0, 0}, 1, 0.0), ap_at({0, 1, 0}, 6, 0.0)};
  const auto table = interference_experiment(env, {1, 1, 1}, PropagationParams{}, InterferenceModel{},
                                             default_sweep_frequencies(), 10, 1);
  for (const auto& f : default_sweep_frequencies()) EXPECT_EQ(table.mean_count(f, 11), 0.0);
}

TEST(Interference, RadioOffDominates) {
  const auto env = default_env();
  const auto freqs = default_sweep_frequencies();
  const auto table = interference_experiment(env, {1.87, 1.6, 1.05}, PropagationParams{}, InterferenceModel{},
                                             freqs, 200, 4);
  for (int ch = 1; ch <= 13; ++ch) {
    const double off = table.mean_count(std::nullopt, ch);
    for (std::size_t f = 1; f < freqs.size(); ++f) EXPECT_LE(table.mean_count(freqs[f], ch), off);
  }
}
