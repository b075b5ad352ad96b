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
#include <array>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "remforge/core/error.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/mission.hpp"

using namespace remforge;
using namespace remforge::mission;

namespace {

using Key = std::tuple<double, double, double>;
Key key(const Waypoint& w) { return {w.position.x, w.position.y, w.position.z}; }

radioenv::RadioEnvironment small_env() {
  radioenv::ScenarioConfig spec;
  radioenv::RadioEnvironment env;
  env.aps = radioenv::generate_environment(spec, Volume::reference(), 3);
  env.propagation = spec.propagation;
  return env;
}

}  // namespace

TEST(Lattice, SeventyTwoOverReferenceVolumeIs6x4x3) {
  // Independent enumeration: cell edge = inset extent / n per axis, score =
  // (largest edge / smallest edge) * cells / count.
  const Volume v = Volume::reference();
  const double m = kDefaultMarginM;
  const std::array<double, 3> e = {v.extent(0) - 2 * m, v.extent(1) - 2 * m, v.extent(2) - 2 * m};
  std::array<int, 3> best{};
  double best_score = std::numeric_limits<double>::infinity();
  for (int a = 1; a <= 72; ++a)
    for (int b = 1; b <= 72; ++b)
      for (int c = 1; c <= 72; ++c) {
        const int cells = a * b * c;
        if (cells < 72 || cells > 288) continue;
        const double sx = e[0] / a, sy = e[1] / b, sz = e[2] / c;
        const double score = std::max({sx, sy, sz}) / std::min({sx, sy, sz}) * cells / 72.0;
        if (score < best_score) {
          best_score = score;
          best = {a, b, c};
        }
      }
  EXPECT_EQ(best, (std::array<int, 3>{6, 4, 3}));
  EXPECT_EQ(choose_lattice(v, 72, m), (LatticeShape{6, 4, 3}));
}

TEST(Plan, SingleWaypointAtCenter) {
  const Volume v = Volume::reference();
  const auto wps = plan_waypoints(v, 1);
  ASSERT_EQ(wps.size(), 1u);
  EXPECT_NEAR(wps[0].position.x, v.center().x, 1e-12);
  EXPECT_NEAR(wps[0].position.y, v.center().y, 1e-12);
  EXPECT_NEAR(wps[0].position.z, v.center().z, 1e-12);
}

TEST(Plan, SeventyTwoInsideInsetBox) {
  const Volume v = Volume::reference();
  const auto wps = plan_waypoints(v, 72);
  ASSERT_EQ(wps.size(), 72u);
  std::set<Key> unique;
  for (const auto& w : wps) {
    EXPECT_TRUE(v.strictly_contains(w.position, kDefaultMarginM));
    unique.insert(key(w));
  }
  EXPECT_EQ(unique.size(), 72u);
}

TEST(Plan, Deterministic) {
  const auto a = plan_waypoints(Volume::reference(), 50);
  const auto b = plan_waypoints(Volume::reference(), 50);
  EXPECT_EQ(a, b);
}

TEST(Plan, MarginTooLarge) {
  EXPECT_THROW(plan_waypoints(Volume::reference(), 10, 1.05), InvalidArgument);
  EXPECT_THROW(plan_waypoints(Volume::reference(), 0), InvalidArgument);
}

TEST(Plan, ConsecutiveWaypointsAreNeighbours) {
  // Boustrophedon order over the 6x4x3 lattice never jumps more than one cell.
  const auto wps = plan_waypoints(Volume::reference(), 72);
  const double max_edge = std::max({(3.74 - 0.7) / 6, (3.20 - 0.7) / 4, (2.10 - 0.7) / 3});
  for (std::size_t i = 1; i < wps.size(); ++i) {
    EXPECT_LE(core::euclidean_distance(wps[i - 1].position, wps[i].position), max_edge + 1e-9);
  }
}

TEST(Partition, TwoUavsGet36Each) {
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 72), 2, 1);
  ASSERT_EQ(plan.per_uav.size(), 2u);
  EXPECT_EQ(plan.per_uav[0].waypoints.size(), 36u);
  EXPECT_EQ(plan.per_uav[1].waypoints.size(), 36u);
  EXPECT_EQ(plan.per_uav[0].uav_id, "A");
  EXPECT_EQ(plan.per_uav[1].uav_id, "B");
  double max_a = -1e9, min_b = 1e9;
  for (const auto& w : plan.per_uav[0].waypoints) max_a = std::max(max_a, w.position.y);
  for (const auto& w : plan.per_uav[1].waypoints) min_b = std::min(min_b, w.position.y);
  EXPECT_LT(max_a, min_b);
}

TEST(Partition, UnitPartition) {
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 5), 5);
  ASSERT_EQ(plan.per_uav.size(), 5u);
  for (const auto& u : plan.per_uav) EXPECT_EQ(u.waypoints.size(), 1u);
}

TEST(Partition, SevenOverTwo) {
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 7), 2);
  ASSERT_EQ(plan.per_uav.size(), 2u);
  EXPECT_EQ(plan.per_uav[0].waypoints.size(), 4u);
  EXPECT_EQ(plan.per_uav[1].waypoints.size(), 3u);
}

TEST(Partition, MoreUavsThanWaypoints) {
  EXPECT_THROW(partition_plan(plan_waypoints(Volume::reference(), 3), 4), InvalidArgument);
}

TEST(Partition, IsSetPartitionForRandomCounts) {
  core::Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int count = 1 + static_cast<int>(rng.below(120));
    const int uavs = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(count, 6))));
    const auto wps = plan_waypoints(Volume::reference(), count);
    const auto plan = partition_plan(wps, uavs);
    std::multiset<Key> seen;
    std::size_t smallest = wps.size(), largest = 0;
    for (const auto& u : plan.per_uav) {
      for (const auto& w : u.waypoints) seen.insert(key(w));
      smallest = std::min(smallest, u.waypoints.size());
      largest = std::max(largest, u.waypoints.size());
    }
    std::multiset<Key> expected;
    for (const auto& w : wps) expected.insert(key(w));
    EXPECT_EQ(seen, expected);
    EXPECT_LE(largest - smallest, 1u);
    EXPECT_NO_THROW(validate(plan));
  }
}

TEST(Partition, ValidateRejectsSharedWaypoint) {
  auto plan = partition_plan(plan_waypoints(Volume::reference(), 8), 2);
  plan.per_uav[1].waypoints.push_back(plan.per_uav[0].waypoints.front());
  EXPECT_THROW(validate(plan), InvalidArgument);
}

TEST(Ordering, BoustrophedonNeverLongerThanRaster) {
  core::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int nx = 1 + static_cast<int>(rng.below(7));
    const int ny = 1 + static_cast<int>(rng.below(7));
    const int nz = 1 + static_cast<int>(rng.below(4));
    const double sx = rng.uniform(0.1, 1.0), sy = rng.uniform(0.1, 1.0), sz = rng.uniform(0.1, 1.0);
    std::vector<Waypoint> pts;
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) pts.push_back({{sx * i, sy * j, sz * k}});
    // Shuffle so neither ordering sees the input order.
    for (std::size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng.below(i)]);
    const auto b = boustrophedon_order(pts);
    const auto r = raster_order(pts);
    ASSERT_EQ(b.size(), pts.size());
    EXPECT_LE(path_length(b), path_length(r) + 1e-9);
  }
}

TEST(Plan, JsonRoundTrip) {
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 12), 3);
  const auto back = plan_from_json(to_json(plan));
  ASSERT_EQ(back.per_uav.size(), plan.per_uav.size());
  for (std::size_t i = 0; i < plan.per_uav.size(); ++i) {
    EXPECT_EQ(back.per_uav[i].uav_id, plan.per_uav[i].uav_id);
    EXPECT_EQ(back.per_uav[i].waypoints, plan.per_uav[i].waypoints);
    EXPECT_EQ(back.per_uav[i].start_position, plan.per_uav[i].start_position);
  }
}

TEST(Campaign, EmptySecondUavEqualsSingleMission) {
  const auto env = small_env();
  auto plan = partition_plan(plan_waypoints(Volume::reference(), 6), 1);
  plan.per_uav.push_back({"B", {}, "", {1, 1, 0}, 0.0});
  const auto campaign = run_campaign(plan, {fleetsim::SimConfig{}}, env, 9);
  const auto& a = plan.per_uav[0];
  const auto single = fleetsim::run_mission(a.uav_id, a.start_position, a.waypoints, fleetsim::SimConfig{}, env,
                                            mission_seed(9, 0));
  EXPECT_EQ(campaign.samples, single.samples);
  ASSERT_EQ(campaign.report.missions.size(), 1u);
  EXPECT_EQ(campaign.report.total_samples, single.report.samples);
}

TEST(Campaign, MergedLogIsSumOfMissions) {
  const auto env = small_env();
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 12), 3);
  const auto c = run_campaign(plan, {fleetsim::SimConfig{}}, env, 4);
  std::int64_t sum = 0, per_wp = 0;
  for (const auto& m : c.report.missions) sum += m.samples;
  for (const auto& w : c.report.per_waypoint) per_wp += w.samples;
  EXPECT_EQ(static_cast<std::int64_t>(c.samples.size()), sum);
  EXPECT_EQ(c.report.total_samples, sum);
  EXPECT_EQ(per_wp, sum);
  // Per-UAV seq order is preserved.
  for (std::size_t i = 1; i < c.samples.size(); ++i) {
    if (c.samples[i].uav_id == c.samples[i - 1].uav_id) {
      EXPECT_GT(c.samples[i].seq, c.samples[i - 1].seq);
    }
  }
}

TEST(Campaign, AbortOfFirstUavDoesNotStopSecond) {
  const auto env = small_env();
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 72), 2, 1);
  fleetsim::SimConfig weak;
  weak.battery.capacity_j = 1200.0;
  const auto c = run_campaign(plan, {weak, fleetsim::SimConfig{}}, env, 5);
  ASSERT_EQ(c.report.missions.size(), 2u);
  EXPECT_TRUE(c.report.missions[0].aborted);
  EXPECT_FALSE(c.report.missions[1].aborted);
  const auto& b = plan.per_uav[1];
  const auto alone =
      fleetsim::run_mission(b.uav_id, b.start_position, b.waypoints, fleetsim::SimConfig{}, env, mission_seed(5, 1));
  EXPECT_EQ(c.report.missions[1].samples, alone.report.samples);
  EXPECT_EQ(c.report.missions[1].scans_completed, 36);
}

TEST(Campaign, DefaultExperimentWithinFlightTime) {
  const auto env = small_env();
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 72), 2, 1);
  const auto c = run_campaign(plan, {fleetsim::SimConfig{}}, env, 1);
  ASSERT_EQ(c.report.missions.size(), 2u);
  for (const auto& m : c.report.missions) EXPECT_LE(m.active_time_ms, 7 * 60 * 1000);
}

TEST(Campaign, PerWaypointCsvHeader) {
  const auto env = small_env();
  const auto plan = partition_plan(plan_waypoints(Volume::reference(), 2), 1);
  const auto csv = per_waypoint_csv(run_campaign(plan, {fleetsim::SimConfig{}}, env, 1).report);
  EXPECT_EQ(csv.rfind("uav_id,waypoint,x,y,z,samples\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Naming, UavNames) {
  EXPECT_EQ(uav_name(0), "A");
  EXPECT_EQ(uav_name(25), "Z");
  EXPECT_EQ(uav_name(26), "U27");
}
