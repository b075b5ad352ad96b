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
#include "remforge/core/sample.hpp"
#include "remforge/fleetsim.hpp"
#include "remforge/radioenv.hpp"

namespace remforge::mission {

using core::Vec3;
using core::Volume;
using core::Waypoint;

inline constexpr double kDefaultMarginM = 0.35;

struct LatticeShape {
  int nx = 1;
  int ny = 1;
  int nz = 1;

  int size() const { return nx * ny * nz; }
  friend bool operator==(LatticeShape, LatticeShape) = default;
};

/// Spacing anisotropy (largest / smallest cell edge) of a cell-centered
/// lattice over the inset box.
double lattice_anisotropy(const Volume& volume, double margin_m, LatticeShape shape);

/// Lattice with at least `count` cells minimizing anisotropy x (cells / count).
LatticeShape choose_lattice(const Volume& volume, int count, double margin_m);

/// `count` waypoints on the cell centers of the chosen lattice inside the box
/// inset by `margin_m`, in boustrophedon order.
std::vector<Waypoint> plan_waypoints(const Volume& volume, int count, double margin_m = kDefaultMarginM,
                                     double dwell_scan_s = 3.0, double transit_budget_s = 4.0);

/// Reorders lattice points layer by layer (z), row by row (y), alternating
/// the row and column directions so consecutive points stay adjacent.
std::vector<Waypoint> boustrophedon_order(std::vector<Waypoint> points);
/// Plain raster order (z, then y, then x ascending).
std::vector<Waypoint> raster_order(std::vector<Waypoint> points);

double path_length(const std::vector<Waypoint>& points);

struct UavPlan {
  std::string uav_id;
  std::vector<Waypoint> waypoints;
  std::string radio_address;
  Vec3 start_position;
  double yaw_deg = 0.0;
};

struct MissionPlan {
  std::vector<UavPlan> per_uav;

  std::size_t waypoint_count() const;
};

/// Checks that waypoint sets are pairwise disjoint.
void validate(const MissionPlan& plan);

/// UAV identifiers "A", "B", ... ("U27" onwards past the alphabet).
std::string uav_name(int index);

/// Contiguous near-equal blocks along `axis` (default: the longest axis of the
/// waypoints' bounding box), each block boustrophedon-ordered.
MissionPlan partition_plan(const std::vector<Waypoint>& waypoints, int uav_count, std::optional<int> axis = {},
                           double ground_z = 0.0);

nlohmann::json to_json(const MissionPlan& plan);
MissionPlan plan_from_json(const nlohmann::json& j);

struct WaypointSamples {
  std::string uav_id;
  int waypoint = 0;
  Vec3 position;
  std::int64_t samples = 0;
};

struct CampaignReport {
  std::vector<fleetsim::MissionReport> missions;
  std::vector<WaypointSamples> per_waypoint;
  std::int64_t total_samples = 0;
};

nlohmann::json to_json(const CampaignReport& r);
/// CSV: uav_id,waypoint,x,y,z,samples
std::string per_waypoint_csv(const CampaignReport& r);

struct CampaignResult {
  CampaignReport report;
  std::vector<core::BeaconSample> samples;  // UAV by UAV, each in seq order
  std::vector<fleetsim::MissionResult> missions;
};

/// Flies every UAV's mission one after another. `fleet` holds one config per
/// UAV, or a single config shared by all.
CampaignResult run_campaign(const MissionPlan& plan, const std::vector<fleetsim::SimConfig>& fleet,
                            const radioenv::RadioEnvironment& env, std::uint64_t seed);

/// Seed handed to the mission of the UAV at `index`.
std::uint64_t mission_seed(std::uint64_t campaign_seed, std::size_t index);

}  // namespace remforge::mission
