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

#include <sstream>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/mission.hpp"

namespace remforge::mission {

using nlohmann::json;

std::uint64_t mission_seed(std::uint64_t campaign_seed, std::size_t index) {
  return core::mix64(campaign_seed ^ core::mix64(0x6D697373696F6EULL + index));
}

CampaignResult run_campaign(const MissionPlan& plan, const std::vector<fleetsim::SimConfig>& fleet,
                            const radioenv::RadioEnvironment& env, std::uint64_t seed) {
  validate(plan);
  if (fleet.empty()) throw InvalidArgument("campaign needs at least one fleet config");
  if (fleet.size() != 1 && fleet.size() != plan.per_uav.size()) {
    throw InvalidArgument("fleet config count must be 1 or match the number of UAVs");
  }
  CampaignResult result;
  for (std::size_t i = 0; i < plan.per_uav.size(); ++i) {
    const auto& up = plan.per_uav[i];
    if (up.waypoints.empty()) continue;
    const auto& config = fleet.size() == 1 ? fleet.front() : fleet[i];
    auto mission = fleetsim::run_mission(up.uav_id, up.start_position, up.waypoints, config, env, mission_seed(seed, i));

    for (std::size_t w = 0; w < up.waypoints.size(); ++w) {
      result.report.per_waypoint.push_back(
          {up.uav_id, static_cast<int>(w), up.waypoints[w].position, mission.report.per_waypoint[w]});
    }
    result.report.total_samples += mission.report.samples;
    result.report.missions.push_back(mission.report);
    result.samples.insert(result.samples.end(), mission.samples.begin(), mission.samples.end());
    result.missions.push_back(std::move(mission));
  }
  return result;
}

json to_json(const CampaignReport& r) {
  json missions = json::array();
  for (const auto& m : r.missions) missions.push_back(fleetsim::to_json(m));
  return json{{"total_samples", r.total_samples}, {"missions", missions}};
}

std::string per_waypoint_csv(const CampaignReport& r) {
  std::ostringstream out;
  out << "uav_id,waypoint,x,y,z,samples\n";
  for (const auto& w : r.per_waypoint) {
    out << w.uav_id << ',' << w.waypoint << ',' << core::format_double(w.position.x) << ','
        << core::format_double(w.position.y) << ',' << core::format_double(w.position.z) << ',' << w.samples << '\n';
  }
  return out.str();
}

}  // namespace remforge::mission
