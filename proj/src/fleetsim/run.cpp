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
#include <cmath>

#include "remforge/core/error.hpp"
#include "remforge/fleetsim.hpp"

namespace remforge::fleetsim {

using nlohmann::json;

namespace {

// Upper bound on engine ticks for one run (about 28 h of sim time at 100 ms).
constexpr std::int64_t kMaxTicks = 1'000'000;

std::int64_t to_ms(double seconds) { return static_cast<std::int64_t>(std::llround(seconds * 1000.0)); }

}  // namespace

json to_json(const MissionReport& r) {
  return json{{"uav_id", r.uav_id},
              {"scans_completed", r.scans_completed},
              {"active_time_ms", r.active_time_ms},
              {"samples", r.samples},
              {"aborted", r.aborted},
              {"abort_reason", r.abort_reason},
              {"waypoints_planned", r.waypoints_planned},
              {"unvisited", r.unvisited},
              {"per_waypoint_samples", r.per_waypoint},
              {"battery_remaining_j", r.battery_remaining_j}};
}

MissionReport mission_report_from_json(const json& j) {
  MissionReport r;
  r.uav_id = j.at("uav_id").get<std::string>();
  r.scans_completed = j.at("scans_completed").get<int>();
  r.active_time_ms = j.at("active_time_ms").get<std::int64_t>();
  r.samples = j.at("samples").get<std::int64_t>();
  r.aborted = j.at("aborted").get<bool>();
  r.abort_reason = j.at("abort_reason").get<std::string>();
  r.waypoints_planned = j.value("waypoints_planned", 0);
  r.unvisited = j.value("unvisited", std::vector<int>{});
  r.per_waypoint = j.value("per_waypoint_samples", std::vector<std::int64_t>{});
  r.battery_remaining_j = j.value("battery_remaining_j", 0.0);
  return r;
}

json to_json(const EnduranceReport& r) {
  return json{{"scans_completed", r.scans_completed},
              {"depletion_ms", r.depletion_ms},
              {"depletion_s", static_cast<double>(r.depletion_ms) / 1000.0},
              {"hover_w", r.hover_w},
              {"capacity_j", r.capacity_j}};
}

MissionResult run_mission(const std::string& uav_id, Vec3 start, const std::vector<core::Waypoint>& waypoints,
                          const SimConfig& config, const radioenv::RadioEnvironment& env, std::uint64_t seed) {
  if (waypoints.empty()) throw InvalidArgument("mission needs at least one waypoint");
  validate(config.protocol);
  validate(config.battery);
  validate(config.localization);

  const auto& proto = config.protocol;
  const Vec3 lift_target{start.x, start.y, waypoints.front().position.z};
  {
    // Reaching the first waypoint and landing again must fit in the usable energy.
    const double hop = core::euclidean_distance(lift_target, waypoints.front().position);
    const double budget_s = waypoints.front().transit_budget_s;
    const double transit_s = hop > proto.max_speed_mps * budget_s ? hop / proto.max_speed_mps : budget_s;
    const double seconds = static_cast<double>(proto.takeoff_ms + proto.landing_ms) / 1000.0 + transit_s;
    if (seconds * config.battery.transit_w > config.battery.usable_j()) {
      throw MissionInfeasible("UAV " + uav_id + " cannot reach its first waypoint on a full battery");
    }
  }

  std::vector<Task> tasks;
  tasks.push_back({TaskKind::Takeoff, lift_target, proto.takeoff_ms, -1});
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const auto& wp = waypoints[i];
    const int idx = static_cast<int>(i);
    tasks.push_back({TaskKind::Transit, wp.position, to_ms(wp.transit_budget_s), idx});
    tasks.push_back({TaskKind::Scan, wp.position, to_ms(wp.dwell_scan_s), idx});
  }
  tasks.push_back({TaskKind::Land, {}, proto.landing_ms, -1});

  Simulator sim(uav_id, start, config, &env, seed);
  sim.begin(std::move(tasks));
  std::int64_t ticks = 0;
  while (!sim.finished()) {
    if (++ticks > kMaxTicks) throw Error("mission of UAV " + uav_id + " did not terminate");
    sim.step(proto.tick_ms);
  }

  MissionResult result;
  MissionReport& r = result.report;
  r.uav_id = uav_id;
  r.scans_completed = sim.scans_completed();
  r.active_time_ms = sim.active_end_ms().value_or(sim.now()) - sim.active_start_ms().value_or(0);
  r.samples = static_cast<std::int64_t>(sim.received().size());
  r.aborted = sim.aborted();
  r.abort_reason = sim.abort_reason();
  r.waypoints_planned = static_cast<int>(waypoints.size());
  r.per_waypoint.assign(waypoints.size(), 0);
  std::vector<bool> visited(waypoints.size(), false);
  for (const auto& e : sim.trace()) {
    if (e.waypoint < 0) continue;
    const auto w = static_cast<std::size_t>(e.waypoint);
    if (e.kind == EventKind::SamplesFlushed) r.per_waypoint[w] += e.count;
    if (e.kind == EventKind::ScanComplete) visited[w] = true;
  }
  for (std::size_t i = 0; i < visited.size(); ++i) {
    if (!visited[i]) r.unvisited.push_back(static_cast<int>(i));
  }
  r.battery_remaining_j = sim.state().battery_j;

  result.samples = sim.received();
  result.events = sim.trace();
  result.deliveries = sim.deliveries();
  result.blackout_windows = sim.blackout_windows();
  result.battery_trace = sim.battery_trace();
  return result;
}

EnduranceReport run_endurance(const SimConfig& config, const EnduranceProfile& profile,
                              const radioenv::RadioEnvironment& env, Vec3 hover_point, std::uint64_t seed) {
  if (profile.scan_interval_ms <= 0 || profile.scan_duration_ms <= 0 || profile.takeoff_ms <= 0) {
    throw InvalidArgument("endurance profile durations must be positive");
  }
  Simulator sim("endurance", {hover_point.x, hover_point.y, config.ground_z}, config, &env, seed);

  // Enough cycles to outlast any battery the calibration can produce.
  const std::int64_t cycle = profile.scan_interval_ms + profile.scan_duration_ms;
  const std::int64_t cycles = 4 * (profile.target_depletion_ms / cycle + 1) + 16;
  std::vector<Task> tasks;
  tasks.push_back({TaskKind::Takeoff, hover_point, profile.takeoff_ms, -1});
  for (std::int64_t i = 0; i < cycles; ++i) {
    tasks.push_back({TaskKind::Hover, hover_point, profile.scan_interval_ms, static_cast<int>(i)});
    tasks.push_back({TaskKind::Scan, hover_point, profile.scan_duration_ms, static_cast<int>(i)});
  }
  tasks.push_back({TaskKind::Land, {}, config.protocol.landing_ms, -1});
  sim.begin(std::move(tasks));

  std::int64_t ticks = 0;
  int scans_at_reserve = 0;
  while (!sim.finished() && !sim.reserve_reached_ms()) {
    if (++ticks > kMaxTicks) throw Error("endurance run did not terminate");
    sim.step(config.protocol.tick_ms);
    scans_at_reserve = sim.scans_completed();
  }
  EnduranceReport r;
  r.scans_completed = scans_at_reserve;
  r.depletion_ms = sim.reserve_reached_ms().value_or(sim.now());
  r.hover_w = config.battery.hover_w;
  r.capacity_j = config.battery.capacity_j;
  return r;
}

}  // namespace remforge::fleetsim
