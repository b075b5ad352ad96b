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

constexpr double kTransitRatio = 1.3;
constexpr double kScanExtraRatio = 0.15;

template <typename T>
void read_opt(const json& j, const char* key, T& field) {
  if (auto it = j.find(key); it != j.end()) field = it->get<T>();
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Idle: return "Idle";
    case Mode::Takeoff: return "Takeoff";
    case Mode::Transit: return "Transit";
    case Mode::PositionHold: return "PositionHold";
    case Mode::Scanning: return "Scanning";
    case Mode::Landing: return "Landing";
    case Mode::Depleted: return "Depleted";
    case Mode::EmergencyShutdown: return "EmergencyShutdown";
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::TakeoffStarted: return "takeoff_started";
    case EventKind::TakeoffComplete: return "takeoff_complete";
    case EventKind::TransitStarted: return "transit_started";
    case EventKind::WaypointReached: return "waypoint_reached";
    case EventKind::HoverStarted: return "hover_started";
    case EventKind::RadioDown: return "radio_down";
    case EventKind::ScanStarted: return "scan_started";
    case EventKind::ScanPerformed: return "scan_performed";
    case EventKind::BufferOverflow: return "buffer_overflow";
    case EventKind::RadioUp: return "radio_up";
    case EventKind::SamplesFlushed: return "samples_flushed";
    case EventKind::ScanComplete: return "scan_complete";
    case EventKind::Stabilize: return "stabilize";
    case EventKind::EmergencyShutdown: return "emergency_shutdown";
    case EventKind::ReserveReached: return "reserve_reached";
    case EventKind::LandingStarted: return "landing_started";
    case EventKind::Landed: return "landed";
    case EventKind::Depleted: return "depleted";
  }
  return "?";
}

void validate(const ProtocolParams& p) {
  if (!(p.internal_setpoint_period_ms > 0 && p.internal_setpoint_period_ms < p.stabilize_timeout_ms &&
        p.stabilize_timeout_ms < p.watchdog_timeout_ms)) {
    throw InvalidArgument("protocol timers must satisfy setpoint period < stabilize timeout < watchdog timeout");
  }
  if (p.tx_queue_capacity == 0) throw InvalidArgument("tx queue capacity must be positive");
  if (p.scan_duration_ms <= 0 || p.takeoff_ms <= 0 || p.landing_ms <= 0) {
    throw InvalidArgument("scan, takeoff and landing durations must be positive");
  }
  if (p.tick_ms <= 0 || p.internal_setpoint_period_ms % p.tick_ms != 0 || p.stabilize_timeout_ms % p.tick_ms != 0 ||
      p.watchdog_timeout_ms % p.tick_ms != 0) {
    throw InvalidArgument("tick must divide every protocol period");
  }
  if (!(p.max_speed_mps > 0.0)) throw InvalidArgument("max speed must be positive");
  if (p.radio_freq_mhz < 2400 || p.radio_freq_mhz > 2525) throw InvalidArgument("radio frequency out of range");
}

double profile_energy_units(const EnduranceProfile& profile, std::int64_t until_ms) {
  double units = 0.0;
  const std::int64_t takeoff = std::min(until_ms, profile.takeoff_ms);
  units += kTransitRatio * static_cast<double>(takeoff) / 1000.0;
  std::int64_t t = profile.takeoff_ms;
  while (t < until_ms) {
    const std::int64_t hold = std::min(profile.scan_interval_ms, until_ms - t);
    units += static_cast<double>(hold) / 1000.0;
    t += hold;
    if (t >= until_ms) break;
    const std::int64_t scan = std::min(profile.scan_duration_ms, until_ms - t);
    units += (1.0 + kScanExtraRatio) * static_cast<double>(scan) / 1000.0;
    t += scan;
  }
  return units;
}

BatteryModel BatteryModel::calibrated(const EnduranceProfile& profile, double capacity_j, double reserve_fraction) {
  BatteryModel b;
  b.capacity_j = capacity_j;
  b.reserve_fraction = reserve_fraction;
  b.hover_w = b.usable_j() / profile_energy_units(profile, profile.target_depletion_ms);
  b.transit_w = kTransitRatio * b.hover_w;
  b.scan_extra_w = kScanExtraRatio * b.hover_w;
  return b;
}

void validate(const BatteryModel& b) {
  if (!(b.capacity_j > 0.0)) throw InvalidArgument("battery capacity must be positive");
  if (!(b.hover_w > 0.0 && b.transit_w >= b.hover_w)) throw InvalidArgument("battery requires transit_w >= hover_w > 0");
  if (!(b.scan_extra_w >= 0.0)) throw InvalidArgument("scan extra draw must be >= 0");
  if (!(b.reserve_fraction >= 0.0 && b.reserve_fraction < 1.0)) throw InvalidArgument("reserve fraction out of range");
}

void validate(const LocalizationModel& m) {
  if (m.anchor_count < 4) {
    throw InvalidArgument("at least four localization anchors are required, got " + std::to_string(m.anchor_count));
  }
  if (!(m.sigma_hover_m >= 0.0 && m.sigma_hover_m <= m.sigma_transit_m)) {
    throw InvalidArgument("localization requires 0 <= sigma_hover <= sigma_transit");
  }
}

Vec3 localize(const UavState& uav, const LocalizationModel& model, core::Rng& rng) {
  validate(model);
  const bool hovering = uav.mode == Mode::PositionHold || uav.mode == Mode::Scanning || uav.mode == Mode::Idle;
  double sigma = hovering ? model.sigma_hover_m : model.sigma_transit_m;
  if (model.anchor_count < 6) sigma *= 1.5;
  const double nx = rng.normal();
  const double ny = rng.normal();
  const double nz = rng.normal();
  return uav.true_position + Vec3{sigma * nx, sigma * ny, sigma * nz};
}

WatchdogVerdict watchdog_check(const UavState& uav, std::int64_t now_ms, const ProtocolParams& protocol) {
  const std::int64_t gap = now_ms - uav.last_setpoint_ms;
  if (gap > protocol.watchdog_timeout_ms) return WatchdogVerdict::EmergencyShutdown;
  if (gap > protocol.stabilize_timeout_ms) return WatchdogVerdict::Stabilize;
  return WatchdogVerdict::None;
}

json to_json(const ProtocolParams& p) {
  return json{{"watchdog_timeout_ms", p.watchdog_timeout_ms},
              {"stabilize_timeout_ms", p.stabilize_timeout_ms},
              {"internal_setpoint_period_ms", p.internal_setpoint_period_ms},
              {"tx_queue_capacity", p.tx_queue_capacity},
              {"scan_duration_ms", p.scan_duration_ms},
              {"internal_feedback", p.internal_feedback},
              {"radio_blackout", p.radio_blackout},
              {"radio_freq_mhz", p.radio_freq_mhz},
              {"takeoff_ms", p.takeoff_ms},
              {"landing_ms", p.landing_ms},
              {"tick_ms", p.tick_ms},
              {"max_speed_mps", p.max_speed_mps}};
}

ProtocolParams protocol_from_json(const json& j) {
  ProtocolParams p;
  read_opt(j, "watchdog_timeout_ms", p.watchdog_timeout_ms);
  read_opt(j, "stabilize_timeout_ms", p.stabilize_timeout_ms);
  read_opt(j, "internal_setpoint_period_ms", p.internal_setpoint_period_ms);
  read_opt(j, "tx_queue_capacity", p.tx_queue_capacity);
  read_opt(j, "scan_duration_ms", p.scan_duration_ms);
  read_opt(j, "internal_feedback", p.internal_feedback);
  read_opt(j, "radio_blackout", p.radio_blackout);
  read_opt(j, "radio_freq_mhz", p.radio_freq_mhz);
  read_opt(j, "takeoff_ms", p.takeoff_ms);
  read_opt(j, "landing_ms", p.landing_ms);
  read_opt(j, "tick_ms", p.tick_ms);
  read_opt(j, "max_speed_mps", p.max_speed_mps);
  validate(p);
  return p;
}

json to_json(const BatteryModel& b) {
  return json{{"capacity_j", b.capacity_j},
              {"hover_w", b.hover_w},
              {"transit_w", b.transit_w},
              {"scan_extra_w", b.scan_extra_w},
              {"reserve_fraction", b.reserve_fraction}};
}

BatteryModel battery_from_json(const json& j) {
  BatteryModel b = BatteryModel::calibrated();
  read_opt(j, "capacity_j", b.capacity_j);
  read_opt(j, "hover_w", b.hover_w);
  read_opt(j, "transit_w", b.transit_w);
  read_opt(j, "scan_extra_w", b.scan_extra_w);
  read_opt(j, "reserve_fraction", b.reserve_fraction);
  validate(b);
  return b;
}

json to_json(const LocalizationModel& m) {
  return json{{"mode", m.mode == LocalizationMode::TWR ? "TWR" : "TDoA"},
              {"sigma_hover_m", m.sigma_hover_m},
              {"sigma_transit_m", m.sigma_transit_m},
              {"anchor_count", m.anchor_count}};
}

LocalizationModel localization_from_json(const json& j) {
  LocalizationModel m;
  if (auto it = j.find("mode"); it != j.end()) {
    const auto s = it->get<std::string>();
    if (s == "TWR") {
      m.mode = LocalizationMode::TWR;
    } else if (s == "TDoA") {
      m.mode = LocalizationMode::TDoA;
    } else {
      throw ParseError("localization mode must be TWR or TDoA");
    }
  }
  read_opt(j, "sigma_hover_m", m.sigma_hover_m);
  read_opt(j, "sigma_transit_m", m.sigma_transit_m);
  read_opt(j, "anchor_count", m.anchor_count);
  validate(m);
  return m;
}

}  // namespace remforge::fleetsim
