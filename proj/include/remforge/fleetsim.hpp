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
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "remforge/core/geometry.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/core/sample.hpp"
#include "remforge/radioenv.hpp"

namespace remforge::fleetsim {

using core::BeaconSample;
using core::Vec3;

enum class Mode { Idle, Takeoff, Transit, PositionHold, Scanning, Landing, Depleted, EmergencyShutdown };
enum class RadioLink { Up, Down };

std::string_view to_string(Mode m);

/// Timing rules of the base-station <-> UAV link and the on-board commander.
struct ProtocolParams {
  std::int64_t watchdog_timeout_ms = 10000;
  std::int64_t stabilize_timeout_ms = 500;
  std::int64_t internal_setpoint_period_ms = 100;
  std::size_t tx_queue_capacity = 128;
  std::int64_t scan_duration_ms = 3000;
  /// On-board task feeding the hold position back to the commander while the
  /// radio is down.
  bool internal_feedback = true;
  /// Shut the control radio down for the duration of each scan.
  bool radio_blackout = true;
  /// Control radio frequency, used only when the blackout is disabled.
  int radio_freq_mhz = 2480;
  std::int64_t takeoff_ms = 8000;
  std::int64_t landing_ms = 8000;
  /// Engine tick.
  std::int64_t tick_ms = 100;
  /// Transit speed cap.
  double max_speed_mps = 1.0;

  friend bool operator==(const ProtocolParams&, const ProtocolParams&) = default;
};

void validate(const ProtocolParams& p);

/// Hover-and-scan pattern used to calibrate the battery: take off, then
/// repeat (hold for `scan_interval_ms`, scan for `scan_duration_ms`).
struct EnduranceProfile {
  std::int64_t takeoff_ms = 8000;
  std::int64_t scan_interval_ms = 8000;
  std::int64_t scan_duration_ms = 2000;
  std::int64_t target_depletion_ms = 372000;  // 6 min 12 s
};

/// Energy-bucket battery.
struct BatteryModel {
  double capacity_j = 3330.0;  // 250 mAh at 3.7 V
  double hover_w = 1.0;
  double transit_w = 1.3;
  double scan_extra_w = 0.15;
  double reserve_fraction = 0.05;

  double reserve_j() const { return capacity_j * reserve_fraction; }
  double usable_j() const { return capacity_j - reserve_j(); }

  /// Solves for hover power so that `profile` reaches the reserve exactly at
  /// its target time; transit and scan draws scale with hover power
  /// (1.3x and +0.15x).
  static BatteryModel calibrated(const EnduranceProfile& profile = {}, double capacity_j = 3330.0,
                                 double reserve_fraction = 0.05);

  friend bool operator==(const BatteryModel&, const BatteryModel&) = default;
};

void validate(const BatteryModel& b);

/// Energy of `profile` from t = 0 to `until_ms`, in units of hover-watt-seconds.
double profile_energy_units(const EnduranceProfile& profile, std::int64_t until_ms);

enum class LocalizationMode { TWR, TDoA };

struct LocalizationModel {
  LocalizationMode mode = LocalizationMode::TDoA;
  double sigma_hover_m = 0.09;
  double sigma_transit_m = 0.20;
  int anchor_count = 8;

  friend bool operator==(const LocalizationModel&, const LocalizationModel&) = default;
};

void validate(const LocalizationModel& m);

struct UavState {
  std::string uav_id;
  Vec3 true_position;
  Mode mode = Mode::Idle;
  double battery_j = 0.0;
  RadioLink radio_link = RadioLink::Up;
  std::deque<BeaconSample> scan_buffer;
  std::int64_t last_setpoint_ms = 0;
  std::int64_t seq_counter = 0;
  /// Attitude zeroed after the stabilize timeout; position-hold drift is frozen.
  bool stabilized = false;
};

/// Noisy position estimate: isotropic Gaussian around the true position,
/// hover or transit sigma by flight mode, inflated 1.5x with fewer than six
/// anchors. Throws InvalidArgument with fewer than four anchors.
Vec3 localize(const UavState& uav, const LocalizationModel& model, core::Rng& rng);

enum class WatchdogVerdict { None, Stabilize, EmergencyShutdown };

/// Shutdown iff the setpoint gap exceeds the watchdog timeout; attitude
/// stabilization iff it exceeds the stabilize timeout.
WatchdogVerdict watchdog_check(const UavState& uav, std::int64_t now_ms, const ProtocolParams& protocol);

enum class EventKind {
  TakeoffStarted,
  TakeoffComplete,
  TransitStarted,
  WaypointReached,
  HoverStarted,
  RadioDown,
  ScanStarted,
  ScanPerformed,
  BufferOverflow,
  RadioUp,
  SamplesFlushed,
  ScanComplete,
  Stabilize,
  EmergencyShutdown,
  ReserveReached,
  LandingStarted,
  Landed,
  Depleted,
};

std::string_view to_string(EventKind k);

struct Event {
  std::int64_t t_ms = 0;
  std::string uav_id;
  EventKind kind = EventKind::TakeoffStarted;
  int waypoint = -1;
  std::int64_t count = 0;
  std::string detail;
};

/// A sample arriving at the base station.
struct Delivery {
  std::int64_t t_ms = 0;
  std::string uav_id;
  std::int64_t seq = 0;
};

/// Half-open [down_ms, up_ms) interval with the control radio off.
struct BlackoutWindow {
  std::int64_t down_ms = 0;
  std::int64_t up_ms = 0;
};

struct SimConfig {
  ProtocolParams protocol;
  BatteryModel battery = BatteryModel::calibrated();
  LocalizationModel localization;
  radioenv::InterferenceModel interference;  // frequency taken from protocol
  double hold_drift_sigma_m = 0.03;
  std::int64_t hold_drift_tau_ms = 1000;
  double ground_z = 0.0;
};

enum class TaskKind { Takeoff, Transit, Hover, Scan, Land };

struct Task {
  TaskKind kind = TaskKind::Hover;
  Vec3 target;
  std::int64_t duration_ms = 0;  // transit: time budget
  int waypoint = -1;
};

/// Tick-driven simulation of one UAV. Deterministic for a given seed.
class Simulator {
 public:
  Simulator(std::string uav_id, Vec3 start, SimConfig config, const radioenv::RadioEnvironment* env,
            std::uint64_t seed);

  /// Queue tasks and start the first one at the current time.
  void begin(std::vector<Task> tasks);
  /// Put the UAV airborne in position hold at `p` without a takeoff.
  void start_hover(Vec3 p);

  /// Advance by `dt_ms`; returns the events fired during the step.
  std::vector<Event> step(std::int64_t dt_ms);

  /// Runs one complete scan at the current hold position and returns the
  /// samples flushed to the base station. Requires PositionHold with the link up.
  std::vector<BeaconSample> execute_scan_sequence(const core::Waypoint& waypoint);

  bool finished() const;
  std::int64_t now() const { return now_; }
  const UavState& state() const { return uav_; }
  const SimConfig& config() const { return config_; }

  const std::vector<Event>& trace() const { return trace_; }
  const std::vector<BeaconSample>& received() const { return received_; }
  const std::vector<Delivery>& deliveries() const { return deliveries_; }
  const std::vector<BlackoutWindow>& blackout_windows() const { return windows_; }
  /// (t_ms, battery_j) after every step.
  const std::vector<std::pair<std::int64_t, double>>& battery_trace() const { return battery_trace_; }

  int scans_completed() const { return scans_completed_; }
  std::optional<std::int64_t> reserve_reached_ms() const { return reserve_ms_; }
  std::optional<std::int64_t> active_start_ms() const { return active_start_; }
  std::optional<std::int64_t> active_end_ms() const { return active_end_; }
  bool aborted() const { return !abort_reason_.empty(); }
  const std::string& abort_reason() const { return abort_reason_; }

 private:
  double power_w(Mode m) const;
  void emit(std::vector<Event>& out, EventKind kind, int waypoint = -1, std::int64_t count = 0,
            std::string detail = {});
  void start_task(std::vector<Event>& out);
  void finish_task(std::vector<Event>& out);
  void update_kinematics(std::int64_t dt_ms);
  void scan_midpoint(std::vector<Event>& out);
  void end_scan(std::vector<Event>& out, bool completed);
  void flush_buffer(std::vector<Event>& out);
  void abort_to_landing(std::vector<Event>& out, const std::string& reason);
  std::int64_t round_up_to_tick(std::int64_t ms) const;

  SimConfig config_;
  const radioenv::RadioEnvironment* env_;
  UavState uav_;
  core::Rng drift_rng_;
  core::Rng loc_rng_;
  core::Rng scan_rng_;

  std::int64_t now_ = 0;
  std::deque<Task> tasks_;
  std::optional<Task> current_;
  std::int64_t task_start_ms_ = 0;
  std::int64_t task_end_ms_ = 0;
  std::int64_t scan_mid_ms_ = 0;
  bool scan_done_midpoint_ = false;
  Vec3 segment_from_;
  Vec3 hold_anchor_;
  Vec3 drift_offset_;
  bool done_ = false;

  std::vector<Event> trace_;
  std::vector<BeaconSample> received_;
  std::vector<Delivery> deliveries_;
  std::vector<BlackoutWindow> windows_;
  std::vector<std::pair<std::int64_t, double>> battery_trace_;
  int scans_completed_ = 0;
  std::optional<std::int64_t> reserve_ms_;
  std::optional<std::int64_t> active_start_;
  std::optional<std::int64_t> active_end_;
  std::string abort_reason_;
};

struct MissionReport {
  std::string uav_id;
  int scans_completed = 0;
  std::int64_t active_time_ms = 0;
  std::int64_t samples = 0;
  bool aborted = false;
  std::string abort_reason;
  int waypoints_planned = 0;
  std::vector<int> unvisited;              // waypoint indices never scanned
  std::vector<std::int64_t> per_waypoint;  // samples per planned waypoint
  double battery_remaining_j = 0.0;
};

nlohmann::json to_json(const MissionReport& r);
MissionReport mission_report_from_json(const nlohmann::json& j);

struct MissionResult {
  MissionReport report;
  std::vector<BeaconSample> samples;
  std::vector<Event> events;
  std::vector<Delivery> deliveries;
  std::vector<BlackoutWindow> blackout_windows;
  std::vector<std::pair<std::int64_t, double>> battery_trace;
};

/// Takeoff -> for each waypoint {transit, hold, scan sequence} -> landing.
/// Aborts to landing at the battery reserve; throws MissionInfeasible if the
/// first waypoint cannot be reached and left on a full battery.
MissionResult run_mission(const std::string& uav_id, Vec3 start, const std::vector<core::Waypoint>& waypoints,
                          const SimConfig& config, const radioenv::RadioEnvironment& env, std::uint64_t seed);

struct EnduranceReport {
  int scans_completed = 0;
  std::int64_t depletion_ms = 0;  // time the reserve was reached
  double hover_w = 0.0;
  double capacity_j = 0.0;
};

nlohmann::json to_json(const EnduranceReport& r);

/// Hover-and-scan endurance run until the battery reserve is reached.
EnduranceReport run_endurance(const SimConfig& config, const EnduranceProfile& profile,
                              const radioenv::RadioEnvironment& env, Vec3 hover_point, std::uint64_t seed);

nlohmann::json to_json(const ProtocolParams& p);
ProtocolParams protocol_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BatteryModel& b);
BatteryModel battery_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LocalizationModel& m);
LocalizationModel localization_from_json(const nlohmann::json& j);

}  // namespace remforge::fleetsim
