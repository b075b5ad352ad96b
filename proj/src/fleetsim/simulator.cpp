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
#include <stdexcept>

#include "remforge/core/error.hpp"
#include "remforge/fleetsim.hpp"

namespace remforge::fleetsim {

namespace {

// Battery comparisons tolerate accumulated rounding from per-tick drains.
constexpr double kEnergyEpsJ = 1e-6;

bool airborne(Mode m) {
  return m == Mode::Takeoff || m == Mode::Transit || m == Mode::PositionHold || m == Mode::Scanning ||
         m == Mode::Landing;
}

}  // namespace

Simulator::Simulator(std::string uav_id, Vec3 start, SimConfig config, const radioenv::RadioEnvironment* env,
                     std::uint64_t seed)
    : config_(std::move(config)),
      env_(env),
      drift_rng_(core::Rng::derive(seed, "drift")),
      loc_rng_(core::Rng::derive(seed, "localize")),
      scan_rng_(core::Rng::derive(seed, "scan")) {
  validate(config_.protocol);
  validate(config_.battery);
  validate(config_.localization);
  if (env_ == nullptr) throw InvalidArgument("simulator requires a radio environment");
  uav_.uav_id = std::move(uav_id);
  uav_.true_position = start;
  uav_.battery_j = config_.battery.capacity_j;
  segment_from_ = start;
  hold_anchor_ = start;
}

void Simulator::begin(std::vector<Task> tasks) {
  if (uav_.mode != Mode::Idle || done_) throw InvalidArgument("begin() requires an idle, grounded UAV");
  tasks_.assign(tasks.begin(), tasks.end());
  active_start_ = now_;
  uav_.last_setpoint_ms = now_;
  std::vector<Event> out;
  start_task(out);
  trace_.insert(trace_.end(), out.begin(), out.end());
}

void Simulator::start_hover(Vec3 p) {
  if (done_) throw InvalidArgument("simulation already finished");
  uav_.true_position = p;
  uav_.mode = Mode::PositionHold;
  hold_anchor_ = p;
  drift_offset_ = {};
  uav_.last_setpoint_ms = now_;
  if (!active_start_) active_start_ = now_;
}

bool Simulator::finished() const {
  return done_ || (uav_.mode == Mode::Idle && !current_ && tasks_.empty());
}

double Simulator::power_w(Mode m) const {
  const auto& b = config_.battery;
  switch (m) {
    case Mode::Takeoff:
    case Mode::Transit:
    case Mode::Landing: return b.transit_w;
    case Mode::PositionHold: return b.hover_w;
    case Mode::Scanning: return b.hover_w + b.scan_extra_w;
    default: return 0.0;
  }
}

std::int64_t Simulator::round_up_to_tick(std::int64_t ms) const {
  const std::int64_t tick = config_.protocol.tick_ms;
  return std::max<std::int64_t>(tick, (ms + tick - 1) / tick * tick);
}

void Simulator::emit(std::vector<Event>& out, EventKind kind, int waypoint, std::int64_t count, std::string detail) {
  out.push_back({now_, uav_.uav_id, kind, waypoint, count, std::move(detail)});
}

std::vector<Event> Simulator::step(std::int64_t dt_ms) {
  const auto& proto = config_.protocol;
  if (dt_ms <= 0 || proto.internal_setpoint_period_ms % dt_ms != 0 || proto.stabilize_timeout_ms % dt_ms != 0 ||
      proto.watchdog_timeout_ms % dt_ms != 0) {
    throw InvalidArgument("step size must divide every protocol period");
  }
  std::vector<Event> out;
  if (done_ || (uav_.mode == Mode::Idle && !current_)) {
    now_ += dt_ms;
    return out;
  }

  const Mode mode_before = uav_.mode;
  now_ += dt_ms;

  uav_.battery_j = std::max(0.0, uav_.battery_j - power_w(mode_before) * static_cast<double>(dt_ms) / 1000.0);

  update_kinematics(dt_ms);

  if (current_ && current_->kind == TaskKind::Scan && !scan_done_midpoint_ && now_ >= scan_mid_ms_) {
    scan_midpoint(out);
  }
  while (current_ && now_ >= task_end_ms_) finish_task(out);
  if (!current_ && !tasks_.empty()) start_task(out);

  if (airborne(uav_.mode)) {
    if (uav_.radio_link == RadioLink::Up) {
      uav_.last_setpoint_ms = now_;
    } else if (uav_.mode == Mode::Scanning && proto.internal_feedback &&
               (now_ - task_start_ms_) % proto.internal_setpoint_period_ms == 0) {
      uav_.last_setpoint_ms = now_;
    }

    switch (watchdog_check(uav_, now_, proto)) {
      case WatchdogVerdict::EmergencyShutdown:
        uav_.mode = Mode::EmergencyShutdown;
        if (!windows_.empty() && windows_.back().up_ms < 0) windows_.back().up_ms = now_;
        uav_.scan_buffer.clear();
        tasks_.clear();
        current_.reset();
        done_ = true;
        active_end_ = now_;
        abort_reason_ = "watchdog";
        emit(out, EventKind::EmergencyShutdown, -1, 0,
             "no setpoint for " + std::to_string(now_ - uav_.last_setpoint_ms) + " ms");
        break;
      case WatchdogVerdict::Stabilize:
        if (!uav_.stabilized) {
          uav_.stabilized = true;
          emit(out, EventKind::Stabilize);
        }
        break;
      case WatchdogVerdict::None:
        uav_.stabilized = false;
        break;
    }
  }

  if (!done_ && !reserve_ms_ && uav_.battery_j <= config_.battery.reserve_j() + kEnergyEpsJ) {
    reserve_ms_ = now_;
    emit(out, EventKind::ReserveReached);
    if (!(current_ && current_->kind == TaskKind::Land)) abort_to_landing(out, "battery reserve");
  }
  if (!done_ && uav_.battery_j <= 0.0) {
    uav_.mode = Mode::Depleted;
    done_ = true;
    active_end_ = now_;
    if (abort_reason_.empty()) abort_reason_ = "battery depleted";
    emit(out, EventKind::Depleted);
  }

  battery_trace_.emplace_back(now_, uav_.battery_j);
  trace_.insert(trace_.end(), out.begin(), out.end());
  return out;
}

void Simulator::update_kinematics(std::int64_t dt_ms) {
  const bool holding = uav_.mode == Mode::PositionHold || uav_.mode == Mode::Scanning;
  if (holding) {
    if (!uav_.stabilized && config_.hold_drift_sigma_m > 0.0) {
      const double sigma = config_.hold_drift_sigma_m;
      const double a = std::exp(-static_cast<double>(dt_ms) / static_cast<double>(config_.hold_drift_tau_ms));
      const double b = std::sqrt(1.0 - a * a) * sigma;
      for (int axis = 0; axis < 3; ++axis) {
        const double v = a * drift_offset_[axis] + b * drift_rng_.normal();
        drift_offset_[axis] = std::clamp(v, -3.0 * sigma, 3.0 * sigma);
      }
    }
    uav_.true_position = hold_anchor_ + drift_offset_;
    return;
  }
  if (!current_) return;
  if (current_->kind == TaskKind::Takeoff || current_->kind == TaskKind::Transit ||
      current_->kind == TaskKind::Land) {
    const double span = static_cast<double>(task_end_ms_ - task_start_ms_);
    const double frac = std::clamp(static_cast<double>(now_ - task_start_ms_) / span, 0.0, 1.0);
    uav_.true_position = segment_from_ + frac * (current_->target - segment_from_);
  }
}

void Simulator::start_task(std::vector<Event>& out) {
  if (tasks_.empty()) {
    current_.reset();
    return;
  }
  current_ = tasks_.front();
  tasks_.pop_front();
  task_start_ms_ = now_;
  segment_from_ = uav_.true_position;
  Task& task = *current_;

  switch (task.kind) {
    case TaskKind::Takeoff:
      uav_.mode = Mode::Takeoff;
      task_end_ms_ = now_ + round_up_to_tick(task.duration_ms);
      emit(out, EventKind::TakeoffStarted);
      break;
    case TaskKind::Transit: {
      const double d = core::euclidean_distance(uav_.true_position, task.target);
      const double budget_s = static_cast<double>(task.duration_ms) / 1000.0;
      // Speed d / budget, capped; over-long hops take d / cap instead.
      std::int64_t duration = task.duration_ms;
      if (d > config_.protocol.max_speed_mps * budget_s) {
        duration = static_cast<std::int64_t>(std::ceil(d / config_.protocol.max_speed_mps * 1000.0));
      }
      uav_.mode = Mode::Transit;
      task_end_ms_ = now_ + round_up_to_tick(duration);
      emit(out, EventKind::TransitStarted, task.waypoint);
      break;
    }
    case TaskKind::Hover:
      if (uav_.mode != Mode::PositionHold) {
        uav_.mode = Mode::PositionHold;
        hold_anchor_ = uav_.true_position;
        drift_offset_ = {};
      }
      task_end_ms_ = now_ + round_up_to_tick(task.duration_ms);
      emit(out, EventKind::HoverStarted, task.waypoint);
      break;
    case TaskKind::Scan:
      if (uav_.mode != Mode::PositionHold || uav_.radio_link != RadioLink::Up) {
        throw std::logic_error("scan sequence requires position hold with the radio link up");
      }
      if (config_.protocol.radio_blackout) {
        uav_.radio_link = RadioLink::Down;
        windows_.push_back({now_, -1});
        emit(out, EventKind::RadioDown, task.waypoint);
      }
      uav_.mode = Mode::Scanning;
      scan_done_midpoint_ = false;
      task_end_ms_ = now_ + round_up_to_tick(task.duration_ms);
      scan_mid_ms_ = now_ + round_up_to_tick(task.duration_ms / 2);
      emit(out, EventKind::ScanStarted, task.waypoint);
      break;
    case TaskKind::Land:
      uav_.mode = Mode::Landing;
      task.target = {uav_.true_position.x, uav_.true_position.y, config_.ground_z};
      task_end_ms_ = now_ + round_up_to_tick(task.duration_ms);
      emit(out, EventKind::LandingStarted);
      break;
  }
}

void Simulator::finish_task(std::vector<Event>& out) {
  const Task task = *current_;
  switch (task.kind) {
    case TaskKind::Takeoff:
      uav_.true_position = task.target;
      uav_.mode = Mode::PositionHold;
      hold_anchor_ = task.target;
      drift_offset_ = {};
      emit(out, EventKind::TakeoffComplete);
      break;
    case TaskKind::Transit:
      uav_.true_position = task.target;
      uav_.mode = Mode::PositionHold;
      hold_anchor_ = task.target;
      drift_offset_ = {};
      emit(out, EventKind::WaypointReached, task.waypoint);
      break;
    case TaskKind::Hover:
      break;
    case TaskKind::Scan:
      if (!scan_done_midpoint_) scan_midpoint(out);
      end_scan(out, true);
      break;
    case TaskKind::Land:
      uav_.true_position = task.target;
      uav_.mode = Mode::Idle;
      done_ = true;
      active_end_ = now_;
      emit(out, EventKind::Landed);
      current_.reset();
      tasks_.clear();
      return;
  }
  current_.reset();
  start_task(out);
}

void Simulator::scan_midpoint(std::vector<Event>& out) {
  scan_done_midpoint_ = true;
  const int waypoint = current_ ? current_->waypoint : -1;
  const Vec3 est = localize(uav_, config_.localization, loc_rng_);

  radioenv::InterferenceModel interference = config_.interference;
  interference.radio_freq_mhz.reset();
  if (uav_.radio_link == RadioLink::Up) interference.radio_freq_mhz = config_.protocol.radio_freq_mhz;

  const auto tuples = radioenv::perform_scan(env_->aps, uav_.true_position, env_->propagation, interference, scan_rng_);
  std::int64_t dropped = 0;
  for (const auto& t : tuples) {
    if (uav_.scan_buffer.size() >= config_.protocol.tx_queue_capacity) {
      ++dropped;
      continue;
    }
    BeaconSample s;
    s.uav_id = uav_.uav_id;
    s.seq = uav_.seq_counter++;
    s.t_ms = now_;
    s.est_position = est;
    s.ssid = t.ssid;
    s.mac = t.mac;
    s.channel = t.channel;
    s.rssi_dbm = t.rssi_dbm;
    uav_.scan_buffer.push_back(std::move(s));
  }
  emit(out, EventKind::ScanPerformed, waypoint, static_cast<std::int64_t>(tuples.size()));
  if (dropped > 0) {
    emit(out, EventKind::BufferOverflow, waypoint, dropped,
         "scan produced " + std::to_string(tuples.size()) + " tuples for a queue of " +
             std::to_string(config_.protocol.tx_queue_capacity) + "; dropped " + std::to_string(dropped));
  }
}

void Simulator::end_scan(std::vector<Event>& out, bool completed) {
  const int waypoint = current_ ? current_->waypoint : -1;
  if (uav_.radio_link == RadioLink::Down) {
    uav_.radio_link = RadioLink::Up;
    windows_.back().up_ms = now_;
    emit(out, EventKind::RadioUp, waypoint);
  }
  const std::size_t pending = uav_.scan_buffer.size();
  flush_buffer(out);
  uav_.mode = Mode::PositionHold;
  if (completed) {
    ++scans_completed_;
    emit(out, EventKind::ScanComplete, waypoint, static_cast<std::int64_t>(pending));
  }
}

void Simulator::flush_buffer(std::vector<Event>& out) {
  if (uav_.radio_link != RadioLink::Up) throw std::logic_error("cannot transmit while the radio is down");
  const int waypoint = current_ ? current_->waypoint : -1;
  const auto count = static_cast<std::int64_t>(uav_.scan_buffer.size());
  while (!uav_.scan_buffer.empty()) {
    BeaconSample s = std::move(uav_.scan_buffer.front());
    uav_.scan_buffer.pop_front();
    deliveries_.push_back({now_, s.uav_id, s.seq});
    received_.push_back(std::move(s));
  }
  emit(out, EventKind::SamplesFlushed, waypoint, count);
}

void Simulator::abort_to_landing(std::vector<Event>& out, const std::string& reason) {
  abort_reason_ = reason;
  if (current_ && current_->kind == TaskKind::Scan) end_scan(out, false);
  tasks_.clear();
  current_.reset();
  uav_.mode = Mode::PositionHold;
  tasks_.push_back({TaskKind::Land, {}, config_.protocol.landing_ms, -1});
  start_task(out);
}

std::vector<BeaconSample> Simulator::execute_scan_sequence(const core::Waypoint& waypoint) {
  if (uav_.mode != Mode::PositionHold || uav_.radio_link != RadioLink::Up || current_) {
    throw InvalidArgument("scan sequence requires an idle position hold with the radio link up");
  }
  const std::size_t before = received_.size();
  const int scans_before = scans_completed_;
  const auto duration = static_cast<std::int64_t>(std::llround(waypoint.dwell_scan_s * 1000.0));
  tasks_.push_front({TaskKind::Scan, waypoint.position, duration, -1});
  // The radio goes down at the next tick.
  while (!done_ && scans_completed_ == scans_before) step(config_.protocol.tick_ms);
  return {received_.begin() + static_cast<std::ptrdiff_t>(before), received_.end()};
}

}  // namespace remforge::fleetsim
