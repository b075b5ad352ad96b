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

#include "remforge/core/error.hpp"
#include "remforge/radioenv.hpp"

namespace remforge::radioenv {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& field) {
  if (auto it = j.find(key); it != j.end()) field = it->get<T>();
}

}  // namespace

json to_json(const PropagationParams& p) {
  return json{{"d0_m", p.d0_m},
              {"shadow_sigma_db", p.shadow_sigma_db},
              {"temporal_sigma_db", p.temporal_sigma_db},
              {"wall_attenuation_db", p.wall_attenuation_db},
              {"sensitivity_dbm", p.sensitivity_dbm},
              {"detect_prob", p.detect_prob}};
}

PropagationParams propagation_from_json(const json& j) {
  PropagationParams p;
  read_opt(j, "d0_m", p.d0_m);
  read_opt(j, "shadow_sigma_db", p.shadow_sigma_db);
  read_opt(j, "temporal_sigma_db", p.temporal_sigma_db);
  read_opt(j, "wall_attenuation_db", p.wall_attenuation_db);
  read_opt(j, "sensitivity_dbm", p.sensitivity_dbm);
  read_opt(j, "detect_prob", p.detect_prob);
  validate(p);
  return p;
}

json to_json(const ScenarioConfig& c) {
  return json{{"ap_count", c.ap_count},
              {"ssid_count", c.ssid_count},
              {"tx_power_min_dbm", c.tx_power_min_dbm},
              {"tx_power_max_dbm", c.tx_power_max_dbm},
              {"path_loss_exponent_min", c.path_loss_exponent_min},
              {"path_loss_exponent_max", c.path_loss_exponent_max},
              {"min_distance_m", c.min_distance_m},
              {"max_distance_m", c.max_distance_m},
              {"center_dir_x", c.center_dir_x},
              {"center_dir_y", c.center_dir_y},
              {"center_bias", c.center_bias},
              {"wall_spacing_m", c.wall_spacing_m},
              {"floor_height_m", c.floor_height_m},
              {"walls_per_floor", c.walls_per_floor},
              {"other_floor_prob", c.other_floor_prob},
              {"propagation", to_json(c.propagation)},
              {"master_seed", c.master_seed}};
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig c;
  try {
    read_opt(j, "ap_count", c.ap_count);
    read_opt(j, "ssid_count", c.ssid_count);
    read_opt(j, "tx_power_min_dbm", c.tx_power_min_dbm);
    read_opt(j, "tx_power_max_dbm", c.tx_power_max_dbm);
    read_opt(j, "path_loss_exponent_min", c.path_loss_exponent_min);
    read_opt(j, "path_loss_exponent_max", c.path_loss_exponent_max);
    read_opt(j, "min_distance_m", c.min_distance_m);
    read_opt(j, "max_distance_m", c.max_distance_m);
    read_opt(j, "center_dir_x", c.center_dir_x);
    read_opt(j, "center_dir_y", c.center_dir_y);
    read_opt(j, "center_bias", c.center_bias);
    read_opt(j, "wall_spacing_m", c.wall_spacing_m);
    read_opt(j, "floor_height_m", c.floor_height_m);
    read_opt(j, "walls_per_floor", c.walls_per_floor);
    read_opt(j, "other_floor_prob", c.other_floor_prob);
    if (auto it = j.find("propagation"); it != j.end()) c.propagation = propagation_from_json(*it);
    read_opt(j, "master_seed", c.master_seed);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario config: ") + e.what());
  }
  return c;
}

json to_json(const AccessPoint& ap) {
  return json{{"mac", ap.mac.to_string()},
              {"ssid", ap.ssid},
              {"channel", ap.channel},
              {"x", ap.position.x},
              {"y", ap.position.y},
              {"z", ap.position.z},
              {"tx_power_dbm", ap.tx_power_dbm},
              {"path_loss_exponent", ap.path_loss_exponent},
              {"wall_count_toward_volume", ap.wall_count_toward_volume},
              {"seed", ap.seed}};
}

AccessPoint access_point_from_json(const json& j) {
  AccessPoint ap;
  try {
    ap.mac = core::validate_mac(j.at("mac").get<std::string>());
    ap.ssid = j.at("ssid").get<std::string>();
    ap.channel = j.at("channel").get<int>();
    ap.position = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()};
    ap.tx_power_dbm = j.at("tx_power_dbm").get<double>();
    ap.path_loss_exponent = j.at("path_loss_exponent").get<double>();
    ap.wall_count_toward_volume = j.at("wall_count_toward_volume").get<int>();
    ap.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("access point: ") + e.what());
  }
  validate(ap);
  return ap;
}

json to_json(const RadioEnvironment& env) {
  json aps = json::array();
  for (const auto& ap : env.aps) aps.push_back(to_json(ap));
  return json{{"propagation", to_json(env.propagation)}, {"access_points", aps}};
}

RadioEnvironment environment_from_json(const json& j) {
  RadioEnvironment env;
  if (auto it = j.find("propagation"); it != j.end()) env.propagation = propagation_from_json(*it);
  if (!j.contains("access_points") || !j.at("access_points").is_array()) {
    throw ParseError("environment: missing access_points array");
  }
  for (const auto& a : j.at("access_points")) env.aps.push_back(access_point_from_json(a));
  return env;
}

}  // namespace remforge::radioenv
