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

#include <cstdio>
#include <sstream>

#include "remforge/cli.hpp"
#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/rng.hpp"

namespace remforge::cli {

using nlohmann::json;

namespace {

const char* axis_name(std::optional<int> axis) {
  if (!axis) return "longest";
  return *axis == 0 ? "x" : (*axis == 1 ? "y" : "z");
}

std::optional<int> parse_axis(const std::string& s) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  if (s == "longest") return std::nullopt;
  throw InvalidArgument("partition_axis must be x, y, z or longest");
}

json volume_json(const core::Volume& v) {
  const auto o = v.origin();
  return json{{"origin", {o.x, o.y, o.z}}, {"extent", {v.extent(0), v.extent(1), v.extent(2)}}};
}

core::Volume volume_from(const json& j) {
  if (j.is_string()) return parse_volume(j.get<std::string>());
  const auto& e = j.at("extent");
  core::Vec3 o;
  if (j.contains("origin")) {
    const auto& oj = j.at("origin");
    o = {oj.at(0).get<double>(), oj.at(1).get<double>(), oj.at(2).get<double>()};
  }
  return core::Volume(o, e.at(0).get<double>(), e.at(1).get<double>(), e.at(2).get<double>());
}

json mlp_json(const estimators::MlpConfig& m) {
  return json{{"hidden", m.hidden},   {"lr", m.lr},     {"epochs", m.epochs},
              {"batch", m.batch},     {"seed", m.seed}, {"standardize", m.standardize}};
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

core::Volume parse_volume(const std::string& text) {
  std::vector<double> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, 'x')) parts.push_back(core::parse_double(cur));
  if (parts.size() != 3) throw InvalidArgument("volume must look like LxWxH, got '" + text + "'");
  for (double p : parts) {
    if (!(p > 0.0)) throw InvalidArgument("volume extents must be positive");
  }
  return core::Volume({0, 0, 0}, parts[0], parts[1], parts[2]);
}

std::uint64_t stage_seed(std::uint64_t seed, const char* stage) { return core::Rng::derive(seed, stage).next_u64(); }

json to_json(const RunConfig& c) {
  return json{{"seed", c.seed},
              {"volume", volume_json(c.volume)},
              {"waypoints", c.waypoints},
              {"uavs", c.uavs},
              {"partition_axis", axis_name(c.partition_axis)},
              {"margin_m", c.margin_m},
              {"resolution_m", c.resolution_m},
              {"grid", c.grid},
              {"drop_threshold", c.drop_threshold},
              {"train_fraction", c.train_fraction},
              {"interference_scans", c.interference_scans},
              {"scenario", radioenv::to_json(c.scenario)},
              {"protocol", fleetsim::to_json(c.protocol)},
              {"battery", fleetsim::to_json(c.battery)},
              {"localization", fleetsim::to_json(c.localization)},
              {"mlp", mlp_json(c.mlp)}};
}

RunConfig apply_json(RunConfig c, const json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  try {
    read_opt(j, "seed", c.seed);
    if (j.contains("volume")) c.volume = volume_from(j.at("volume"));
    read_opt(j, "waypoints", c.waypoints);
    read_opt(j, "uavs", c.uavs);
    if (j.contains("partition_axis")) c.partition_axis = parse_axis(j.at("partition_axis").get<std::string>());
    read_opt(j, "margin_m", c.margin_m);
    read_opt(j, "resolution_m", c.resolution_m);
    read_opt(j, "grid", c.grid);
    read_opt(j, "drop_threshold", c.drop_threshold);
    read_opt(j, "train_fraction", c.train_fraction);
    read_opt(j, "interference_scans", c.interference_scans);
    if (j.contains("scenario")) c.scenario = radioenv::scenario_from_json(j.at("scenario"));
    if (j.contains("protocol")) c.protocol = fleetsim::protocol_from_json(j.at("protocol"));
    if (j.contains("battery")) c.battery = fleetsim::battery_from_json(j.at("battery"));
    if (j.contains("localization")) c.localization = fleetsim::localization_from_json(j.at("localization"));
    if (j.contains("mlp")) {
      const auto& m = j.at("mlp");
      read_opt(m, "hidden", c.mlp.hidden);
      read_opt(m, "lr", c.mlp.lr);
      read_opt(m, "epochs", c.mlp.epochs);
      read_opt(m, "batch", c.mlp.batch);
      read_opt(m, "seed", c.mlp.seed);
      read_opt(m, "standardize", c.mlp.standardize);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace remforge::cli
