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
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "remforge/core/error.hpp"
#include "remforge/mission.hpp"

namespace remforge::mission {

using nlohmann::json;

namespace {

// Lattice coordinates are computed, so group on a rounded key.
std::int64_t key_of(double v) { return std::llround(v * 1e6); }

std::array<double, 3> inset_extents(const Volume& volume, double margin_m) {
  return {volume.extent(0) - 2 * margin_m, volume.extent(1) - 2 * margin_m, volume.extent(2) - 2 * margin_m};
}

}  // namespace

double lattice_anisotropy(const Volume& volume, double margin_m, LatticeShape shape) {
  const auto e = inset_extents(volume, margin_m);
  const std::array<double, 3> s = {e[0] / shape.nx, e[1] / shape.ny, e[2] / shape.nz};
  return *std::max_element(s.begin(), s.end()) / *std::min_element(s.begin(), s.end());
}

LatticeShape choose_lattice(const Volume& volume, int count, double margin_m) {
  if (count < 1) throw InvalidArgument("waypoint count must be >= 1");
  if (!(margin_m >= 0.0) || !(margin_m < volume.min_extent() / 2.0)) {
    throw InvalidArgument("margin must be smaller than half the smallest extent");
  }
  LatticeShape best;
  double best_score = std::numeric_limits<double>::infinity();
  for (int nx = 1; nx <= count; ++nx) {
    for (int ny = 1; ny <= count; ++ny) {
      if (nx * ny > 2 * count) break;
      for (int nz = 1; nz <= count; ++nz) {
        const int cells = nx * ny * nz;
        if (cells > 2 * count) break;
        if (cells < count) continue;
        const LatticeShape shape{nx, ny, nz};
        const double score =
            lattice_anisotropy(volume, margin_m, shape) * static_cast<double>(cells) / static_cast<double>(count);
        if (score < best_score) {
          best_score = score;
          best = shape;
        }
      }
    }
  }
  return best;
}

std::vector<Waypoint> plan_waypoints(const Volume& volume, int count, double margin_m, double dwell_scan_s,
                                     double transit_budget_s) {
  const LatticeShape shape = choose_lattice(volume, count, margin_m);
  const auto e = inset_extents(volume, margin_m);
  const Vec3 lo = volume.origin() + Vec3{margin_m, margin_m, margin_m};
  const std::array<int, 3> n = {shape.nx, shape.ny, shape.nz};
  auto coord = [&](int axis, int i) {
    const auto a = static_cast<std::size_t>(axis);
    return lo[axis] + (i + 0.5) * e[a] / n[a];
  };

  std::vector<Waypoint> out;
  int row = 0;
  for (int k = 0; k < shape.nz && static_cast<int>(out.size()) < count; ++k) {
    for (int jj = 0; jj < shape.ny && static_cast<int>(out.size()) < count; ++jj, ++row) {
      const int j = (k % 2 == 0) ? jj : shape.ny - 1 - jj;
      for (int ii = 0; ii < shape.nx && static_cast<int>(out.size()) < count; ++ii) {
        const int i = (row % 2 == 0) ? ii : shape.nx - 1 - ii;
        out.push_back({{coord(0, i), coord(1, j), coord(2, k)}, dwell_scan_s, transit_budget_s});
      }
    }
  }
  return out;
}

std::vector<Waypoint> raster_order(std::vector<Waypoint> points) {
  std::stable_sort(points.begin(), points.end(), [](const Waypoint& a, const Waypoint& b) {
    const auto ka = std::tuple(key_of(a.position.z), key_of(a.position.y), key_of(a.position.x));
    const auto kb = std::tuple(key_of(b.position.z), key_of(b.position.y), key_of(b.position.x));
    return ka < kb;
  });
  return points;
}

std::vector<Waypoint> boustrophedon_order(std::vector<Waypoint> points) {
  std::map<std::int64_t, std::map<std::int64_t, std::vector<Waypoint>>> layers;
  for (auto& p : points) layers[key_of(p.position.z)][key_of(p.position.y)].push_back(p);

  std::vector<Waypoint> out;
  out.reserve(points.size());
  int layer_no = 0;
  int row_no = 0;
  for (auto& [z, rows] : layers) {
    std::vector<std::vector<Waypoint>*> ordered;
    for (auto& [y, row] : rows) ordered.push_back(&row);
    if (layer_no % 2 == 1) std::reverse(ordered.begin(), ordered.end());
    for (auto* row : ordered) {
      std::stable_sort(row->begin(), row->end(),
                       [](const Waypoint& a, const Waypoint& b) { return a.position.x < b.position.x; });
      if (row_no % 2 == 1) std::reverse(row->begin(), row->end());
      out.insert(out.end(), row->begin(), row->end());
      ++row_no;
    }
    ++layer_no;
  }
  return out;
}

double path_length(const std::vector<Waypoint>& points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += core::euclidean_distance(points[i - 1].position, points[i].position);
  }
  return total;
}

std::size_t MissionPlan::waypoint_count() const {
  std::size_t n = 0;
  for (const auto& u : per_uav) n += u.waypoints.size();
  return n;
}

void validate(const MissionPlan& plan) {
  std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> seen;
  std::set<std::string> ids;
  for (const auto& u : plan.per_uav) {
    if (!ids.insert(u.uav_id).second) throw InvalidArgument("duplicate UAV id " + u.uav_id);
    for (const auto& w : u.waypoints) {
      if (!seen.insert({key_of(w.position.x), key_of(w.position.y), key_of(w.position.z)}).second) {
        throw InvalidArgument("waypoint assigned twice (UAV " + u.uav_id + ")");
      }
      if (!(w.dwell_scan_s > 0.0) || !(w.transit_budget_s > 0.0)) {
        throw InvalidArgument("waypoint dwell and transit budget must be positive");
      }
    }
  }
}

std::string uav_name(int index) {
  if (index < 26) return std::string(1, static_cast<char>('A' + index));
  return "U" + std::to_string(index + 1);
}

MissionPlan partition_plan(const std::vector<Waypoint>& waypoints, int uav_count, std::optional<int> axis,
                           double ground_z) {
  if (uav_count < 1) throw InvalidArgument("uav_count must be >= 1");
  if (static_cast<std::size_t>(uav_count) > waypoints.size()) {
    throw InvalidArgument("more UAVs (" + std::to_string(uav_count) + ") than waypoints (" +
                          std::to_string(waypoints.size()) + ")");
  }
  int split_axis = 0;
  if (axis) {
    if (*axis < 0 || *axis > 2) throw InvalidArgument("partition axis must be 0, 1 or 2");
    split_axis = *axis;
  } else {
    Vec3 lo = waypoints.front().position;
    Vec3 hi = lo;
    for (const auto& w : waypoints) {
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], w.position[a]);
        hi[a] = std::max(hi[a], w.position[a]);
      }
    }
    for (int a = 1; a < 3; ++a) {
      if (hi[a] - lo[a] > hi[split_axis] - lo[split_axis]) split_axis = a;
    }
  }

  std::vector<std::size_t> order(waypoints.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return waypoints[a].position[split_axis] < waypoints[b].position[split_axis];
  });

  MissionPlan plan;
  const std::size_t n = waypoints.size();
  const auto k = static_cast<std::size_t>(uav_count);
  std::size_t cursor = 0;
  for (std::size_t u = 0; u < k; ++u) {
    const std::size_t size = n / k + (u < n % k ? 1 : 0);
    std::vector<Waypoint> block;
    for (std::size_t i = 0; i < size; ++i) block.push_back(waypoints[order[cursor + i]]);
    cursor += size;

    UavPlan up;
    up.uav_id = uav_name(static_cast<int>(u));
    up.waypoints = boustrophedon_order(std::move(block));
    char addr[64];
    std::snprintf(addr, sizeof addr, "radio://0/80/2M/E7E7E7E7%02X", static_cast<unsigned>(0xE7 + u) & 0xFF);
    up.radio_address = addr;
    const Vec3 first = up.waypoints.front().position;
    up.start_position = {first.x, first.y, ground_z};
    plan.per_uav.push_back(std::move(up));
  }
  return plan;
}

json to_json(const MissionPlan& plan) {
  json uavs = json::array();
  for (const auto& u : plan.per_uav) {
    json wps = json::array();
    for (const auto& w : u.waypoints) {
      wps.push_back({{"x", w.position.x},
                     {"y", w.position.y},
                     {"z", w.position.z},
                     {"dwell_scan_s", w.dwell_scan_s},
                     {"transit_budget_s", w.transit_budget_s}});
    }
    uavs.push_back({{"uav_id", u.uav_id},
                    {"radio_address", u.radio_address},
                    {"start", {u.start_position.x, u.start_position.y, u.start_position.z}},
                    {"yaw_deg", u.yaw_deg},
                    {"waypoints", wps}});
  }
  return json{{"uavs", uavs}};
}

MissionPlan plan_from_json(const json& j) {
  MissionPlan plan;
  try {
    for (const auto& u : j.at("uavs")) {
      UavPlan up;
      up.uav_id = u.at("uav_id").get<std::string>();
      up.radio_address = u.value("radio_address", std::string{});
      const auto& s = u.at("start");
      up.start_position = {s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>()};
      up.yaw_deg = u.value("yaw_deg", 0.0);
      for (const auto& w : u.at("waypoints")) {
        up.waypoints.push_back({{w.at("x").get<double>(), w.at("y").get<double>(), w.at("z").get<double>()},
                                w.value("dwell_scan_s", 3.0),
                                w.value("transit_budget_s", 4.0)});
      }
      plan.per_uav.push_back(std::move(up));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("plan: ") + e.what());
  }
  validate(plan);
  return plan;
}

}  // namespace remforge::mission
