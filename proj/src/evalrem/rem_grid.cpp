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

#include <cmath>
#include <sstream>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/evalrem.hpp"

namespace remforge::evalrem {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

std::uint64_t parse_hex64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 16);
    if (used != s.size()) throw ParseError("bad hex value '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad hex value '" + s + "'");
  }
}

RemGrid empty_grid(const Volume& volume, double resolution_m, const std::vector<MacAddress>& macs) {
  RemGrid g;
  g.volume = volume;
  g.resolution_m = resolution_m;
  g.dims = grid_dims(volume, resolution_m);
  g.macs = macs;
  g.values.assign(macs.size(), std::vector<double>(g.voxel_count(), 0.0));
  g.fallback.assign(macs.size(), std::vector<bool>(g.voxel_count(), false));
  return g;
}

template <typename F>
void for_each_voxel(const RemGrid& g, F&& f) {
  for (int k = 0; k < g.dims[2]; ++k) {
    for (int j = 0; j < g.dims[1]; ++j) {
      for (int i = 0; i < g.dims[0]; ++i) f(g.voxel_index(i, j, k), g.voxel_center(i, j, k));
    }
  }
}

}  // namespace

std::array<int, 3> grid_dims(const Volume& volume, double resolution_m) {
  if (!(resolution_m > 0.0) || !std::isfinite(resolution_m)) throw InvalidArgument("resolution must be positive");
  std::array<int, 3> d{};
  for (int a = 0; a < 3; ++a) {
    // Tolerate ratios like 2.9999999999999996 that are integers in exact arithmetic.
    const double r = volume.extent(a) / resolution_m;
    d[static_cast<std::size_t>(a)] = std::max(1, static_cast<int>(std::ceil(r - 1e-9)));
  }
  return d;
}

std::size_t RemGrid::voxel_count() const {
  return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(dims[2]);
}

std::size_t RemGrid::voxel_index(int i, int j, int k) const {
  return (static_cast<std::size_t>(k) * static_cast<std::size_t>(dims[1]) + static_cast<std::size_t>(j)) *
             static_cast<std::size_t>(dims[0]) +
         static_cast<std::size_t>(i);
}

Vec3 RemGrid::voxel_center(int i, int j, int k) const {
  const Vec3 o = volume.origin();
  return {o.x + (i + 0.5) * resolution_m, o.y + (j + 0.5) * resolution_m, o.z + (k + 0.5) * resolution_m};
}

double RemGrid::at(std::size_t mac, int i, int j, int k) const { return values.at(mac).at(voxel_index(i, j, k)); }

RemGrid generate_rem(const estimators::FittedEstimator& model, const Volume& volume, double resolution_m,
                     const std::vector<MacAddress>& macs, const estimators::FittedEstimator* fallback,
                     std::uint64_t dataset_hash) {
  RemGrid g = empty_grid(volume, resolution_m, macs);
  g.estimator = model.config().label();
  g.config_hash = core::fnv1a64(estimators::to_json(model.config()).dump());
  g.dataset_hash = dataset_hash;
  for (std::size_t m = 0; m < macs.size(); ++m) {
    for_each_voxel(g, [&](std::size_t v, Vec3 c) {
      double value;
      try {
        value = model.predict({c, macs[m]});
      } catch (const NoModelError&) {
        if (!fallback) throw;
        value = fallback->predict({c, macs[m]});
        g.fallback[m][v] = true;
      }
      if (!std::isfinite(value)) throw NumericError("non-finite REM prediction for " + macs[m].to_string());
      g.values[m][v] = value;
    });
  }
  return g;
}

RemGrid ground_truth_rem(const radioenv::RadioEnvironment& env, const Volume& volume, double resolution_m,
                         const std::vector<MacAddress>& macs) {
  RemGrid g = empty_grid(volume, resolution_m, macs);
  g.estimator = "ground_truth";
  for (std::size_t m = 0; m < macs.size(); ++m) {
    const auto* ap = env.find(macs[m]);
    if (!ap) throw InvalidArgument("MAC " + macs[m].to_string() + " is not in the environment");
    for_each_voxel(g, [&](std::size_t v, Vec3 c) { g.values[m][v] = radioenv::mean_rss(*ap, c, env.propagation); });
  }
  return g;
}

Fidelity rem_fidelity(const RemGrid& grid, const radioenv::RadioEnvironment& env) {
  Fidelity f;
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t m = 0; m < grid.macs.size(); ++m) {
    const auto* ap = env.find(grid.macs[m]);
    if (!ap) throw InvalidArgument("MAC " + grid.macs[m].to_string() + " is not in the environment");
    double s = 0.0;
    for_each_voxel(grid, [&](std::size_t v, Vec3 c) {
      const double e = grid.values[m][v] - radioenv::mean_rss(*ap, c, env.propagation);
      s += e * e;
    });
    total += s;
    n += grid.voxel_count();
    f.per_mac.emplace_back(grid.macs[m], std::sqrt(s / static_cast<double>(grid.voxel_count())));
  }
  f.aggregate_rmse = n ? std::sqrt(total / static_cast<double>(n)) : 0.0;
  return f;
}

std::string rem_csv(const RemGrid& g) {
  std::ostringstream out;
  out << "x,y,z,mac,pred_dbm\n";
  for (std::size_t m = 0; m < g.macs.size(); ++m) {
    const std::string mac = g.macs[m].to_string();
    for_each_voxel(g, [&](std::size_t v, Vec3 c) {
      out << core::format_double(c.x) << ',' << core::format_double(c.y) << ',' << core::format_double(c.z) << ','
          << mac << ',' << core::format_double(g.values[m][v]) << '\n';
    });
  }
  return out.str();
}

json rem_header(const RemGrid& g) {
  json macs = json::array();
  json fallback = json::object();
  for (std::size_t m = 0; m < g.macs.size(); ++m) {
    macs.push_back(g.macs[m].to_string());
    std::vector<std::size_t> idx;
    for (std::size_t v = 0; v < g.fallback[m].size(); ++v) {
      if (g.fallback[m][v]) idx.push_back(v);
    }
    if (!idx.empty()) fallback[g.macs[m].to_string()] = idx;
  }
  const Vec3 o = g.volume.origin();
  return json{{"format", "remforge-rem/1"},
              {"value_order", "mac-major; x fastest, then y, then z"},
              {"volume", {{"origin", {o.x, o.y, o.z}}, {"extent", {g.volume.extent(0), g.volume.extent(1), g.volume.extent(2)}}}},
              {"resolution_m", g.resolution_m},
              {"dims", g.dims},
              {"macs", macs},
              {"estimator", g.estimator},
              {"config_hash", hex64(g.config_hash)},
              {"dataset_hash", hex64(g.dataset_hash)},
              {"fallback_voxels", fallback}};
}

RemGrid rem_from_files(const json& header, const std::string& csv) {
  RemGrid g;
  try {
    const auto& vol = header.at("volume");
    const auto& o = vol.at("origin");
    const auto& e = vol.at("extent");
    const Volume volume({o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>()}, e.at(0).get<double>(),
                        e.at(1).get<double>(), e.at(2).get<double>());
    std::vector<MacAddress> macs;
    for (const auto& m : header.at("macs")) macs.push_back(core::validate_mac(m.get<std::string>()));
    g = empty_grid(volume, header.at("resolution_m").get<double>(), macs);
    if (header.at("dims").get<std::array<int, 3>>() != g.dims) throw ParseError("REM header dims do not match volume");
    g.estimator = header.value("estimator", std::string{});
    g.config_hash = parse_hex64(header.value("config_hash", std::string("0")));
    g.dataset_hash = parse_hex64(header.value("dataset_hash", std::string("0")));
    if (header.contains("fallback_voxels")) {
      for (std::size_t m = 0; m < macs.size(); ++m) {
        const auto key = macs[m].to_string();
        if (!header["fallback_voxels"].contains(key)) continue;
        for (auto v : header["fallback_voxels"][key].get<std::vector<std::size_t>>()) g.fallback[m].at(v) = true;
      }
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("REM header: ") + ex.what());
  }

  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,z,mac,pred_dbm") throw ParseError("REM CSV: bad header line");
  const std::size_t per_mac = g.voxel_count();
  std::size_t n = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c4 = line.rfind(',');
    const auto c3 = c4 == std::string::npos ? c4 : line.rfind(',', c4 - 1);
    if (c3 == std::string::npos) throw ParseError("REM CSV line " + std::to_string(line_no) + ": too few fields");
    const std::size_t m = n / per_mac;
    if (m >= g.macs.size()) throw ParseError("REM CSV: more rows than the header declares");
    if (core::validate_mac(line.substr(c3 + 1, c4 - c3 - 1)) != g.macs[m]) {
      throw ParseError("REM CSV line " + std::to_string(line_no) + ": unexpected MAC");
    }
    g.values[m][n % per_mac] = core::parse_double(line.substr(c4 + 1));
    ++n;
  }
  if (n != per_mac * g.macs.size()) throw ParseError("REM CSV: fewer rows than the header declares");
  return g;
}

void write_rem(const std::filesystem::path& dir, const RemGrid& grid) {
  core::atomic_write(dir / "rem.json", rem_header(grid).dump(2) + "\n");
  core::atomic_write(dir / "rem.csv", rem_csv(grid));
}

RemGrid read_rem(const std::filesystem::path& dir) {
  json header;
  try {
    header = json::parse(core::read_file(dir / "rem.json"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("rem.json: ") + e.what());
  }
  return rem_from_files(header, core::read_file(dir / "rem.csv"));
}

}  // namespace remforge::evalrem
