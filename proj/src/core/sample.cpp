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

#include "remforge/core/sample.hpp"

#include <cmath>
#include <json.hpp>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"

namespace remforge::core {

using nlohmann::json;
using nlohmann::ordered_json;

void validate_sample(const BeaconSample& s, const Volume& volume) {
  if (s.channel < kMinChannel || s.channel > kMaxChannel) {
    throw InvalidArgument("channel out of range: " + std::to_string(s.channel));
  }
  if (s.rssi_dbm < kMinRssiDbm || s.rssi_dbm > kMaxRssiDbm) {
    throw InvalidArgument("rssi out of range: " + std::to_string(s.rssi_dbm));
  }
  if (!volume.contains(s.est_position, kPositionSlackM)) {
    throw InvalidArgument("estimated position outside the volume");
  }
}

int quantize_rssi(double rssi_dbm) {
  const double r = std::round(rssi_dbm);  // half away from zero
  if (r < kMinRssiDbm) return kMinRssiDbm;
  if (r > kMaxRssiDbm) return kMaxRssiDbm;
  return static_cast<int>(r);
}

void validate_waypoint(const Waypoint& w, const Volume& volume) {
  if (!volume.strictly_contains(w.position)) throw InvalidArgument("waypoint must lie strictly inside the volume");
  if (!(w.dwell_scan_s > 0.0) || !(w.transit_budget_s > 0.0)) {
    throw InvalidArgument("waypoint dwell and transit budget must be positive");
  }
}

std::string to_jsonl_line(const BeaconSample& s) {
  ordered_json j;
  j["uav_id"] = s.uav_id;
  j["seq"] = s.seq;
  j["t_ms"] = s.t_ms;
  j["est_x"] = s.est_position.x;
  j["est_y"] = s.est_position.y;
  j["est_z"] = s.est_position.z;
  j["ssid"] = s.ssid;
  j["mac"] = s.mac.to_hex();
  j["channel"] = s.channel;
  j["rssi_dbm"] = s.rssi_dbm;
  return j.dump();
}

namespace {

template <typename T>
T required(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return it->get<T>();
}

std::int64_t required_int(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return it->get<std::int64_t>();
}

double required_number(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

BeaconSample parse_jsonl_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("line is not a JSON object");
  BeaconSample s;
  try {
    s.uav_id = required<std::string>(j, "uav_id");
    s.seq = required_int(j, "seq");
    s.t_ms = required_int(j, "t_ms");
    s.est_position = {required_number(j, "est_x"), required_number(j, "est_y"), required_number(j, "est_z")};
    s.ssid = required<std::string>(j, "ssid");
    s.mac = validate_mac(required<std::string>(j, "mac"));
    s.channel = static_cast<int>(required_int(j, "channel"));
    s.rssi_dbm = static_cast<int>(required_int(j, "rssi_dbm"));
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
  if (s.channel < kMinChannel || s.channel > kMaxChannel) throw ParseError("channel out of range");
  if (s.rssi_dbm < kMinRssiDbm || s.rssi_dbm > kMaxRssiDbm) throw ParseError("rssi_dbm out of range");
  if (!is_finite(s.est_position)) throw ParseError("non-finite position");
  return s;
}

std::string to_jsonl(const std::vector<BeaconSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += to_jsonl_line(s);
    out += '\n';
  }
  return out;
}

SampleLog parse_sample_log(std::string_view text) {
  SampleLog log;
  std::size_t line_no = 0;
  std::size_t non_blank = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    ++non_blank;
    try {
      log.samples.push_back(parse_jsonl_line(line));
    } catch (const ParseError& e) {
      log.diagnostics.push_back({line_no, e.what()});
    }
  }
  // Abort when strictly more than 1% of records are malformed.
  if (log.diagnostics.size() * 100 > non_blank) {
    const auto& first = log.diagnostics.front();
    throw ParseError(std::to_string(log.diagnostics.size()) + " of " + std::to_string(non_blank) +
                     " lines malformed (first at line " + std::to_string(first.line) + ": " + first.message + ")");
  }
  return log;
}

void write_sample_log(const std::filesystem::path& path, const std::vector<BeaconSample>& samples) {
  atomic_write(path, to_jsonl(samples));
}

}  // namespace remforge::core
