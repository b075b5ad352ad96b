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

#include "remforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/rng.hpp"

namespace remforge::dataset {

core::SampleLog load_samples(const std::filesystem::path& path) {
  std::string text;
  try {
    text = core::read_file(path);
  } catch (const std::exception& e) {
    throw Error("cannot read sample log " + path.string() + ": " + e.what());
  }
  return core::parse_sample_log(text);
}

PreprocessResult preprocess(const std::vector<core::BeaconSample>& samples, int drop_threshold) {
  if (samples.empty()) throw InvalidArgument("preprocess: no samples");
  if (drop_threshold < 0) throw InvalidArgument("drop threshold must be >= 0");

  std::map<MacAddress, std::size_t> counts;
  for (const auto& s : samples) ++counts[s.mac];

  PreprocessResult out;
  auto& report = out.report;
  report.input_count = samples.size();
  report.drop_threshold = drop_threshold;
  for (const auto& [mac, n] : counts) {
    if (n < static_cast<std::size_t>(drop_threshold)) {
      report.dropped_macs.push_back(mac);
      report.dropped_count += n;
    } else {
      report.retained_macs.push_back(mac);
    }
  }
  if (report.retained_macs.empty()) {
    throw Error("preprocess: every MAC has fewer than " + std::to_string(drop_threshold) + " samples");
  }

  auto& fs = out.features;
  fs.macs = report.retained_macs;
  std::map<MacAddress, int> mac_index;
  for (std::size_t i = 0; i < fs.macs.size(); ++i) mac_index[fs.macs[i]] = static_cast<int>(i);

  std::set<int> channels;
  for (const auto& s : samples) {
    if (mac_index.count(s.mac)) channels.insert(s.channel);
  }
  fs.channels.assign(channels.begin(), channels.end());

  for (const auto& s : samples) {
    auto it = mac_index.find(s.mac);
    if (it == mac_index.end()) continue;
    FeatureRow row;
    row.position = s.est_position;
    row.mac = s.mac;
    row.mac_index = it->second;
    row.mac_onehot.assign(fs.macs.size(), 0.0);
    row.mac_onehot[static_cast<std::size_t>(it->second)] = 1.0;
    row.channel_onehot.assign(fs.channels.size(), 0.0);
    const auto ch = std::lower_bound(fs.channels.begin(), fs.channels.end(), s.channel) - fs.channels.begin();
    row.channel_onehot[static_cast<std::size_t>(ch)] = 1.0;
    row.target_rssi = s.rssi_dbm;
    fs.rows.push_back(std::move(row));
  }
  report.retained_count = fs.rows.size();
  return out;
}

std::vector<FeatureRow> scale_onehot(std::vector<FeatureRow> rows, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("one-hot factor must be positive");
  for (auto& r : rows) {
    for (auto& v : r.mac_onehot) v *= factor;
  }
  return rows;
}

namespace {

void shuffle(std::vector<std::size_t>& v, core::Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

std::size_t train_size(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
}

}  // namespace

Split split(const std::vector<FeatureRow>& rows, double train_fraction, std::uint64_t seed, SplitMode mode) {
  if (rows.size() < 4) throw InvalidArgument("split needs at least 4 rows");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw InvalidArgument("train fraction must be in (0, 1)");
  }
  auto rng = core::Rng::derive(seed, "split");
  Split out;

  if (mode == SplitMode::Random) {
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    shuffle(idx, rng);
    const std::size_t n_train = train_size(idx.size(), train_fraction);
    out.train_index.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_index.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  } else {
    std::map<MacAddress, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < rows.size(); ++i) strata[rows[i].mac].push_back(i);
    for (auto& [mac, idx] : strata) {
      shuffle(idx, rng);
      std::size_t n_train = train_size(idx.size(), train_fraction);
      if (idx.size() == 1) {
        out.warnings.push_back("MAC " + mac.to_string() + " has a single row; assigned to train");
        n_train = 1;
      }
      n_train = std::max<std::size_t>(n_train, 1);
      out.train_index.insert(out.train_index.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
      out.test_index.insert(out.test_index.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    }
  }
  std::sort(out.train_index.begin(), out.train_index.end());
  std::sort(out.test_index.begin(), out.test_index.end());
  for (auto i : out.train_index) out.train.push_back(rows[i]);
  for (auto i : out.test_index) out.test.push_back(rows[i]);
  return out;
}

std::string to_csv(const FeatureSet& fs) {
  std::ostringstream out;
  out << "x,y,z";
  for (const auto& m : fs.macs) out << ",mac_" << m.to_hex();
  for (int c : fs.channels) out << ",channel_" << c;
  out << ",rssi\n";
  for (const auto& r : fs.rows) {
    out << core::format_double(r.position.x) << ',' << core::format_double(r.position.y) << ','
        << core::format_double(r.position.z);
    for (double v : r.mac_onehot) out << ',' << core::format_double(v);
    for (double v : r.channel_onehot) out << ',' << core::format_double(v);
    out << ',' << core::format_double(r.target_rssi) << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

FeatureSet features_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("feature CSV: empty input");
  const auto header = csv_fields(line);
  if (header.size() < 4 || header[0] != "x" || header[1] != "y" || header[2] != "z" || header.back() != "rssi") {
    throw ParseError("feature CSV: header must be x,y,z,...,rssi");
  }
  FeatureSet fs;
  std::size_t col = 3;
  for (; col + 1 < header.size() && header[col].rfind("mac_", 0) == 0; ++col) {
    fs.macs.push_back(core::validate_mac(header[col].substr(4)));
  }
  for (; col + 1 < header.size() && header[col].rfind("channel_", 0) == 0; ++col) {
    fs.channels.push_back(static_cast<int>(core::parse_double(header[col].substr(8))));
  }
  if (col + 1 != header.size()) throw ParseError("feature CSV: unexpected column '" + header[col] + "'");
  if (fs.macs.empty()) throw ParseError("feature CSV: no MAC columns");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = csv_fields(line);
    if (f.size() != header.size()) {
      throw ParseError("feature CSV line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    FeatureRow r;
    r.position = {core::parse_double(f[0]), core::parse_double(f[1]), core::parse_double(f[2])};
    int active = -1;
    for (std::size_t m = 0; m < fs.macs.size(); ++m) {
      const double v = core::parse_double(f[3 + m]);
      r.mac_onehot.push_back(v);
      if (v != 0.0) {
        if (active >= 0) throw ParseError("feature CSV line " + std::to_string(line_no) + ": two active MACs");
        active = static_cast<int>(m);
      }
    }
    if (active < 0) throw ParseError("feature CSV line " + std::to_string(line_no) + ": no active MAC");
    r.mac_index = active;
    r.mac = fs.macs[static_cast<std::size_t>(active)];
    for (std::size_t ch = 0; ch < fs.channels.size(); ++ch) {
      r.channel_onehot.push_back(core::parse_double(f[3 + fs.macs.size() + ch]));
    }
    r.target_rssi = core::parse_double(f.back());
    fs.rows.push_back(std::move(r));
  }
  return fs;
}

std::uint64_t rows_hash(const std::vector<FeatureRow>& rows) {
  std::uint64_t h = core::fnv1a64({});
  auto feed = [&h](const void* p, std::size_t n) {
    h = core::fnv1a64(std::string_view(static_cast<const char*>(p), n), h);
  };
  for (const auto& r : rows) {
    const double v[4] = {r.position.x, r.position.y, r.position.z, r.target_rssi};
    feed(v, sizeof v);
    const std::uint64_t mac = r.mac.bits();
    feed(&mac, sizeof mac);
  }
  return h;
}

}  // namespace remforge::dataset
