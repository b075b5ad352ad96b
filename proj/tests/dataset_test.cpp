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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/dataset.hpp"

using namespace remforge;
using namespace remforge::dataset;

namespace {

// `counts[i]` samples for MAC i, random positions and channels.
std::vector<core::BeaconSample> make_samples(const std::vector<int>& counts, std::uint64_t seed) {
  core::Rng rng(seed);
  std::vector<core::BeaconSample> out;
  std::int64_t seq = 0;
  for (std::size_t m = 0; m < counts.size(); ++m) {
    for (int i = 0; i < counts[m]; ++i) {
      core::BeaconSample s;
      s.uav_id = "A";
      s.seq = seq++;
      s.t_ms = 1000 * seq;
      s.est_position = {rng.uniform(0, 3.7), rng.uniform(0, 3.2), rng.uniform(0, 2.1)};
      s.ssid = "net" + std::to_string(m % 3);
      s.mac = MacAddress(0xA0B0C0000000ULL + 17 * m);
      s.channel = 1 + static_cast<int>(m % 13);
      s.rssi_dbm = -40 - static_cast<int>(rng.below(50));
      out.push_back(s);
    }
  }
  // Interleave MACs the way a real scan log does.
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.below(i)]);
  return out;
}

}  // namespace

TEST(Load, EmptyFile) {
  const auto path = std::filesystem::temp_directory_path() / "remforge_empty.jsonl";
  core::atomic_write(path, "");
  EXPECT_TRUE(load_samples(path).samples.empty());
  std::filesystem::remove(path);
}

TEST(Load, RoundTrip) {
  const auto samples = make_samples({5, 7, 3}, 1);
  const auto path = std::filesystem::temp_directory_path() / "remforge_rt.jsonl";
  core::write_sample_log(path, samples);
  EXPECT_EQ(load_samples(path).samples, samples);
  std::filesystem::remove(path);
}

TEST(Load, OneCorruptLine) {
  auto text = core::to_jsonl(make_samples({100}, 2));
  text.replace(0, 1, "#");
  const auto path = std::filesystem::temp_directory_path() / "remforge_corrupt.jsonl";
  core::atomic_write(path, text);
  const auto log = load_samples(path);
  EXPECT_EQ(log.samples.size(), 99u);
  EXPECT_EQ(log.diagnostics.size(), 1u);
  std::filesystem::remove(path);
}

TEST(Load, MissingFileThrows) { EXPECT_THROW(load_samples("/nonexistent/samples.jsonl"), Error); }

TEST(Preprocess, ThresholdKeepsSixteen) {
  const auto r = preprocess(make_samples({20, 16, 15}, 3));
  EXPECT_EQ(r.report.retained_macs.size(), 2u);
  EXPECT_EQ(r.features.rows.size(), 36u);
  EXPECT_EQ(r.report.dropped_count, 15u);
  EXPECT_EQ(r.report.input_count, 51u);
  EXPECT_EQ(r.report.input_count, r.report.retained_count + r.report.dropped_count);
}

TEST(Preprocess, ZeroThresholdKeepsEverything) {
  const auto r = preprocess(make_samples({1, 2, 3}, 4), 0);
  EXPECT_EQ(r.features.rows.size(), 6u);
  EXPECT_EQ(r.report.dropped_count, 0u);
}

TEST(Preprocess, EmptyAndAllDroppedThrow) {
  EXPECT_THROW(preprocess({}), InvalidArgument);
  EXPECT_THROW(preprocess(make_samples({3, 4}, 5)), Error);
}

TEST(Preprocess, MacsSortedAndOneHotConsistent) {
  const auto r = preprocess(make_samples({20, 30, 17, 40}, 6));
  EXPECT_TRUE(std::is_sorted(r.features.macs.begin(), r.features.macs.end()));
  for (const auto& row : r.features.rows) {
    ASSERT_EQ(row.mac_onehot.size(), r.features.macs.size());
    EXPECT_EQ(std::count(row.mac_onehot.begin(), row.mac_onehot.end(), 1.0), 1);
    EXPECT_EQ(row.mac_onehot[static_cast<std::size_t>(row.mac_index)], 1.0);
    EXPECT_EQ(r.features.macs[static_cast<std::size_t>(row.mac_index)], row.mac);
    EXPECT_EQ(std::count(row.channel_onehot.begin(), row.channel_onehot.end(), 1.0), 1);
  }
}

TEST(Preprocess, Idempotent) {
  core::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> counts;
    for (int m = 0; m < 8; ++m) counts.push_back(1 + static_cast<int>(rng.below(40)));
    counts.push_back(30);
    const auto samples = make_samples(counts, rng.next_u64());
    const auto first = preprocess(samples);
    std::vector<core::BeaconSample> kept;
    for (const auto& s : samples) {
      if (std::binary_search(first.report.retained_macs.begin(), first.report.retained_macs.end(), s.mac)) {
        kept.push_back(s);
      }
    }
    const auto second = preprocess(kept);
    EXPECT_EQ(second.report.dropped_count, 0u);
    EXPECT_EQ(second.features.rows, first.features.rows);
  }
}

TEST(ScaleOneHot, IdentityAndFactorThree) {
  const auto rows = preprocess(make_samples({20, 20}, 8)).features.rows;
  EXPECT_EQ(scale_onehot(rows, 1.0), rows);
  for (const auto& r : scale_onehot(rows, 3.0)) {
    EXPECT_EQ(r.mac_onehot[static_cast<std::size_t>(r.mac_index)], 3.0);
  }
  EXPECT_THROW(scale_onehot(rows, 0.0), InvalidArgument);
}

TEST(ScaleOneHot, CrossMacDistanceIsFactorRootTwo) {
  const auto rows = preprocess(make_samples({20, 20, 20}, 9)).features.rows;
  for (double f : {0.5, 1.0, 3.0, 7.5}) {
    const auto scaled = scale_onehot(rows, f);
    for (std::size_t i = 1; i < scaled.size(); ++i) {
      if (scaled[i].mac == scaled[0].mac) continue;
      double s = 0;
      for (std::size_t k = 0; k < scaled[0].mac_onehot.size(); ++k) {
        const double d = scaled[i].mac_onehot[k] - scaled[0].mac_onehot[k];
        s += d * d;
      }
      EXPECT_NEAR(std::sqrt(s), f * std::sqrt(2.0), 1e-12);
    }
  }
}

TEST(ScaleOneHot, BlockSumsToFactorAndCoordsUntouched) {
  core::Rng rng(10);
  const auto rows = preprocess(make_samples({20, 25, 30, 18}, 10)).features.rows;
  for (int trial = 0; trial < 50; ++trial) {
    const double f = rng.uniform(0.01, 100.0);
    const auto scaled = scale_onehot(rows, f);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double sum = 0;
      for (double v : scaled[i].mac_onehot) sum += v;
      EXPECT_NEAR(sum, f, 1e-12 * f);
      EXPECT_EQ(scaled[i].position, rows[i].position);
      EXPECT_EQ(scaled[i].target_rssi, rows[i].target_rssi);
    }
  }
}

TEST(Split, HundredRowsOneMac) {
  const auto rows = preprocess(make_samples({100}, 11)).features.rows;
  const auto s = split(rows, 0.75, 1);
  EXPECT_EQ(s.train.size(), 75u);
  EXPECT_EQ(s.test.size(), 25u);
}

TEST(Split, Deterministic) {
  const auto rows = preprocess(make_samples({40, 30, 20}, 12)).features.rows;
  const auto a = split(rows, 0.75, 5);
  const auto b = split(rows, 0.75, 5);
  EXPECT_EQ(a.train_index, b.train_index);
  EXPECT_EQ(a.test_index, b.test_index);
  EXPECT_NE(split(rows, 0.75, 6).train_index, a.train_index);
}

TEST(Split, EightRowsTwoMacs) {
  const auto rows = preprocess(make_samples({4, 4}, 13), 0).features.rows;
  const auto s = split(rows, 0.75, 1);
  std::map<MacAddress, int> train, test;
  for (const auto& r : s.train) ++train[r.mac];
  for (const auto& r : s.test) ++test[r.mac];
  for (const auto& [mac, n] : train) {
    EXPECT_EQ(n, 3);
    EXPECT_EQ(test[mac], 1);
  }
  EXPECT_EQ(train.size(), 2u);
}

TEST(Split, SingletonStratumGoesToTrain) {
  const auto rows = preprocess(make_samples({1, 10}, 14), 0).features.rows;
  const auto s = split(rows, 0.75, 1);
  EXPECT_EQ(s.warnings.size(), 1u);
  const MacAddress lone = MacAddress(0xA0B0C0000000ULL);
  EXPECT_TRUE(std::any_of(s.train.begin(), s.train.end(), [&](const FeatureRow& r) { return r.mac == lone; }));
}

TEST(Split, TooFewRows) {
  const auto rows = preprocess(make_samples({3}, 15), 0).features.rows;
  EXPECT_THROW(split(rows, 0.75, 1), InvalidArgument);
}

TEST(Split, IsExactPartitionWithEveryMacInTrain) {
  core::Rng rng(16);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> counts;
    const int macs = 1 + static_cast<int>(rng.below(6));
    for (int m = 0; m < macs; ++m) counts.push_back(2 + static_cast<int>(rng.below(60)));
    const auto rows = preprocess(make_samples(counts, rng.next_u64()), 0).features.rows;
    if (rows.size() < 4) continue;
    const double frac = rng.uniform(0.3, 0.9);
    const auto mode = rng.below(2) ? SplitMode::Stratified : SplitMode::Random;
    const auto s = split(rows, frac, rng.next_u64(), mode);
    std::vector<std::size_t> all(s.train_index);
    all.insert(all.end(), s.test_index.begin(), s.test_index.end());
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
    if (mode == SplitMode::Stratified) {
      std::map<MacAddress, std::size_t> total, in_train;
      for (const auto& r : rows) ++total[r.mac];
      for (const auto& r : s.train) ++in_train[r.mac];
      for (const auto& [mac, n] : total) {
        EXPECT_GE(in_train[mac], 1u);
        EXPECT_LE(std::abs(static_cast<double>(in_train[mac]) - frac * static_cast<double>(n)), 1.0);
      }
    }
  }
}

TEST(FeatureCsv, RoundTrip) {
  const auto fs = preprocess(make_samples({20, 18, 25}, 17)).features;
  const auto csv = to_csv(fs);
  EXPECT_EQ(csv.rfind("x,y,z,mac_a0b0c0000000,", 0), 0u);
  const auto back = features_from_csv(csv);
  EXPECT_EQ(back.macs, fs.macs);
  EXPECT_EQ(back.channels, fs.channels);
  EXPECT_EQ(back.rows, fs.rows);
  EXPECT_EQ(rows_hash(back.rows), rows_hash(fs.rows));
}

TEST(FeatureCsv, RejectsMalformed) {
  EXPECT_THROW(features_from_csv(""), ParseError);
  EXPECT_THROW(features_from_csv("a,b,c\n"), ParseError);
  EXPECT_THROW(features_from_csv("x,y,z,mac_a0b0c0000000,rssi\n1,2,3,0,-50\n"), ParseError);
}
