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
#include <filesystem>
#include <string>
#include <vector>

#include "remforge/core/geometry.hpp"
#include "remforge/core/mac.hpp"
#include "remforge/core/sample.hpp"

namespace remforge::dataset {

using core::MacAddress;
using core::Vec3;

inline constexpr int kDefaultDropThreshold = 16;

struct FeatureRow {
  Vec3 position;
  MacAddress mac;
  int mac_index = 0;                   // position of `mac` in the retained MAC list
  std::vector<double> mac_onehot;      // one active entry
  std::vector<double> channel_onehot;  // over observed channels; not a kNN feature
  double target_rssi = 0.0;

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

struct FeatureSet {
  std::vector<MacAddress> macs;  // ascending
  std::vector<int> channels;     // ascending
  std::vector<FeatureRow> rows;
};

struct PreprocessReport {
  std::size_t input_count = 0;
  std::size_t retained_count = 0;
  std::size_t dropped_count = 0;
  std::vector<MacAddress> retained_macs;
  std::vector<MacAddress> dropped_macs;
  int drop_threshold = kDefaultDropThreshold;
};

struct PreprocessResult {
  FeatureSet features;
  PreprocessReport report;
};

/// Reads a JSONL sample log. Throws Error if the file is unreadable and
/// ParseError if more than 1% of its lines are malformed.
core::SampleLog load_samples(const std::filesystem::path& path);

/// Groups by MAC, drops MACs with fewer than `drop_threshold` samples and
/// one-hot encodes the rest. Timestamps and SSIDs are discarded.
PreprocessResult preprocess(const std::vector<core::BeaconSample>& samples,
                            int drop_threshold = kDefaultDropThreshold);

/// Multiplies the MAC one-hot block by `factor`.
std::vector<FeatureRow> scale_onehot(std::vector<FeatureRow> rows, double factor);

enum class SplitMode { Stratified, Random };

struct Split {
  std::vector<FeatureRow> train;
  std::vector<FeatureRow> test;
  std::vector<std::size_t> train_index;  // ascending indices into the input
  std::vector<std::size_t> test_index;
  std::vector<std::string> warnings;
};

/// Seeded shuffle split. Stratified mode takes round(fraction * n) training
/// rows from every MAC stratum; a stratum of one row goes to train.
Split split(const std::vector<FeatureRow>& rows, double train_fraction, std::uint64_t seed,
            SplitMode mode = SplitMode::Stratified);

/// Header: x,y,z,mac_<hex>...,channel_<n>...,rssi
std::string to_csv(const FeatureSet& features);
/// Inverse of to_csv. Throws ParseError on malformed input.
FeatureSet features_from_csv(const std::string& text);

/// Stable hash of the row order and content.
std::uint64_t rows_hash(const std::vector<FeatureRow>& rows);

}  // namespace remforge::dataset
