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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "remforge/core/geometry.hpp"
#include "remforge/dataset.hpp"
#include "remforge/estimators.hpp"
#include "remforge/radioenv.hpp"

namespace remforge::evalrem {

using core::MacAddress;
using core::Vec3;
using core::Volume;

/// sqrt(mean((p - t)^2)). Throws InvalidArgument on empty or mismatched input.
double rmse(const std::vector<double>& predictions, const std::vector<double>& targets);

struct EvalRow {
  std::string estimator;  // config label
  estimators::EstimatorConfig config;
  double rmse_dbm = 0.0;
  std::size_t train_n = 0;
  std::size_t test_n = 0;
  std::size_t fallback_n = 0;  // test rows answered by the baseline fallback
  std::string error;           // non-empty if the estimator failed outright
};

struct EvalReport {
  std::vector<EvalRow> rows;  // ascending RMSE, failed rows last
  std::uint64_t seed = 0;
  std::uint64_t train_hash = 0;
  std::uint64_t test_hash = 0;
  std::vector<std::string> diagnostics;

  const EvalRow* find(estimators::EstimatorKind kind) const;
};

/// Fits every config on one shared stratified 75/25 split and reports test
/// RMSE. Rows that raise NoModelError are answered by the baseline.
EvalReport compare_estimators(const std::vector<dataset::FeatureRow>& rows,
                              const std::vector<estimators::EstimatorConfig>& configs, std::uint64_t seed,
                              double train_fraction = 0.75);

/// CSV header: estimator,rmse_dbm,train_n,test_n
std::string to_csv(const EvalReport& r);
nlohmann::json to_json(const EvalReport& r);

/// Predictions on a voxel lattice, one block per MAC. Values are stored
/// x-fastest, then y, then z.
struct RemGrid {
  Volume volume = Volume::reference();
  double resolution_m = 0.25;
  std::array<int, 3> dims{0, 0, 0};
  std::vector<MacAddress> macs;
  std::vector<std::vector<double>> values;  // [mac][voxel]
  std::vector<std::vector<bool>> fallback;  // [mac][voxel], baseline used
  std::string estimator;                    // config label
  std::uint64_t config_hash = 0;
  std::uint64_t dataset_hash = 0;

  std::size_t voxel_count() const;
  std::size_t voxel_index(int i, int j, int k) const;
  Vec3 voxel_center(int i, int j, int k) const;
  double at(std::size_t mac, int i, int j, int k) const;

  friend bool operator==(const RemGrid&, const RemGrid&) = default;
};

/// ceil(extent / resolution) voxels per axis.
std::array<int, 3> grid_dims(const Volume& volume, double resolution_m);

/// Evaluates `model` at every voxel center for every MAC. Voxels where the
/// model has no answer (NoModelError) take `fallback` and are flagged.
RemGrid generate_rem(const estimators::FittedEstimator& model, const Volume& volume, double resolution_m,
                     const std::vector<MacAddress>& macs, const estimators::FittedEstimator* fallback = nullptr,
                     std::uint64_t dataset_hash = 0);

/// Noiseless mean_rss at every voxel center.
RemGrid ground_truth_rem(const radioenv::RadioEnvironment& env, const Volume& volume, double resolution_m,
                         const std::vector<MacAddress>& macs);

struct Fidelity {
  std::vector<std::pair<MacAddress, double>> per_mac;
  double aggregate_rmse = 0.0;  // over all voxels of all MACs
};

/// RMSE of the grid against noiseless mean_rss; throws InvalidArgument for a
/// MAC absent from `env`.
Fidelity rem_fidelity(const RemGrid& grid, const radioenv::RadioEnvironment& env);

/// CSV x,y,z,mac,pred_dbm plus a JSON header. Doubles use shortest
/// round-trip text, so import(export(g)) == g.
std::string rem_csv(const RemGrid& grid);
nlohmann::json rem_header(const RemGrid& grid);
RemGrid rem_from_files(const nlohmann::json& header, const std::string& csv);

void write_rem(const std::filesystem::path& dir, const RemGrid& grid);
RemGrid read_rem(const std::filesystem::path& dir);

}  // namespace remforge::evalrem
