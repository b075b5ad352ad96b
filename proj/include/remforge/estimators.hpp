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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "remforge/dataset.hpp"

namespace remforge::estimators {

using core::MacAddress;
using core::Vec3;
using dataset::FeatureRow;

enum class EstimatorKind { BaselineMean, KnnGlobal, KnnPerMac, Mlp };
enum class Weights { Uniform, Distance };

std::string to_string(EstimatorKind k);
std::string to_string(Weights w);

struct MlpConfig {
  int hidden = 16;
  double lr = 0.001;
  int epochs = 200;
  int batch = 32;
  std::uint64_t seed = 1;
  /// Standardize coordinates and target with training-set mean and std.
  bool standardize = true;

  friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::KnnGlobal;
  int k = 3;
  Weights weights = Weights::Distance;
  double minkowski_p = 2.0;
  double onehot_factor = 1.0;
  MlpConfig mlp;

  /// Short human-readable label, e.g. "knn_global(k=3,distance,p=2,factor=1)".
  std::string label() const;

  friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

void validate(const EstimatorConfig& c);

nlohmann::json to_json(const EstimatorConfig& c);
EstimatorConfig config_from_json(const nlohmann::json& j);

/// Baseline, the two tuned global kNN variants, per-MAC kNN and the MLP.
std::vector<EstimatorConfig> reference_configs();

struct Query {
  Vec3 position;
  MacAddress mac;
};

inline Query query_of(const FeatureRow& r) { return {r.position, r.mac}; }

class FittedEstimator {
 public:
  explicit FittedEstimator(EstimatorConfig config) : config_(std::move(config)) {}
  virtual ~FittedEstimator() = default;

  const EstimatorConfig& config() const { return config_; }
  virtual double predict(const Query& q) const = 0;
  /// Learned state, without the config.
  virtual nlohmann::json state_json() const = 0;

  std::vector<double> predict(const std::vector<FeatureRow>& rows) const;

 private:
  EstimatorConfig config_;
};

/// Mean target per MAC, global mean for MACs never seen.
class BaselineModel : public FittedEstimator {
 public:
  BaselineModel(EstimatorConfig config, std::map<MacAddress, double> means, double global_mean);

  double predict(const Query& q) const override;
  nlohmann::json state_json() const override;

  const std::map<MacAddress, double>& means() const { return means_; }
  double global_mean() const { return global_mean_; }

 private:
  std::map<MacAddress, double> means_;
  double global_mean_;
};

BaselineModel fit_baseline(const std::vector<FeatureRow>& train);

/// Brute-force kNN over a training snapshot.
///
/// Global: Minkowski-p distance over (x, y, z) and the MAC one-hot scaled by
/// `onehot_factor`; a query MAC absent from training gets the global mean.
/// Per-MAC: distance over (x, y, z) among rows of the query's MAC; NoModelError
/// when that MAC has fewer than k rows.
class KnnModel : public FittedEstimator {
 public:
  struct Point {
    Vec3 position;
    int mac = 0;  // index into macs()
    double target = 0.0;
  };

  KnnModel(EstimatorConfig config, std::vector<MacAddress> macs, std::vector<Point> points);

  double predict(const Query& q) const override;
  nlohmann::json state_json() const override;

  const std::vector<MacAddress>& macs() const { return macs_; }
  const std::vector<Point>& points() const { return points_; }
  /// True if a per-MAC model exists for `mac` (always true for global kNN
  /// MACs seen in training).
  bool has_model(MacAddress mac) const;

 private:
  int index_of(MacAddress mac) const;

  std::vector<MacAddress> macs_;
  std::vector<Point> points_;
  std::vector<std::vector<std::size_t>> by_mac_;
  double global_mean_ = 0.0;
};

KnnModel fit_knn(const std::vector<FeatureRow>& train, const EstimatorConfig& config);

/// Sparse network input: standardized coordinates plus at most one active
/// one-hot slot.
struct MlpInput {
  std::array<double, 3> coords{};
  int active = -1;
  double active_value = 1.0;
};

/// One hidden layer, sigmoid activation, linear scalar output. Parameters
/// are flattened as W1 (hidden x inputs, row-major), b1, w2, b2.
struct MlpNetwork {
  int inputs = 3;
  int hidden = 16;
  std::vector<double> params;

  std::size_t param_count() const;
  double forward(const MlpInput& x) const;
};

/// Xavier-uniform weights, zero biases.
MlpNetwork init_network(int inputs, int hidden, std::uint64_t seed);

struct LossGradient {
  double loss = 0.0;  // mean squared error
  std::vector<double> gradient;
};

LossGradient loss_gradient(const MlpNetwork& net, const std::vector<MlpInput>& x, const std::vector<double>& y);

class MlpModel : public FittedEstimator {
 public:
  struct Scaling {
    std::array<double, 3> coord_mean{0, 0, 0};
    std::array<double, 3> coord_std{1, 1, 1};
    double target_mean = 0.0;
    double target_std = 1.0;
  };

  MlpModel(EstimatorConfig config, std::vector<MacAddress> macs, Scaling scaling, MlpNetwork net,
           std::vector<double> epoch_loss);

  double predict(const Query& q) const override;
  nlohmann::json state_json() const override;

  /// Training-set loss (standardized units) before training and after each epoch.
  const std::vector<double>& epoch_loss() const { return epoch_loss_; }
  const MlpNetwork& network() const { return net_; }
  MlpInput encode(const Query& q) const;

 private:
  std::vector<MacAddress> macs_;
  Scaling scaling_;
  MlpNetwork net_;
  std::vector<double> epoch_loss_;
};

/// Adam (beta1 0.9, beta2 0.999, eps 1e-8) on seeded shuffled mini-batches.
/// Throws NumericError if the loss becomes non-finite.
MlpModel fit_mlp(const std::vector<FeatureRow>& train, const EstimatorConfig& config);

/// Dispatches on config.kind.
std::unique_ptr<FittedEstimator> fit(const EstimatorConfig& config, const std::vector<FeatureRow>& train);

/// {"config": ..., "state": ...}
nlohmann::json to_json(const FittedEstimator& e);
std::unique_ptr<FittedEstimator> estimator_from_json(const nlohmann::json& j);

struct GridCell {
  EstimatorConfig config;
  double rmse = 0.0;
  std::string error;  // non-empty if the cell could not be evaluated
};

struct GridSearchResult {
  EstimatorConfig best;
  std::vector<GridCell> table;  // in grid order
};

/// Exhaustive search by validation RMSE. Ties go to smaller k, then Uniform
/// before Distance, then lower p.
GridSearchResult grid_search(const std::vector<FeatureRow>& train, const std::vector<FeatureRow>& val,
                             const std::vector<EstimatorConfig>& grid);

/// Global kNN grid from a spec such as "k=1,3,5;weights=uniform,distance;p=1,2;factor=1,3".
/// Omitted keys take the EstimatorConfig defaults.
std::vector<EstimatorConfig> parse_grid(const std::string& spec);

}  // namespace remforge::estimators
