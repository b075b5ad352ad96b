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
#include "remforge/core/io.hpp"
#include "remforge/estimators.hpp"

namespace remforge::estimators {

using nlohmann::json;

std::vector<double> FittedEstimator::predict(const std::vector<FeatureRow>& rows) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(predict(query_of(r)));
  return out;
}

BaselineModel::BaselineModel(EstimatorConfig config, std::map<MacAddress, double> means, double global_mean)
    : FittedEstimator(std::move(config)), means_(std::move(means)), global_mean_(global_mean) {}

double BaselineModel::predict(const Query& q) const {
  auto it = means_.find(q.mac);
  return it == means_.end() ? global_mean_ : it->second;
}

json BaselineModel::state_json() const {
  json means = json::object();
  for (const auto& [mac, m] : means_) means[mac.to_string()] = m;
  return json{{"means", means}, {"global_mean", global_mean_}};
}

BaselineModel fit_baseline(const std::vector<FeatureRow>& train) {
  if (train.empty()) throw InvalidArgument("baseline: empty training set");
  std::map<MacAddress, std::pair<double, std::size_t>> acc;
  double total = 0.0;
  for (const auto& r : train) {
    auto& [sum, n] = acc[r.mac];
    sum += r.target_rssi;
    ++n;
    total += r.target_rssi;
  }
  std::map<MacAddress, double> means;
  for (const auto& [mac, a] : acc) means[mac] = a.first / static_cast<double>(a.second);
  EstimatorConfig config;
  config.kind = EstimatorKind::BaselineMean;
  return BaselineModel(config, std::move(means), total / static_cast<double>(train.size()));
}

}  // namespace remforge::estimators
