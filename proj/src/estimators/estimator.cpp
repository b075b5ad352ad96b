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
#include "remforge/estimators.hpp"

namespace remforge::estimators {

using nlohmann::json;

std::unique_ptr<FittedEstimator> fit(const EstimatorConfig& config, const std::vector<FeatureRow>& train) {
  validate(config);
  switch (config.kind) {
    case EstimatorKind::BaselineMean:
      return std::make_unique<BaselineModel>(fit_baseline(train));
    case EstimatorKind::KnnGlobal:
    case EstimatorKind::KnnPerMac:
      return std::make_unique<KnnModel>(fit_knn(train, config));
    case EstimatorKind::Mlp:
      return std::make_unique<MlpModel>(fit_mlp(train, config));
  }
  throw InvalidArgument("unknown estimator kind");
}

json to_json(const FittedEstimator& e) { return json{{"config", to_json(e.config())}, {"state", e.state_json()}}; }

namespace {

std::vector<MacAddress> macs_from(const json& arr) {
  std::vector<MacAddress> out;
  for (const auto& m : arr) out.push_back(core::validate_mac(m.get<std::string>()));
  return out;
}

}  // namespace

std::unique_ptr<FittedEstimator> estimator_from_json(const json& j) {
  const EstimatorConfig config = config_from_json(j.at("config"));
  try {
    const auto& s = j.at("state");
    switch (config.kind) {
      case EstimatorKind::BaselineMean: {
        std::map<MacAddress, double> means;
        for (const auto& [mac, v] : s.at("means").items()) means[core::validate_mac(mac)] = v.get<double>();
        return std::make_unique<BaselineModel>(config, std::move(means), s.at("global_mean").get<double>());
      }
      case EstimatorKind::KnnGlobal:
      case EstimatorKind::KnnPerMac: {
        std::vector<KnnModel::Point> pts;
        for (const auto& p : s.at("points")) {
          pts.push_back({{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()},
                         p.at(3).get<int>(),
                         p.at(4).get<double>()});
        }
        return std::make_unique<KnnModel>(config, macs_from(s.at("macs")), std::move(pts));
      }
      case EstimatorKind::Mlp: {
        MlpModel::Scaling sc;
        sc.coord_mean = s.at("coord_mean").get<std::array<double, 3>>();
        sc.coord_std = s.at("coord_std").get<std::array<double, 3>>();
        sc.target_mean = s.at("target_mean").get<double>();
        sc.target_std = s.at("target_std").get<double>();
        MlpNetwork net;
        net.inputs = s.at("inputs").get<int>();
        net.hidden = s.at("hidden").get<int>();
        net.params = s.at("params").get<std::vector<double>>();
        return std::make_unique<MlpModel>(config, macs_from(s.at("macs")), sc, std::move(net),
                                          s.value("epoch_loss", std::vector<double>{}));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("estimator state: ") + e.what());
  }
  throw ParseError("unknown estimator kind");
}

}  // namespace remforge::estimators
