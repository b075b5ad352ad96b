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
#include <limits>
#include <tuple>

#include "remforge/core/error.hpp"
#include "remforge/estimators.hpp"

namespace remforge::estimators {

namespace {

double validation_rmse(const FittedEstimator& model, const std::vector<FeatureRow>& val) {
  double s = 0.0;
  for (const auto& r : val) {
    const double e = model.predict(query_of(r)) - r.target_rssi;
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(val.size()));
}

auto tie_key(const EstimatorConfig& c) {
  return std::tuple(c.k, c.weights == Weights::Uniform ? 0 : 1, c.minkowski_p, c.onehot_factor);
}

}  // namespace

GridSearchResult grid_search(const std::vector<FeatureRow>& train, const std::vector<FeatureRow>& val,
                             const std::vector<EstimatorConfig>& grid) {
  if (grid.empty()) throw InvalidArgument("grid search: empty grid");
  if (val.empty()) throw InvalidArgument("grid search: empty validation set");

  GridSearchResult out;
  const GridCell* best = nullptr;
  for (const auto& config : grid) {
    GridCell cell{config, 0.0, {}};
    try {
      const auto model = fit(config, train);
      cell.rmse = validation_rmse(*model, val);
    } catch (const Error& e) {
      cell.rmse = std::numeric_limits<double>::infinity();
      cell.error = e.what();
    }
    out.table.push_back(cell);
  }
  for (const auto& cell : out.table) {
    if (!cell.error.empty()) continue;
    if (!best || cell.rmse < best->rmse ||
        (cell.rmse == best->rmse && tie_key(cell.config) < tie_key(best->config))) {
      best = &cell;
    }
  }
  if (!best) throw Error("grid search: no configuration could be evaluated");
  out.best = best->config;
  return out;
}

}  // namespace remforge::estimators
