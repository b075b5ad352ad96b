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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/evalrem.hpp"

namespace remforge::evalrem {

using nlohmann::json;

double rmse(const std::vector<double>& predictions, const std::vector<double>& targets) {
  if (predictions.empty()) throw InvalidArgument("rmse: empty input");
  if (predictions.size() != targets.size()) {
    throw InvalidArgument("rmse: " + std::to_string(predictions.size()) + " predictions vs " +
                          std::to_string(targets.size()) + " targets");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double e = predictions[i] - targets[i];
    s += e * e;
  }
  return std::sqrt(s / static_cast<double>(predictions.size()));
}

const EvalRow* EvalReport::find(estimators::EstimatorKind kind) const {
  for (const auto& r : rows) {
    if (r.config.kind == kind && r.error.empty()) return &r;
  }
  return nullptr;
}

EvalReport compare_estimators(const std::vector<dataset::FeatureRow>& rows,
                              const std::vector<estimators::EstimatorConfig>& configs, std::uint64_t seed,
                              double train_fraction) {
  if (configs.empty()) throw InvalidArgument("compare_estimators: no estimator configs");
  const auto split = dataset::split(rows, train_fraction, seed);
  if (split.test.empty()) throw InvalidArgument("compare_estimators: empty test set");

  EvalReport report;
  report.seed = seed;
  report.train_hash = dataset::rows_hash(split.train);
  report.test_hash = dataset::rows_hash(split.test);
  report.diagnostics = split.warnings;

  const auto baseline = estimators::fit_baseline(split.train);
  std::vector<double> targets;
  for (const auto& r : split.test) targets.push_back(r.target_rssi);

  for (const auto& config : configs) {
    EvalRow row;
    row.estimator = config.label();
    row.config = config;
    row.train_n = split.train.size();
    row.test_n = split.test.size();
    if (dataset::rows_hash(split.train) != report.train_hash || dataset::rows_hash(split.test) != report.test_hash) {
      throw std::logic_error("compare_estimators: split changed between estimators");
    }
    try {
      const auto model = estimators::fit(config, split.train);
      std::vector<double> preds;
      for (const auto& r : split.test) {
        try {
          preds.push_back(model->predict(estimators::query_of(r)));
        } catch (const NoModelError&) {
          preds.push_back(baseline.predict(estimators::query_of(r)));
          ++row.fallback_n;
        }
      }
      row.rmse_dbm = rmse(preds, targets);
      if (row.fallback_n > 0) {
        report.diagnostics.push_back(row.estimator + ": " + std::to_string(row.fallback_n) +
                                     " test rows answered by the baseline");
      }
    } catch (const Error& e) {
      row.rmse_dbm = std::numeric_limits<double>::infinity();
      row.error = e.what();
      report.diagnostics.push_back(row.estimator + ": " + e.what());
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const EvalRow& a, const EvalRow& b) {
    if (a.error.empty() != b.error.empty()) return a.error.empty();
    return a.rmse_dbm < b.rmse_dbm;
  });
  return report;
}

std::string to_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "estimator,rmse_dbm,train_n,test_n\n";
  for (const auto& row : r.rows) {
    out << '"' << row.estimator << "\"," << (row.error.empty() ? core::format_double(row.rmse_dbm) : "nan") << ','
        << row.train_n << ',' << row.test_n << '\n';
  }
  return out.str();
}

json to_json(const EvalReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j{{"estimator", row.estimator},
           {"config", estimators::to_json(row.config)},
           {"train_n", row.train_n},
           {"test_n", row.test_n},
           {"fallback_n", row.fallback_n}};
    if (row.error.empty()) {
      j["rmse_dbm"] = row.rmse_dbm;
    } else {
      j["rmse_dbm"] = nullptr;
      j["error"] = row.error;
    }
    rows.push_back(j);
  }
  std::ostringstream th;
  std::ostringstream eh;
  th << std::hex << r.train_hash;
  eh << std::hex << r.test_hash;
  return json{{"seed", r.seed},
              {"train_hash", th.str()},
              {"test_hash", eh.str()},
              {"results", rows},
              {"diagnostics", r.diagnostics}};
}

}  // namespace remforge::evalrem
