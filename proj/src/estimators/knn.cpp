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
#include <utility>

#include "remforge/core/error.hpp"
#include "remforge/estimators.hpp"

namespace remforge::estimators {

using nlohmann::json;

namespace {

double coord_power_sum(const Vec3& a, const Vec3& b, double p) {
  const double dx = std::abs(a.x - b.x);
  const double dy = std::abs(a.y - b.y);
  const double dz = std::abs(a.z - b.z);
  if (p == 2.0) return dx * dx + dy * dy + dz * dz;
  if (p == 1.0) return dx + dy + dz;
  return std::pow(dx, p) + std::pow(dy, p) + std::pow(dz, p);
}

double root(double s, double p) {
  if (p == 2.0) return std::sqrt(s);
  if (p == 1.0) return s;
  return std::pow(s, 1.0 / p);
}

}  // namespace

KnnModel::KnnModel(EstimatorConfig config, std::vector<MacAddress> macs, std::vector<Point> points)
    : FittedEstimator(std::move(config)), macs_(std::move(macs)), points_(std::move(points)) {
  validate(this->config());
  if (this->config().kind != EstimatorKind::KnnGlobal && this->config().kind != EstimatorKind::KnnPerMac) {
    throw InvalidArgument("KnnModel needs a kNN config");
  }
  if (!std::is_sorted(macs_.begin(), macs_.end())) throw InvalidArgument("kNN MAC list must be sorted");
  by_mac_.resize(macs_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const int m = points_[i].mac;
    if (m < 0 || static_cast<std::size_t>(m) >= macs_.size()) throw InvalidArgument("kNN point has a bad MAC index");
    by_mac_[static_cast<std::size_t>(m)].push_back(i);
    total += points_[i].target;
  }
  global_mean_ = points_.empty() ? 0.0 : total / static_cast<double>(points_.size());
}

int KnnModel::index_of(MacAddress mac) const {
  auto it = std::lower_bound(macs_.begin(), macs_.end(), mac);
  if (it == macs_.end() || *it != mac) return -1;
  return static_cast<int>(it - macs_.begin());
}

bool KnnModel::has_model(MacAddress mac) const {
  const int m = index_of(mac);
  if (m < 0) return false;
  if (config().kind == EstimatorKind::KnnGlobal) return true;
  return by_mac_[static_cast<std::size_t>(m)].size() >= static_cast<std::size_t>(config().k);
}

double KnnModel::predict(const Query& q) const {
  const auto& c = config();
  const double p = c.minkowski_p;
  const int m = index_of(q.mac);
  const auto k = static_cast<std::size_t>(c.k);

  std::vector<std::pair<double, std::size_t>> cand;  // (power sum, row index)
  if (c.kind == EstimatorKind::KnnGlobal) {
    if (m < 0) return global_mean_;
    // Rows of another MAC differ from the query in two one-hot slots.
    const double cross = 2.0 * std::pow(c.onehot_factor, p);
    cand.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      double s = coord_power_sum(q.position, points_[i].position, p);
      if (points_[i].mac != m) s += cross;
      cand.emplace_back(s, i);
    }
  } else {
    if (m < 0) throw NoModelError("no per-MAC model for " + q.mac.to_string());
    const auto& rows = by_mac_[static_cast<std::size_t>(m)];
    if (rows.size() < k) {
      throw NoModelError("per-MAC model for " + q.mac.to_string() + " has " + std::to_string(rows.size()) +
                         " rows, fewer than k");
    }
    cand.reserve(rows.size());
    for (auto i : rows) cand.emplace_back(coord_power_sum(q.position, points_[i].position, p), i);
  }
  if (cand.size() < k) throw NoModelError("fewer training rows than k");

  std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k - 1), cand.end());
  std::sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k));

  if (c.weights == Weights::Uniform) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) sum += points_[cand[i].second].target;
    return sum / static_cast<double>(k);
  }
  if (cand[0].first == 0.0) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < k && cand[i].first == 0.0; ++i, ++n) sum += points_[cand[i].second].target;
    return sum / static_cast<double>(n);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = 1.0 / root(cand[i].first, p);
    num += w * points_[cand[i].second].target;
    den += w;
  }
  return num / den;
}

json KnnModel::state_json() const {
  json macs = json::array();
  for (const auto& m : macs_) macs.push_back(m.to_string());
  json pts = json::array();
  for (const auto& pt : points_) pts.push_back({pt.position.x, pt.position.y, pt.position.z, pt.mac, pt.target});
  return json{{"macs", macs}, {"points", pts}};
}

KnnModel fit_knn(const std::vector<FeatureRow>& train, const EstimatorConfig& config) {
  validate(config);
  if (train.empty()) throw InvalidArgument("kNN: empty training set");
  if (config.kind == EstimatorKind::KnnGlobal && train.size() < static_cast<std::size_t>(config.k)) {
    throw InvalidArgument("kNN: " + std::to_string(train.size()) + " training rows, fewer than k = " +
                          std::to_string(config.k));
  }
  std::vector<MacAddress> macs;
  for (const auto& r : train) macs.push_back(r.mac);
  std::sort(macs.begin(), macs.end());
  macs.erase(std::unique(macs.begin(), macs.end()), macs.end());

  std::vector<KnnModel::Point> points;
  points.reserve(train.size());
  for (const auto& r : train) {
    const auto m = std::lower_bound(macs.begin(), macs.end(), r.mac) - macs.begin();
    points.push_back({r.position, static_cast<int>(m), r.target_rssi});
  }
  return KnnModel(config, std::move(macs), std::move(points));
}

}  // namespace remforge::estimators
