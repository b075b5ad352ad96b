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
#include <numeric>

#include "remforge/core/error.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/estimators.hpp"

namespace remforge::estimators {

using nlohmann::json;

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

struct Layout {
  std::size_t d, h;
  std::size_t w1(std::size_t j, std::size_t c) const { return j * d + c; }
  std::size_t b1(std::size_t j) const { return h * d + j; }
  std::size_t w2(std::size_t j) const { return h * d + h + j; }
  std::size_t b2() const { return h * d + 2 * h; }
};

Layout layout_of(const MlpNetwork& net) {
  return {static_cast<std::size_t>(net.inputs), static_cast<std::size_t>(net.hidden)};
}

void check_input(const MlpNetwork& net, const MlpInput& x) {
  if (x.active >= net.inputs - 3) throw InvalidArgument("MLP input one-hot index out of range");
}

double hidden_pre(const MlpNetwork& net, const Layout& L, std::size_t j, const MlpInput& x) {
  const auto& w = net.params;
  double a = w[L.b1(j)] + w[L.w1(j, 0)] * x.coords[0] + w[L.w1(j, 1)] * x.coords[1] + w[L.w1(j, 2)] * x.coords[2];
  if (x.active >= 0) a += w[L.w1(j, 3 + static_cast<std::size_t>(x.active))] * x.active_value;
  return a;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double stddev(const std::vector<double>& v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  const double sd = std::sqrt(s / v.size());
  return sd > 1e-12 ? sd : 1.0;
}

double full_loss(const MlpNetwork& net, const std::vector<MlpInput>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = net.forward(x[i]) - y[i];
    s += e * e;
  }
  return s / static_cast<double>(x.size());
}

}  // namespace

std::size_t MlpNetwork::param_count() const {
  const auto d = static_cast<std::size_t>(inputs);
  const auto h = static_cast<std::size_t>(hidden);
  return h * d + 2 * h + 1;
}

double MlpNetwork::forward(const MlpInput& x) const {
  check_input(*this, x);
  const Layout L = layout_of(*this);
  double y = params[L.b2()];
  for (std::size_t j = 0; j < L.h; ++j) y += params[L.w2(j)] * sigmoid(hidden_pre(*this, L, j, x));
  return y;
}

MlpNetwork init_network(int inputs, int hidden, std::uint64_t seed) {
  if (inputs < 3 || hidden < 1) throw InvalidArgument("MLP needs >= 3 inputs and >= 1 hidden unit");
  MlpNetwork net;
  net.inputs = inputs;
  net.hidden = hidden;
  net.params.assign(net.param_count(), 0.0);
  const Layout L = layout_of(net);
  auto rng = core::Rng::derive(seed, "mlp-init");
  const double lim1 = std::sqrt(6.0 / (inputs + hidden));
  const double lim2 = std::sqrt(6.0 / (hidden + 1));
  for (std::size_t j = 0; j < L.h; ++j) {
    for (std::size_t c = 0; c < L.d; ++c) net.params[L.w1(j, c)] = rng.uniform(-lim1, lim1);
  }
  for (std::size_t j = 0; j < L.h; ++j) net.params[L.w2(j)] = rng.uniform(-lim2, lim2);
  return net;
}

LossGradient loss_gradient(const MlpNetwork& net, const std::vector<MlpInput>& x, const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size()) throw InvalidArgument("loss_gradient: input/target size mismatch");
  const Layout L = layout_of(net);
  LossGradient out;
  out.gradient.assign(net.param_count(), 0.0);
  auto& g = out.gradient;
  const double n = static_cast<double>(x.size());
  std::vector<double> h(L.h);

  for (std::size_t i = 0; i < x.size(); ++i) {
    check_input(net, x[i]);
    double pred = net.params[L.b2()];
    for (std::size_t j = 0; j < L.h; ++j) {
      h[j] = sigmoid(hidden_pre(net, L, j, x[i]));
      pred += net.params[L.w2(j)] * h[j];
    }
    const double err = pred - y[i];
    out.loss += err * err / n;
    const double dy = 2.0 * err / n;
    g[L.b2()] += dy;
    for (std::size_t j = 0; j < L.h; ++j) {
      g[L.w2(j)] += dy * h[j];
      const double da = dy * net.params[L.w2(j)] * h[j] * (1.0 - h[j]);
      g[L.b1(j)] += da;
      for (std::size_t c = 0; c < 3; ++c) g[L.w1(j, c)] += da * x[i].coords[c];
      if (x[i].active >= 0) g[L.w1(j, 3 + static_cast<std::size_t>(x[i].active))] += da * x[i].active_value;
    }
  }
  return out;
}

MlpModel::MlpModel(EstimatorConfig config, std::vector<MacAddress> macs, Scaling scaling, MlpNetwork net,
                   std::vector<double> epoch_loss)
    : FittedEstimator(std::move(config)),
      macs_(std::move(macs)),
      scaling_(scaling),
      net_(std::move(net)),
      epoch_loss_(std::move(epoch_loss)) {
  if (net_.inputs != static_cast<int>(macs_.size()) + 3 || net_.params.size() != net_.param_count()) {
    throw InvalidArgument("MLP network shape does not match its MAC list");
  }
}

MlpInput MlpModel::encode(const Query& q) const {
  MlpInput in;
  for (int c = 0; c < 3; ++c) {
    const auto a = static_cast<std::size_t>(c);
    in.coords[a] = (q.position[c] - scaling_.coord_mean[a]) / scaling_.coord_std[a];
  }
  auto it = std::lower_bound(macs_.begin(), macs_.end(), q.mac);
  if (it != macs_.end() && *it == q.mac) in.active = static_cast<int>(it - macs_.begin());
  return in;
}

double MlpModel::predict(const Query& q) const {
  const MlpInput in = encode(q);
  if (in.active < 0) return scaling_.target_mean;
  return net_.forward(in) * scaling_.target_std + scaling_.target_mean;
}

json MlpModel::state_json() const {
  json macs = json::array();
  for (const auto& m : macs_) macs.push_back(m.to_string());
  return json{{"macs", macs},
              {"coord_mean", scaling_.coord_mean},
              {"coord_std", scaling_.coord_std},
              {"target_mean", scaling_.target_mean},
              {"target_std", scaling_.target_std},
              {"inputs", net_.inputs},
              {"hidden", net_.hidden},
              {"params", net_.params},
              {"epoch_loss", epoch_loss_}};
}

MlpModel fit_mlp(const std::vector<FeatureRow>& train, const EstimatorConfig& config) {
  validate(config);
  if (train.empty()) throw InvalidArgument("MLP: empty training set");
  const auto& mc = config.mlp;

  std::vector<MacAddress> macs;
  for (const auto& r : train) macs.push_back(r.mac);
  std::sort(macs.begin(), macs.end());
  macs.erase(std::unique(macs.begin(), macs.end()), macs.end());

  MlpModel::Scaling sc;
  std::vector<double> targets;
  for (const auto& r : train) targets.push_back(r.target_rssi);
  if (mc.standardize) {
    for (int c = 0; c < 3; ++c) {
      std::vector<double> col;
      for (const auto& r : train) col.push_back(r.position[c]);
      const auto a = static_cast<std::size_t>(c);
      sc.coord_mean[a] = mean(col);
      sc.coord_std[a] = stddev(col, sc.coord_mean[a]);
    }
    sc.target_mean = mean(targets);
    sc.target_std = stddev(targets, sc.target_mean);
  }

  MlpNetwork net = init_network(static_cast<int>(macs.size()) + 3, mc.hidden, mc.seed);
  // Encode once through a throwaway model with the final scaling and MAC list.
  const MlpModel encoder(config, macs, sc, net, {});
  std::vector<MlpInput> x;
  std::vector<double> y;
  for (const auto& r : train) {
    x.push_back(encoder.encode(query_of(r)));
    y.push_back((r.target_rssi - sc.target_mean) / sc.target_std);
  }

  std::vector<double> history{full_loss(net, x, y)};
  if (!std::isfinite(history.back())) throw NumericError("MLP: initial loss is not finite");

  const std::size_t n = x.size();
  const auto batch = static_cast<std::size_t>(mc.batch);
  std::vector<double> m(net.param_count(), 0.0);
  std::vector<double> v(net.param_count(), 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = core::Rng::derive(mc.seed, "mlp-batches");
  std::int64_t step = 0;

  for (int epoch = 0; epoch < mc.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::vector<MlpInput> bx;
      std::vector<double> by;
      for (std::size_t i = start; i < end; ++i) {
        bx.push_back(x[order[i]]);
        by.push_back(y[order[i]]);
      }
      const auto lg = loss_gradient(net, bx, by);
      if (!std::isfinite(lg.loss)) {
        throw NumericError("MLP: non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(step));
      }
      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t p = 0; p < net.params.size(); ++p) {
        m[p] = kBeta1 * m[p] + (1.0 - kBeta1) * lg.gradient[p];
        v[p] = kBeta2 * v[p] + (1.0 - kBeta2) * lg.gradient[p] * lg.gradient[p];
        net.params[p] -= mc.lr * (m[p] / c1) / (std::sqrt(v[p] / c2) + kAdamEps);
      }
    }
    history.push_back(full_loss(net, x, y));
    if (!std::isfinite(history.back())) {
      throw NumericError("MLP: non-finite training loss after epoch " + std::to_string(epoch));
    }
  }
  return MlpModel(config, std::move(macs), sc, std::move(net), std::move(history));
}

}  // namespace remforge::estimators
