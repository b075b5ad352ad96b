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
#include <sstream>

#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/estimators.hpp"

namespace remforge::estimators {

using nlohmann::json;

std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::BaselineMean: return "baseline";
    case EstimatorKind::KnnGlobal: return "knn_global";
    case EstimatorKind::KnnPerMac: return "knn_per_mac";
    case EstimatorKind::Mlp: return "mlp";
  }
  return "unknown";
}

std::string to_string(Weights w) { return w == Weights::Uniform ? "uniform" : "distance"; }

namespace {

EstimatorKind kind_from_string(const std::string& s) {
  if (s == "baseline") return EstimatorKind::BaselineMean;
  if (s == "knn_global") return EstimatorKind::KnnGlobal;
  if (s == "knn_per_mac") return EstimatorKind::KnnPerMac;
  if (s == "mlp") return EstimatorKind::Mlp;
  throw ParseError("unknown estimator kind '" + s + "'");
}

Weights weights_from_string(const std::string& s) {
  if (s == "uniform") return Weights::Uniform;
  if (s == "distance") return Weights::Distance;
  throw ParseError("unknown weights '" + s + "'");
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string EstimatorConfig::label() const {
  std::ostringstream out;
  out << to_string(kind);
  switch (kind) {
    case EstimatorKind::BaselineMean:
      break;
    case EstimatorKind::KnnGlobal:
      out << "(k=" << k << ',' << to_string(weights) << ",p=" << core::format_double(minkowski_p)
          << ",factor=" << core::format_double(onehot_factor) << ')';
      break;
    case EstimatorKind::KnnPerMac:
      out << "(k=" << k << ',' << to_string(weights) << ",p=" << core::format_double(minkowski_p) << ')';
      break;
    case EstimatorKind::Mlp:
      out << "(hidden=" << mlp.hidden << ",epochs=" << mlp.epochs << ')';
      break;
  }
  return out.str();
}

void validate(const EstimatorConfig& c) {
  if (c.k < 1) throw InvalidArgument("k must be >= 1");
  if (!(c.minkowski_p >= 1.0) || !std::isfinite(c.minkowski_p)) throw InvalidArgument("minkowski_p must be >= 1");
  if (!(c.onehot_factor > 0.0) || !std::isfinite(c.onehot_factor)) {
    throw InvalidArgument("onehot_factor must be positive");
  }
  if (c.mlp.hidden < 1) throw InvalidArgument("mlp.hidden must be >= 1");
  if (c.mlp.epochs < 0) throw InvalidArgument("mlp.epochs must be >= 0");
  if (c.mlp.batch < 1) throw InvalidArgument("mlp.batch must be >= 1");
  if (!(c.mlp.lr > 0.0)) throw InvalidArgument("mlp.lr must be positive");
}

json to_json(const EstimatorConfig& c) {
  return json{{"kind", to_string(c.kind)},
              {"k", c.k},
              {"weights", to_string(c.weights)},
              {"minkowski_p", c.minkowski_p},
              {"onehot_factor", c.onehot_factor},
              {"mlp",
               {{"hidden", c.mlp.hidden},
                {"hidden_activation", "sigmoid"},
                {"output_activation", "linear"},
                {"optimizer", "adam"},
                {"lr", c.mlp.lr},
                {"epochs", c.mlp.epochs},
                {"batch", c.mlp.batch},
                {"seed", c.mlp.seed},
                {"standardize", c.mlp.standardize}}}};
}

EstimatorConfig config_from_json(const json& j) {
  EstimatorConfig c;
  try {
    c.kind = kind_from_string(j.at("kind").get<std::string>());
    c.k = j.value("k", c.k);
    if (j.contains("weights")) c.weights = weights_from_string(j.at("weights").get<std::string>());
    c.minkowski_p = j.value("minkowski_p", c.minkowski_p);
    c.onehot_factor = j.value("onehot_factor", c.onehot_factor);
    if (j.contains("mlp")) {
      const auto& m = j.at("mlp");
      c.mlp.hidden = m.value("hidden", c.mlp.hidden);
      c.mlp.lr = m.value("lr", c.mlp.lr);
      c.mlp.epochs = m.value("epochs", c.mlp.epochs);
      c.mlp.batch = m.value("batch", c.mlp.batch);
      c.mlp.seed = m.value("seed", c.mlp.seed);
      c.mlp.standardize = m.value("standardize", c.mlp.standardize);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("estimator config: ") + e.what());
  }
  validate(c);
  return c;
}

std::vector<EstimatorConfig> reference_configs() {
  EstimatorConfig baseline;
  baseline.kind = EstimatorKind::BaselineMean;

  EstimatorConfig knn3;
  knn3.kind = EstimatorKind::KnnGlobal;
  knn3.k = 3;

  EstimatorConfig knn16 = knn3;
  knn16.k = 16;
  knn16.onehot_factor = 3.0;

  EstimatorConfig per_mac = knn3;
  per_mac.kind = EstimatorKind::KnnPerMac;

  EstimatorConfig mlp;
  mlp.kind = EstimatorKind::Mlp;

  return {baseline, knn3, knn16, per_mac, mlp};
}

std::vector<EstimatorConfig> parse_grid(const std::string& spec) {
  EstimatorConfig base;
  base.kind = EstimatorKind::KnnGlobal;
  std::vector<int> ks{base.k};
  std::vector<Weights> ws{base.weights};
  std::vector<double> ps{base.minkowski_p};
  std::vector<double> fs{base.onehot_factor};

  for (const auto& part : split_on(spec, ';')) {
    const auto item = trim(part);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("grid entry '" + item + "' is not key=values");
    const auto key = trim(item.substr(0, eq));
    const auto values = split_on(item.substr(eq + 1), ',');
    if (values.empty()) throw InvalidArgument("grid key '" + key + "' has no values");
    if (key == "k") {
      ks.clear();
      for (const auto& v : values) {
        const double d = core::parse_double(trim(v));
        if (d != std::floor(d)) throw InvalidArgument("k must be an integer");
        ks.push_back(static_cast<int>(d));
      }
    } else if (key == "weights") {
      ws.clear();
      for (const auto& v : values) ws.push_back(weights_from_string(trim(v)));
    } else if (key == "p") {
      ps.clear();
      for (const auto& v : values) ps.push_back(core::parse_double(trim(v)));
    } else if (key == "factor") {
      fs.clear();
      for (const auto& v : values) fs.push_back(core::parse_double(trim(v)));
    } else {
      throw InvalidArgument("unknown grid key '" + key + "' (expected k, weights, p, factor)");
    }
  }

  std::vector<EstimatorConfig> grid;
  for (double f : fs) {
    for (int k : ks) {
      for (Weights w : ws) {
        for (double p : ps) {
          EstimatorConfig c = base;
          c.k = k;
          c.weights = w;
          c.minkowski_p = p;
          c.onehot_factor = f;
          validate(c);
          grid.push_back(c);
        }
      }
    }
  }
  return grid;
}

}  // namespace remforge::estimators
