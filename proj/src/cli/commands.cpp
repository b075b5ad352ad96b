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
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "remforge/cli.hpp"
#include "remforge/core/error.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/dataset.hpp"
#include "remforge/evalrem.hpp"
#include "remforge/mission.hpp"

namespace remforge::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_json(const fs::path& path, const json& j) { core::atomic_write(path, j.dump(2) + "\n"); }

void snapshot(const RunConfig& c, const std::string& name) {
  write_json(c.out / (name + ".config.json"), to_json(c));
}

fs::path require(const RunConfig& c, const std::string& file, const std::string& producer) {
  const fs::path p = c.out / file;
  if (!fs::exists(p)) {
    throw Error("missing " + p.string() + "; run `remforge " + producer + "` with the same --out first");
  }
  return p;
}

json read_json(const fs::path& p) {
  try {
    return json::parse(core::read_file(p));
  } catch (const json::exception& e) {
    throw ParseError(p.string() + ": " + e.what());
  }
}

radioenv::RadioEnvironment load_env(const RunConfig& c) {
  return radioenv::environment_from_json(read_json(require(c, "environment.json", "gen-env")));
}

dataset::FeatureSet load_features(const RunConfig& c) {
  return dataset::features_from_csv(core::read_file(require(c, "features.csv", "preprocess")));
}

fleetsim::SimConfig sim_config(const RunConfig& c) {
  fleetsim::SimConfig sc;
  sc.protocol = c.protocol;
  sc.battery = c.battery;
  sc.localization = c.localization;
  return sc;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

// The estimator line-up shared by train and eval.
std::vector<std::pair<std::string, estimators::EstimatorConfig>> lineup(const RunConfig& c,
                                                                        const estimators::EstimatorConfig& best) {
  auto refs = estimators::reference_configs();
  refs[4].mlp = c.mlp;
  return {{"baseline", refs[0]}, {"knn_best", best}, {"knn_k16_factor3", refs[2]}, {"knn_per_mac", refs[3]},
          {"mlp", refs[4]}};
}

estimators::EstimatorConfig load_best(const RunConfig& c) {
  return estimators::config_from_json(read_json(require(c, "train.json", "train")).at("best"));
}

}  // namespace

void cmd_gen_env(const RunConfig& c) {
  radioenv::RadioEnvironment env;
  const std::uint64_t seed = core::mix64(stage_seed(c.seed, "env") ^ c.scenario.master_seed);
  env.aps = radioenv::generate_environment(c.scenario, c.volume, seed);
  env.propagation = c.scenario.propagation;
  write_json(c.out / "environment.json", radioenv::to_json(env));
  snapshot(c, "gen-env");
  std::cout << "gen-env: " << env.aps.size() << " access points\n";
}

void cmd_plan(const RunConfig& c) {
  const auto wps = mission::plan_waypoints(c.volume, c.waypoints, c.margin_m, c.protocol.scan_duration_ms / 1000.0);
  for (const auto& w : wps) core::validate_waypoint(w, c.volume);
  const auto plan = mission::partition_plan(wps, c.uavs, c.partition_axis, 0.0);
  write_json(c.out / "plan.json", mission::to_json(plan));
  snapshot(c, "plan");
  std::cout << "plan: " << plan.waypoint_count() << " waypoints for " << plan.per_uav.size() << " UAVs\n";
}

void cmd_fly(const RunConfig& c) {
  const auto env = load_env(c);
  const auto plan = mission::plan_from_json(read_json(require(c, "plan.json", "plan")));
  const auto result = mission::run_campaign(plan, {sim_config(c)}, env, stage_seed(c.seed, "fly"));
  core::atomic_write(c.out / "samples.jsonl", core::to_jsonl(result.samples));
  write_json(c.out / "campaign.json", mission::to_json(result.report));
  core::atomic_write(c.out / "per_waypoint.csv", mission::per_waypoint_csv(result.report));
  snapshot(c, "fly");
  std::cout << "fly: " << result.report.total_samples << " samples\n";
  for (const auto& m : result.report.missions) {
    std::cout << "  " << m.uav_id << ": " << m.scans_completed << " scans, active "
              << core::format_double(m.active_time_ms / 1000.0) << " s" << (m.aborted ? ", aborted: " : "")
              << m.abort_reason << "\n";
  }
}

void cmd_preprocess(const RunConfig& c) {
  const auto log = dataset::load_samples(require(c, "samples.jsonl", "fly"));
  for (const auto& d : log.diagnostics) std::cerr << "samples.jsonl:" << d.line << ": " << d.message << "\n";
  const auto res = dataset::preprocess(log.samples, c.drop_threshold);
  core::atomic_write(c.out / "features.csv", dataset::to_csv(res.features));
  json retained = json::array();
  json dropped = json::array();
  for (const auto& m : res.report.retained_macs) retained.push_back(m.to_string());
  for (const auto& m : res.report.dropped_macs) dropped.push_back(m.to_string());
  write_json(c.out / "preprocess.json", {{"input_count", res.report.input_count},
                                         {"retained_count", res.report.retained_count},
                                         {"dropped_count", res.report.dropped_count},
                                         {"drop_threshold", res.report.drop_threshold},
                                         {"malformed_lines", log.diagnostics.size()},
                                         {"retained_macs", retained},
                                         {"dropped_macs", dropped}});
  snapshot(c, "preprocess");
  std::cout << "preprocess: " << res.report.retained_count << " of " << res.report.input_count << " samples kept, "
            << res.report.retained_macs.size() << " MACs\n";
}

void cmd_train(const RunConfig& c) {
  const auto features = load_features(c);
  const auto outer = dataset::split(features.rows, c.train_fraction, stage_seed(c.seed, "split"));
  const auto inner = dataset::split(outer.train, c.train_fraction, stage_seed(c.seed, "validation"));
  const auto gs = estimators::grid_search(inner.train, inner.test, estimators::parse_grid(c.grid));

  std::ostringstream csv;
  csv << "estimator,k,weights,p,factor,val_rmse_dbm\n";
  json table = json::array();
  double best_rmse = 0.0;
  for (const auto& cell : gs.table) {
    csv << '"' << cell.config.label() << "\"," << cell.config.k << ',' << estimators::to_string(cell.config.weights)
        << ',' << core::format_double(cell.config.minkowski_p) << ',' << core::format_double(cell.config.onehot_factor)
        << ',' << (cell.error.empty() ? core::format_double(cell.rmse) : "nan") << '\n';
    table.push_back({{"config", estimators::to_json(cell.config)},
                     {"val_rmse_dbm", cell.error.empty() ? json(cell.rmse) : json(nullptr)},
                     {"error", cell.error}});
    if (cell.config == gs.best) best_rmse = cell.rmse;
  }
  core::atomic_write(c.out / "grid_search.csv", csv.str());

  json models = json::array();
  for (const auto& [role, config] : lineup(c, gs.best)) {
    models.push_back({{"role", role}, {"estimator", estimators::to_json(*estimators::fit(config, outer.train))}});
  }
  write_json(c.out / "models.json", {{"train_n", outer.train.size()}, {"models", models}});
  write_json(c.out / "train.json", {{"best", estimators::to_json(gs.best)},
                                    {"best_val_rmse_dbm", best_rmse},
                                    {"train_n", inner.train.size()},
                                    {"val_n", inner.test.size()},
                                    {"grid", table}});
  snapshot(c, "train");
  std::cout << "train: best " << gs.best.label() << " (validation RMSE " << core::format_double(best_rmse)
            << " dBm)\n";
}

void cmd_eval(const RunConfig& c) {
  const auto features = load_features(c);
  std::vector<estimators::EstimatorConfig> configs;
  for (const auto& [role, config] : lineup(c, load_best(c))) {
    if (std::find(configs.begin(), configs.end(), config) == configs.end()) configs.push_back(config);
  }
  const auto report =
      evalrem::compare_estimators(features.rows, configs, stage_seed(c.seed, "split"), c.train_fraction);
  core::atomic_write(c.out / "eval.csv", evalrem::to_csv(report));
  write_json(c.out / "eval.json", evalrem::to_json(report));
  snapshot(c, "eval");
  std::cout << "eval:\n";
  for (const auto& r : report.rows) {
    std::cout << "  " << r.estimator << ": "
              << (r.error.empty() ? core::format_double(r.rmse_dbm) + " dBm" : "failed: " + r.error) << "\n";
  }
}

void cmd_rem(const RunConfig& c) {
  const auto features = load_features(c);
  const auto env = load_env(c);
  const auto models = read_json(require(c, "models.json", "train"));
  std::unique_ptr<estimators::FittedEstimator> knn;
  std::unique_ptr<estimators::FittedEstimator> baseline;
  for (const auto& m : models.at("models")) {
    const auto role = m.at("role").get<std::string>();
    if (role == "knn_best") knn = estimators::estimator_from_json(m.at("estimator"));
    if (role == "baseline") baseline = estimators::estimator_from_json(m.at("estimator"));
  }
  if (!knn || !baseline) throw Error("models.json lacks the knn_best or baseline model; rerun `remforge train`");

  const auto hash = dataset::rows_hash(features.rows);
  const auto grid = evalrem::generate_rem(*knn, c.volume, c.resolution_m, features.macs, baseline.get(), hash);
  const auto base_grid = evalrem::generate_rem(*baseline, c.volume, c.resolution_m, features.macs, nullptr, hash);
  evalrem::write_rem(c.out, grid);

  const auto fk = evalrem::rem_fidelity(grid, env);
  const auto fb = evalrem::rem_fidelity(base_grid, env);
  std::ostringstream csv;
  csv << "estimator,mac,rmse_dbm\n";
  for (const auto* f : {&fk, &fb}) {
    const std::string label = f == &fk ? grid.estimator : base_grid.estimator;
    for (const auto& [mac, r] : f->per_mac) csv << '"' << label << "\"," << mac.to_string() << ',' << core::format_double(r) << '\n';
    csv << '"' << label << "\",all," << core::format_double(f->aggregate_rmse) << '\n';
  }
  core::atomic_write(c.out / "fidelity.csv", csv.str());
  write_json(c.out / "fidelity.json", {{"dataset_hash", hex64(hash)},
                                       {"resolution_m", c.resolution_m},
                                       {"dims", grid.dims},
                                       {"knn", {{"estimator", grid.estimator}, {"rmse_dbm", fk.aggregate_rmse}}},
                                       {"baseline", {{"estimator", base_grid.estimator}, {"rmse_dbm", fb.aggregate_rmse}}}});
  snapshot(c, "rem");
  std::cout << "rem: " << grid.dims[0] << "x" << grid.dims[1] << "x" << grid.dims[2] << " voxels x " << grid.macs.size()
            << " MACs; fidelity " << core::format_double(fk.aggregate_rmse) << " dBm (baseline "
            << core::format_double(fb.aggregate_rmse) << ")\n";
}

void cmd_interference(const RunConfig& c) {
  const auto env = load_env(c);
  const auto table = radioenv::interference_experiment(env.aps, c.volume.center(), env.propagation, {},
                                                       radioenv::default_sweep_frequencies(), c.interference_scans,
                                                       stage_seed(c.seed, "interference"));
  core::atomic_write(c.out / "interference.csv", table.to_csv());
  snapshot(c, "interference");
  std::cout << "interference: " << c.interference_scans << " scans per frequency\n";
}

void cmd_endurance(const RunConfig& c) {
  const auto env = load_env(c);
  const auto report =
      fleetsim::run_endurance(sim_config(c), {}, env, c.volume.center(), stage_seed(c.seed, "endurance"));
  write_json(c.out / "endurance.json", fleetsim::to_json(report));
  snapshot(c, "endurance");
  std::cout << "endurance: " << report.scans_completed << " scans, reserve reached at "
            << core::format_double(report.depletion_ms / 1000.0) << " s\n";
}

void cmd_e2e(const RunConfig& c) {
  cmd_gen_env(c);
  cmd_plan(c);
  cmd_fly(c);
  cmd_preprocess(c);
  cmd_train(c);
  cmd_eval(c);
  cmd_rem(c);
  snapshot(c, "e2e");
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  const RunConfig defaults;
  CLI::App app{"remforge: UAV Wi-Fi survey simulation and radio environment map toolchain"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::uint64_t seed = defaults.seed;
  std::string out = defaults.out.string();
  std::string volume = "3.74x3.2x2.1";
  int waypoints = defaults.waypoints;
  int uavs = defaults.uavs;
  double resolution = defaults.resolution_m;
  std::string grid = defaults.grid;
  int scans = defaults.interference_scans;

  struct Sub {
    const char* name;
    const char* help;
    void (*fn)(const RunConfig&);
  };
  const Sub subs[] = {
      {"gen-env", "Generate the synthetic access-point population (environment.json)", cmd_gen_env},
      {"plan", "Plan waypoints and split them across UAVs (plan.json)", cmd_plan},
      {"fly", "Simulate the survey campaign (samples.jsonl, campaign.json)", cmd_fly},
      {"preprocess", "Drop rare MACs and build the feature matrix (features.csv)", cmd_preprocess},
      {"train", "Grid-search kNN and fit all estimators (models.json, train.json)", cmd_train},
      {"eval", "Compare estimators on a held-out split (eval.csv, eval.json)", cmd_eval},
      {"rem", "Export the voxel REM and its fidelity (rem.csv, rem.json, fidelity.csv)", cmd_rem},
      {"interference", "Detections per channel versus control-radio frequency (interference.csv)",
       cmd_interference},
      {"endurance", "Hover-and-scan battery endurance run (endurance.json)", cmd_endurance},
      {"e2e", "gen-env, plan, fly, preprocess, train, eval and rem in sequence", cmd_e2e},
  };

  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_option("--seed", seed, "Master seed (falls back to $REMFORGE_SEED)")->capture_default_str();
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--volume", volume, "Flight volume LxWxH in meters")->capture_default_str();
    sub->add_option("--waypoints", waypoints, "Total waypoint count")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--uavs", uavs, "Number of UAVs")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--resolution", resolution, "REM voxel edge in meters")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--grid", grid, "kNN grid, e.g. k=1,3;weights=uniform,distance;p=1,2;factor=1,3")
        ->capture_default_str();
    if (std::string(s.name) == "interference") {
      sub->add_option("--scans", scans, "Scans per radio frequency")->capture_default_str()->check(CLI::PositiveNumber);
    }
    handles.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (std::size_t i = 0; i < handles.size(); ++i) {
    auto* sub = handles[i];
    if (!sub->parsed()) continue;
    try {
      RunConfig c;
      if (const char* env = std::getenv("REMFORGE_SEED"); env && *env) {
        const std::string_view sv(env);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
        if (ec != std::errc() || ptr != sv.data() + sv.size()) throw InvalidArgument("REMFORGE_SEED is not an integer");
        c.seed = v;
      }
      if (sub->count("--config")) c = apply_json(c, read_json(config_path));
      if (sub->count("--seed")) c.seed = seed;
      if (sub->count("--out")) c.out = out;
      if (sub->count("--volume")) c.volume = parse_volume(volume);
      if (sub->count("--waypoints")) c.waypoints = waypoints;
      if (sub->count("--uavs")) c.uavs = uavs;
      if (sub->count("--resolution")) c.resolution_m = resolution;
      if (sub->count("--grid")) c.grid = grid;
      if (auto* o = sub->get_option_no_throw("--scans"); o && o->count()) c.interference_scans = scans;
      subs[i].fn(c);
    } catch (const std::exception& e) {
      std::cerr << "remforge " << subs[i].name << ": error: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace remforge::cli
