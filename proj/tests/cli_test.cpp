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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "campaign_fixture.hpp"
#include "remforge/cli.hpp"
#include "remforge/core/io.hpp"

using namespace remforge;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) { return cli::run(args); }

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(core::read_file(p)); }

const std::vector<std::string> kSmallRun = {"--waypoints", "18", "--grid", "k=1,3;weights=distance;p=2;factor=1",
                                            "--resolution", "0.5"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST(Cli, E2eIsByteIdentical) {
  const auto a = fixture::scratch_dir("cli_e2e_a");
  const auto b = fixture::scratch_dir("cli_e2e_b");
  ASSERT_EQ(run_cli(with({"e2e", "--seed", "7", "--out", a.string()}, kSmallRun)), 0);
  ASSERT_EQ(run_cli(with({"e2e", "--seed", "7", "--out", b.string()}, kSmallRun)), 0);
  const auto ta = fixture::read_tree(a);
  const auto tb = fixture::read_tree(b);
  for (const char* f : {"environment.json", "plan.json", "samples.jsonl", "features.csv", "models.json", "eval.csv",
                        "rem.csv", "rem.json", "fidelity.csv", "e2e.config.json"}) {
    EXPECT_TRUE(ta.count(f)) << f;
  }
  EXPECT_EQ(ta, tb);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, StagesComposeLikeE2e) {
  const auto a = fixture::scratch_dir("cli_stages");
  const auto b = fixture::scratch_dir("cli_stages_e2e");
  for (const char* stage : {"gen-env", "plan", "fly", "preprocess", "train", "eval", "rem"}) {
    ASSERT_EQ(run_cli(with({stage, "--seed", "3", "--out", a.string()}, kSmallRun)), 0) << stage;
  }
  ASSERT_EQ(run_cli(with({"e2e", "--seed", "3", "--out", b.string()}, kSmallRun)), 0);
  auto ta = fixture::read_tree(a);
  auto tb = fixture::read_tree(b);
  tb.erase("e2e.config.json");
  EXPECT_EQ(ta, tb);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, MissingArtifactNamesProducer) {
  const auto dir = fixture::scratch_dir("cli_missing");
  ::testing::internal::CaptureStderr();
  const int code = run_cli({"fly", "--out", dir.string()});
  const std::string err = ::testing::internal::GetCapturedStderr();
  EXPECT_NE(code, 0);
  EXPECT_NE(err.find("environment.json"), std::string::npos) << err;
  EXPECT_NE(err.find("remforge gen-env"), std::string::npos) << err;
  EXPECT_FALSE(fs::exists(dir / "samples.jsonl"));
  EXPECT_FALSE(fs::exists(dir / "fly.config.json"));
  fs::remove_all(dir);
}

TEST(Cli, InterferenceSevenFrequencies) {
  const auto dir = fixture::scratch_dir("cli_interference");
  ASSERT_EQ(run_cli({"gen-env", "--out", dir.string()}), 0);
  ASSERT_EQ(run_cli({"interference", "--scans", "3", "--out", dir.string()}), 0);
  std::istringstream csv(core::read_file(dir / "interference.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "radio_freq,channel,mean_ap_count");
  std::set<std::string> freqs;
  int rows = 0;
  while (std::getline(csv, line)) {
    freqs.insert(line.substr(0, line.find(',')));
    ++rows;
  }
  EXPECT_EQ(freqs, (std::set<std::string>{"off", "2400", "2425", "2450", "2475", "2500", "2525"}));
  EXPECT_EQ(rows, 7 * 13);
  EXPECT_EQ(read_json(dir / "interference.config.json").at("interference_scans"), 3);
  fs::remove_all(dir);
}

TEST(Cli, EnduranceReport) {
  const auto dir = fixture::scratch_dir("cli_endurance");
  ASSERT_EQ(run_cli({"gen-env", "--out", dir.string()}), 0);
  ASSERT_EQ(run_cli({"endurance", "--out", dir.string()}), 0);
  const auto j = read_json(dir / "endurance.json");
  EXPECT_NEAR(j.at("scans_completed").get<int>(), 36, 1);
  EXPECT_NEAR(j.at("depletion_s").get<double>(), 372.0, 1.0);
  fs::remove_all(dir);
}

TEST(Cli, HelpListsEveryFlag) {
  for (const char* sub : {"gen-env", "plan", "fly", "preprocess", "train", "eval", "rem", "interference", "endurance",
                          "e2e"}) {
    ::testing::internal::CaptureStdout();
    const int code = run_cli({sub, "--help"});
    const std::string out = ::testing::internal::GetCapturedStdout();
    EXPECT_EQ(code, 0);
    for (const char* flag : {"--config", "--seed", "--out", "--volume", "--waypoints", "--uavs", "--resolution",
                             "--grid"}) {
      EXPECT_NE(out.find(flag), std::string::npos) << sub << " " << flag;
    }
    EXPECT_NE(out.find("72"), std::string::npos) << sub;
  }
}

TEST(Cli, SeedPrecedence) {
  const auto dir = fixture::scratch_dir("cli_seed");
  core::atomic_write(dir / "cfg.json", R"({"seed": 5, "waypoints": 24})");
  ::setenv("REMFORGE_SEED", "9", 1);
  ASSERT_EQ(run_cli({"plan", "--out", dir.string()}), 0);
  EXPECT_EQ(read_json(dir / "plan.config.json").at("seed"), 9);
  ASSERT_EQ(run_cli({"plan", "--config", (dir / "cfg.json").string(), "--out", dir.string()}), 0);
  EXPECT_EQ(read_json(dir / "plan.config.json").at("seed"), 5);
  EXPECT_EQ(read_json(dir / "plan.config.json").at("waypoints"), 24);
  ASSERT_EQ(run_cli({"plan", "--config", (dir / "cfg.json").string(), "--seed", "6", "--out", dir.string()}), 0);
  EXPECT_EQ(read_json(dir / "plan.config.json").at("seed"), 6);
  ::unsetenv("REMFORGE_SEED");
  fs::remove_all(dir);
}

TEST(Cli, BadArgumentsFail) {
  ::testing::internal::CaptureStderr();
  EXPECT_NE(run_cli({}), 0);
  EXPECT_NE(run_cli({"fly", "--waypoints", "-3"}), 0);
  EXPECT_NE(run_cli({"plan", "--volume", "3x2", "--out", fixture::scratch_dir("cli_bad").string()}), 0);
  ::testing::internal::GetCapturedStderr();
}
