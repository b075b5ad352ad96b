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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "remforge/core/error.hpp"
#include "remforge/core/geometry.hpp"
#include "remforge/core/io.hpp"
#include "remforge/core/mac.hpp"
#include "remforge/core/rng.hpp"
#include "remforge/core/sample.hpp"

using namespace remforge;
using core::Vec3;

TEST(Distance, IdentityIsZero) { EXPECT_EQ(core::euclidean_distance({0, 0, 0}, {0, 0, 0}), 0.0); }

TEST(Distance, ThreeFourFive) { EXPECT_DOUBLE_EQ(core::euclidean_distance({0, 0, 0}, {3, 4, 0}), 5.0); }

TEST(Distance, HandComputed) {
  // 0.9^2 + 1.2^2 + 0.8^2 = 0.81 + 1.44 + 0.64 = 2.89
  EXPECT_NEAR(core::euclidean_distance({1.1, 2.2, 0.5}, {2.0, 1.0, 1.3}), 1.7, 1e-12);
}

TEST(Distance, TriangleInequalityOnRandomTriples) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  auto pt = [&] { return Vec3{u(gen), u(gen), u(gen)}; };
  for (int i = 0; i < 10000; ++i) {
    const Vec3 a = pt(), b = pt(), c = pt();
    const double ab = core::euclidean_distance(a, b);
    EXPECT_GE(ab, 0.0);
    EXPECT_EQ(ab, core::euclidean_distance(b, a));
    EXPECT_LE(core::euclidean_distance(a, c), ab + core::euclidean_distance(b, c) + 1e-12);
  }
}

TEST(Distance, MinkowskiMatchesDefinition) {
  EXPECT_DOUBLE_EQ(core::minkowski_distance({0, 0, 0}, {1, 2, 3}, 1.0), 6.0);
  EXPECT_NEAR(core::minkowski_distance({0, 0, 0}, {1, 2, 2}, 2.0), 3.0, 1e-12);
  EXPECT_NEAR(core::minkowski_distance({0, 0, 0}, {1, 1, 1}, 3.0), std::cbrt(3.0), 1e-12);
}

TEST(Volume, ReferenceExtents) {
  const auto v = core::Volume::reference();
  EXPECT_EQ(v.extent(0), 3.74);
  EXPECT_EQ(v.extent(1), 3.20);
  EXPECT_EQ(v.extent(2), 2.10);
  EXPECT_EQ(v.longest_axis(), 0);
  EXPECT_TRUE(v.contains({0, 0, 0}));
  EXPECT_FALSE(v.strictly_contains({0, 0, 0}));
  EXPECT_TRUE(v.contains({-0.4, 0, 0}, 0.5));
}

TEST(Volume, RejectsNonPositiveExtent) {
  EXPECT_THROW(core::Volume({0, 0, 0}, 1.0, 0.0, 1.0), InvalidArgument);
}

TEST(Volume, EightCornerAnchors) {
  const auto anchors = core::corner_anchors(core::Volume::reference());
  ASSERT_EQ(anchors.size(), 8u);
  EXPECT_EQ(anchors.back().position, (Vec3{3.74, 3.20, 2.10}));
}

TEST(Mac, NormalizesCase) {
  EXPECT_EQ(core::validate_mac("AA:BB:CC:00:11:22").to_string(), "aa:bb:cc:00:11:22");
}

TEST(Mac, AcceptsBareHex) {
  EXPECT_EQ(core::validate_mac("aabbcc001122").to_string(), "aa:bb:cc:00:11:22");
  EXPECT_EQ(core::validate_mac("aabbcc001122").to_hex(), "aabbcc001122");
}

TEST(Mac, RejectsBadInput) {
  EXPECT_THROW(core::validate_mac("zz:bb:cc:00:11:22"), InvalidArgument);
  EXPECT_THROW(core::validate_mac("aa:bb:cc:00:11"), InvalidArgument);
  EXPECT_THROW(core::validate_mac("aabbcc00112"), InvalidArgument);
  EXPECT_THROW(core::validate_mac("aa-bb-cc-00-11-22"), InvalidArgument);
  EXPECT_THROW(core::validate_mac(""), InvalidArgument);
}

TEST(Mac, OrderMatchesTextOrder) {
  std::mt19937_64 gen(3);
  for (int i = 0; i < 1000; ++i) {
    const core::MacAddress a(gen()), b(gen());
    EXPECT_EQ(a < b, a.to_string() < b.to_string());
  }
}

TEST(Rng, SameSeedSameStream) {
  core::Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DerivedStreamsDiffer) {
  auto a = core::Rng::derive(9, "x", 0);
  auto b = core::Rng::derive(9, "x", 1);
  auto c = core::Rng::derive(9, "y", 0);
  const auto va = a.next_u64();
  EXPECT_NE(va, b.next_u64());
  EXPECT_NE(va, c.next_u64());
}

TEST(Rng, UniformInUnitInterval) {
  core::Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  core::Rng r(5);
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, BelowStaysInRange) {
  core::Rng r(2);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = r.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(Io, FormatDoubleRoundTrips) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 10000; ++i) {
    double v;
    const std::uint64_t bits = gen();
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    EXPECT_EQ(core::parse_double(core::format_double(v)), v);
  }
  EXPECT_EQ(core::format_double(0.25), "0.25");
}

TEST(Io, ParseDoubleIsStrict) {
  EXPECT_THROW(core::parse_double("1.5x"), ParseError);
  EXPECT_THROW(core::parse_double(""), ParseError);
  EXPECT_EQ(core::parse_double("-3"), -3.0);
}

TEST(Io, AtomicWriteCreatesDirectoriesAndLeavesNoTemp) {
  const auto dir = std::filesystem::temp_directory_path() / "remforge_io_test";
  std::filesystem::remove_all(dir);
  core::atomic_write(dir / "a" / "b.txt", "hello");
  EXPECT_EQ(core::read_file(dir / "a" / "b.txt"), "hello");
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "a")) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1);
  std::filesystem::remove_all(dir);
}

TEST(Sample, QuantizeRoundsHalfAwayAndClamps) {
  EXPECT_EQ(core::quantize_rssi(-72.5), -73);
  EXPECT_EQ(core::quantize_rssi(-72.4), -72);
  EXPECT_EQ(core::quantize_rssi(-130.0), -100);
  EXPECT_EQ(core::quantize_rssi(3.0), 0);
}

namespace {

core::BeaconSample sample_fixture() {
  core::BeaconSample s;
  s.uav_id = "A";
  s.seq = 7;
  s.t_ms = 12345;
  s.est_position = {1.25, 0.1 + 0.2, 1.0 / 3.0};
  s.ssid = "home \"net\"";
  s.mac = core::validate_mac("aa:bb:cc:00:11:22");
  s.channel = 6;
  s.rssi_dbm = -71;
  return s;
}

}  // namespace

TEST(Sample, ValidateChecksRanges) {
  const auto vol = core::Volume::reference();
  auto s = sample_fixture();
  EXPECT_NO_THROW(core::validate_sample(s, vol));
  s.channel = 14;
  EXPECT_THROW(core::validate_sample(s, vol), InvalidArgument);
  s = sample_fixture();
  s.rssi_dbm = 1;
  EXPECT_THROW(core::validate_sample(s, vol), InvalidArgument);
  s = sample_fixture();
  s.est_position = {-0.6, 1, 1};
  EXPECT_THROW(core::validate_sample(s, vol), InvalidArgument);
  s.est_position = {-0.4, 1, 1};
  EXPECT_NO_THROW(core::validate_sample(s, vol));
}

TEST(Sample, WaypointMustBeStrictlyInside) {
  const auto vol = core::Volume::reference();
  EXPECT_NO_THROW(core::validate_waypoint({{1, 1, 1}}, vol));
  EXPECT_THROW(core::validate_waypoint({{0, 1, 1}}, vol), InvalidArgument);
  EXPECT_THROW(core::validate_waypoint({{1, 1, 1}, 0.0, 4.0}, vol), InvalidArgument);
}

TEST(Sample, JsonlKeyOrder) {
  const auto line = core::to_jsonl_line(sample_fixture());
  const char* keys[] = {"uav_id", "seq", "t_ms", "est_x", "est_y", "est_z", "ssid", "mac", "channel", "rssi_dbm"};
  std::size_t pos = 0;
  for (const char* k : keys) {
    const auto at = line.find(std::string("\"") + k + "\"", pos);
    ASSERT_NE(at, std::string::npos) << k;
    pos = at;
  }
  EXPECT_NE(line.find("\"aabbcc001122\""), std::string::npos);
}

TEST(Sample, JsonlRoundTrip) {
  const auto s = sample_fixture();
  EXPECT_EQ(core::parse_jsonl_line(core::to_jsonl_line(s)), s);
}

TEST(Sample, ReaderAcceptsAnyKeyOrder) {
  const std::string line =
      R"({"rssi_dbm":-50,"channel":1,"mac":"AA:BB:CC:00:11:22","ssid":"x","est_z":1,"est_y":0.5,"est_x":2,"t_ms":3,"seq":1,"uav_id":"B"})";
  const auto s = core::parse_jsonl_line(line);
  EXPECT_EQ(s.uav_id, "B");
  EXPECT_EQ(s.mac.to_string(), "aa:bb:cc:00:11:22");
  EXPECT_EQ(s.est_position, (Vec3{2, 0.5, 1}));
}

TEST(Sample, ReaderRejectsBadRecords) {
  EXPECT_THROW(core::parse_jsonl_line("{"), ParseError);
  EXPECT_THROW(core::parse_jsonl_line("[]"), ParseError);
  auto line = core::to_jsonl_line(sample_fixture());
  EXPECT_THROW(core::parse_jsonl_line(line.replace(line.find("\"channel\":6"), 11, "\"channel\":0")), ParseError);
}

TEST(SampleLog, EmptyText) {
  const auto log = core::parse_sample_log("");
  EXPECT_TRUE(log.samples.empty());
  EXPECT_TRUE(log.diagnostics.empty());
}

TEST(SampleLog, OneCorruptLineOfHundred) {
  std::string text;
  auto s = sample_fixture();
  for (int i = 0; i < 100; ++i) {
    s.seq = i;
    text += (i == 41 ? std::string("{not json") : core::to_jsonl_line(s)) + "\n";
  }
  const auto log = core::parse_sample_log(text);
  EXPECT_EQ(log.samples.size(), 99u);
  ASSERT_EQ(log.diagnostics.size(), 1u);
  EXPECT_EQ(log.diagnostics[0].line, 42u);
}

TEST(SampleLog, TwoCorruptLinesOfHundredAbort) {
  std::string text;
  for (int i = 0; i < 100; ++i) text += (i < 2 ? std::string("garbage") : core::to_jsonl_line(sample_fixture())) + "\n";
  EXPECT_THROW(core::parse_sample_log(text), ParseError);
}

TEST(SampleLog, RandomizedRoundTripIsBitExact) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-0.5, 4.0);
  std::vector<core::BeaconSample> samples;
  for (int i = 0; i < 1000; ++i) {
    core::BeaconSample s;
    s.uav_id = i % 2 ? "A" : "B";
    s.seq = i;
    s.t_ms = static_cast<std::int64_t>(gen() % 1000000);
    s.est_position = {u(gen), u(gen), u(gen)};
    s.ssid = "ssid-" + std::to_string(gen() % 50);
    s.mac = core::MacAddress(gen());
    s.channel = 1 + static_cast<int>(gen() % 13);
    s.rssi_dbm = -static_cast<int>(gen() % 101);
    samples.push_back(s);
  }
  const auto path = std::filesystem::temp_directory_path() / "remforge_core_roundtrip.jsonl";
  core::write_sample_log(path, samples);
  const auto log = core::parse_sample_log(core::read_file(path));
  std::filesystem::remove(path);
  EXPECT_TRUE(log.diagnostics.empty());
  EXPECT_EQ(log.samples, samples);
}
