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

#include "remforge/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace remforge::core {

namespace {

double box_muller(std::uint64_t a, std::uint64_t b) {
  const double u1 = 1.0 - unit_interval(a);  // (0, 1]
  const double u2 = unit_interval(b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Rng Rng::derive(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return Rng(mix64(seed) ^ mix64(fnv1a64(tag) + index));
}

double Rng::normal() {
  const std::uint64_t a = engine_();
  const std::uint64_t b = engine_();
  return box_muller(a, b);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Reject the incomplete top bucket so the modulo is unbiased.
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double hashed_normal(std::uint64_t key) {
  return box_muller(mix64(key), mix64(key ^ 0xD1B54A32D192ED03ULL));
}

}  // namespace remforge::core
