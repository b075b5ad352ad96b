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

#include "remforge/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "remforge/core/error.hpp"

namespace remforge::core {

double euclidean_distance(Vec3 a, Vec3 b) {
  const Vec3 d = a - b;
  return std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
}

double minkowski_distance(Vec3 a, Vec3 b, double p) {
  if (p == 2.0) return euclidean_distance(a, b);
  const Vec3 d = a - b;
  if (p == 1.0) return std::abs(d.x) + std::abs(d.y) + std::abs(d.z);
  const double s = std::pow(std::abs(d.x), p) + std::pow(std::abs(d.y), p) + std::pow(std::abs(d.z), p);
  return std::pow(s, 1.0 / p);
}

bool is_finite(Vec3 p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

Volume Volume::reference() { return Volume({0.0, 0.0, 0.0}, 3.74, 3.20, 2.10); }

Volume::Volume(Vec3 origin, double extent_x, double extent_y, double extent_z)
    : origin_(origin), extent_{extent_x, extent_y, extent_z} {
  if (!is_finite(origin)) throw InvalidArgument("volume origin must be finite");
  for (double e : extent_) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw InvalidArgument("volume extents must be positive, got " + std::to_string(e));
    }
  }
}

double Volume::min_extent() const { return *std::min_element(extent_.begin(), extent_.end()); }

int Volume::longest_axis() const {
  return static_cast<int>(std::max_element(extent_.begin(), extent_.end()) - extent_.begin());
}

bool Volume::contains(Vec3 p, double slack) const {
  for (int a = 0; a < 3; ++a) {
    if (p[a] < origin_[a] - slack || p[a] > origin_[a] + extent(a) + slack) return false;
  }
  return true;
}

bool Volume::strictly_contains(Vec3 p, double margin) const {
  for (int a = 0; a < 3; ++a) {
    if (!(p[a] > origin_[a] + margin && p[a] < origin_[a] + extent(a) - margin)) return false;
  }
  return true;
}

std::array<Vec3, 8> Volume::corners() const {
  std::array<Vec3, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] = {origin_.x + ((i & 1) ? extent_[0] : 0.0),
                                        origin_.y + ((i & 2) ? extent_[1] : 0.0),
                                        origin_.z + ((i & 4) ? extent_[2] : 0.0)};
  }
  return out;
}

std::vector<Anchor> corner_anchors(const Volume& volume) {
  std::vector<Anchor> anchors;
  int id = 0;
  for (const Vec3& c : volume.corners()) anchors.push_back({id++, c});
  return anchors;
}

}  // namespace remforge::core
