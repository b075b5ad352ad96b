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

#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace remforge::core {

/// A point or displacement in the experiment frame, meters.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr double& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

double euclidean_distance(Vec3 a, Vec3 b);

/// Minkowski-p distance between two points (p >= 1).
double minkowski_distance(Vec3 a, Vec3 b, double p);

bool is_finite(Vec3 p);

/// Axis-aligned box; the flight and mapping volume.
class Volume {
 public:
  /// The living-room cuboid used in the reference deployment: 3.74 x 3.20 x 2.10 m.
  static Volume reference();

  Volume(Vec3 origin, double extent_x, double extent_y, double extent_z);

  Vec3 origin() const { return origin_; }
  double extent(int axis) const { return extent_[static_cast<std::size_t>(axis)]; }
  Vec3 extents() const { return {extent_[0], extent_[1], extent_[2]}; }
  Vec3 max_corner() const { return origin_ + extents(); }
  Vec3 center() const { return origin_ + 0.5 * extents(); }
  double min_extent() const;
  int longest_axis() const;

  /// Closed containment with optional slack added on every face.
  bool contains(Vec3 p, double slack = 0.0) const;
  /// Open containment: strictly inside after insetting every face by `margin`.
  bool strictly_contains(Vec3 p, double margin = 0.0) const;

  /// The eight corners, x varying fastest.
  std::array<Vec3, 8> corners() const;

  friend bool operator==(const Volume&, const Volume&) = default;

 private:
  Vec3 origin_;
  std::array<double, 3> extent_;
};

struct Anchor {
  int id = 0;
  Vec3 position;
};

/// One anchor at each corner of the volume.
std::vector<Anchor> corner_anchors(const Volume& volume);

}  // namespace remforge::core
