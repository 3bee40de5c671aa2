// Copyright 2026 The TMPUD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TMPUD_GEOMETRY_H_
#define TMPUD_GEOMETRY_H_

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace tmpud {

using Vec2 = Eigen::Vector2d;

// Wraps an angle into [-pi, pi).
inline double normalize_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift for inputs just below -pi.
  if (wrapped >= std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

inline Vec2 heading_vector(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

// Planar vehicle configuration. The heading is kept normalized.
class Pose {
 public:
  Pose() = default;
  Pose(double x, double y, double heading)
      : position_(x, y), heading_(normalize_angle(heading)) {}
  Pose(const Vec2& position, double heading)
      : position_(position), heading_(normalize_angle(heading)) {}

  double x() const { return position_.x(); }
  double y() const { return position_.y(); }
  double heading() const { return heading_; }
  const Vec2& position() const { return position_; }

  Vec2 forward() const { return heading_vector(heading_); }
  // Unit vector pointing to the vehicle's left.
  Vec2 left() const { return {-std::sin(heading_), std::cos(heading_)}; }

  bool is_finite() const {
    return std::isfinite(position_.x()) && std::isfinite(position_.y()) &&
           std::isfinite(heading_);
  }

 private:
  Vec2 position_ = Vec2::Zero();
  double heading_ = 0.0;
};

inline double distance(const Pose& a, const Pose& b) {
  return (a.position() - b.position()).norm();
}

inline double heading_difference(const Pose& a, const Pose& b) {
  return std::abs(normalize_angle(a.heading() - b.heading()));
}

// Oriented rectangle centred on a pose.
struct Footprint {
  Pose center;
  double length = 4.5;
  double width = 1.8;

  std::array<Vec2, 4> corners() const;
  Footprint inflated(double margin) const {
    return {center, length + 2.0 * margin, width + 2.0 * margin};
  }
};

// True iff the two rectangles intersect (touching counts).
bool overlaps(const Footprint& a, const Footprint& b);

// Euclidean gap between two rectangles; zero when they overlap.
double separation(const Footprint& a, const Footprint& b);

// Equivalent to separation(a, b) >= margin, with a bounding-circle shortcut.
bool separated_by(const Footprint& a, const Footprint& b, double margin);

// Distance from point p to segment [a, b].
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace tmpud

#endif  // TMPUD_GEOMETRY_H_
