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

#include "tmpud/geometry.h"

#include <algorithm>
#include <limits>

namespace tmpud {

std::array<Vec2, 4> Footprint::corners() const {
  const Vec2 half_long = center.forward() * (0.5 * length);
  const Vec2 half_lat = center.left() * (0.5 * width);
  const Vec2& c = center.position();
  return {c + half_long + half_lat, c - half_long + half_lat,
          c - half_long - half_lat, c + half_long - half_lat};
}

namespace {

// Projects both rectangles on `axis`; true if the intervals are disjoint.
bool separated_on_axis(const std::array<Vec2, 4>& a,
                       const std::array<Vec2, 4>& b, const Vec2& axis) {
  double a_min = std::numeric_limits<double>::infinity();
  double a_max = -a_min;
  double b_min = a_min;
  double b_max = -a_min;
  for (int i = 0; i < 4; ++i) {
    const double pa = a[i].dot(axis);
    const double pb = b[i].dot(axis);
    a_min = std::min(a_min, pa);
    a_max = std::max(a_max, pa);
    b_min = std::min(b_min, pb);
    b_max = std::max(b_max, pb);
  }
  return a_max < b_min || b_max < a_min;
}

}  // namespace

bool overlaps(const Footprint& a, const Footprint& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const Vec2 axes[4] = {a.center.forward(), a.center.left(), b.center.forward(),
                        b.center.left()};
  for (const Vec2& axis : axes) {
    if (separated_on_axis(ca, cb, axis)) return false;
  }
  return true;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double separation(const Footprint& a, const Footprint& b) {
  if (overlaps(a, b)) return 0.0;
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    const Vec2& a0 = ca[i];
    const Vec2& a1 = ca[(i + 1) % 4];
    const Vec2& b0 = cb[i];
    const Vec2& b1 = cb[(i + 1) % 4];
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, point_segment_distance(cb[j], a0, a1));
      best = std::min(best, point_segment_distance(ca[j], b0, b1));
    }
  }
  return best;
}

bool separated_by(const Footprint& a, const Footprint& b, double margin) {
  const double ra = 0.5 * std::hypot(a.length, a.width);
  const double rb = 0.5 * std::hypot(b.length, b.width);
  const double center_distance =
      (a.center.position() - b.center.position()).norm();
  // The rectangles lie inside their circumscribed circles.
  if (center_distance - ra - rb >= margin) return true;
  return separation(a, b) >= margin;
}

}  // namespace tmpud
