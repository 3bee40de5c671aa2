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

#include "tmpud/trajectory.h"

#include <algorithm>
#include <string>

#include "tmpud/errors.h"

namespace tmpud {

Trajectory::Trajectory(std::vector<TrajectorySample> samples)
    : samples_(std::move(samples)) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!s.pose.is_finite() || !std::isfinite(s.time)) {
      throw InvalidArgument("trajectory sample " + std::to_string(i) +
                            " is not finite");
    }
    if (s.speed < 0.0) {
      throw InvalidArgument("trajectory sample " + std::to_string(i) +
                            " has negative speed");
    }
    if (i > 0 && !(s.time > samples_[i - 1].time)) {
      throw InvalidArgument("trajectory times must be strictly increasing (" +
                            std::to_string(i) + ")");
    }
  }
}

double Trajectory::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    total += distance(samples_[i - 1].pose, samples_[i].pose);
  }
  return total;
}

TrajectorySample Trajectory::state_at(double time) const {
  if (samples_.empty()) throw InvalidArgument("empty trajectory");
  if (time <= samples_.front().time) return samples_.front();
  if (time >= samples_.back().time) {
    const auto& last = samples_.back();
    const double dt = time - last.time;
    return {time,
            Pose(last.pose.position() + last.pose.forward() * (last.speed * dt),
                 last.pose.heading()),
            last.speed};
  }
  const auto it = std::upper_bound(
      samples_.begin(), samples_.end(), time,
      [](double t, const TrajectorySample& s) { return t < s.time; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (time - a.time) / (b.time - a.time);
  const Vec2 p = (1.0 - w) * a.pose.position() + w * b.pose.position();
  const double h =
      a.pose.heading() + w * normalize_angle(b.pose.heading() - a.pose.heading());
  return {time, Pose(p, h), (1.0 - w) * a.speed + w * b.speed};
}

}  // namespace tmpud
