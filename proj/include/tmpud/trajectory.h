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

#ifndef TMPUD_TRAJECTORY_H_
#define TMPUD_TRAJECTORY_H_

#include <span>
#include <vector>

#include "tmpud/geometry.h"

namespace tmpud {

struct TrajectorySample {
  double time = 0.0;
  Pose pose;
  double speed = 0.0;
};

// Time-indexed path. Sample times are strictly increasing and speeds are
// non-negative; the constructor throws InvalidArgument otherwise.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<TrajectorySample> samples);

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  std::span<const TrajectorySample> samples() const { return samples_; }
  const TrajectorySample& operator[](std::size_t i) const {
    return samples_[i];
  }
  const TrajectorySample& front() const { return samples_.front(); }
  const TrajectorySample& back() const { return samples_.back(); }

  double start_time() const { return samples_.front().time; }
  double end_time() const { return samples_.back().time; }

  // Sum of straight-line distances between consecutive samples.
  double length() const;

  // Linear interpolation between bracketing samples. Before the first sample
  // the first sample is returned; past the last one the motion continues
  // along the final heading at the final speed.
  TrajectorySample state_at(double time) const;

 private:
  std::vector<TrajectorySample> samples_;
};

}  // namespace tmpud

#endif  // TMPUD_TRAJECTORY_H_
