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

#ifndef TMPUD_VEHICLE_H_
#define TMPUD_VEHICLE_H_

#include <algorithm>
#include <optional>

#include "tmpud/geometry.h"

namespace tmpud {

inline constexpr double kDefaultTargetSpeed = 20.0 / 3.6;  // 20 km/h

struct VehicleState {
  Pose pose;
  double speed = 0.0;
  double length = 4.5;
  double width = 1.8;
  // Observed turn rate (rad/s); prediction treats a missing value as zero.
  std::optional<double> yaw_rate;
  int id = 0;

  double wheelbase() const { return 0.6 * length; }
  Footprint footprint() const { return {pose, length, width}; }
};

// Acceleration (m/s^2) and steering angle (rad, positive turns left).
struct ControlSignal {
  double acceleration = 0.0;
  double steering = 0.0;
};

// The controller's operation specification, Delta x Theta.
struct ControlEnvelope {
  double min_acceleration = -4.0;
  double max_acceleration = 3.0;
  double min_steering = -0.6;
  double max_steering = 0.6;

  bool contains(const ControlSignal& u) const {
    return u.acceleration >= min_acceleration && u.acceleration <= max_acceleration &&
           u.steering >= min_steering && u.steering <= max_steering;
  }
  ControlSignal clamp(const ControlSignal& u) const {
    return {std::clamp(u.acceleration, min_acceleration, max_acceleration),
            std::clamp(u.steering, min_steering, max_steering)};
  }
  bool is_valid() const {
    return min_acceleration <= max_acceleration && min_steering <= max_steering;
  }
};

// Kinematic bicycle step with wheelbase 0.6 * length. The control is
// clamped to `envelope` and held constant over `dt`; the step is integrated
// exactly (the path is a circular arc of curvature tan(steering)/wheelbase)
// and speed saturates at zero. Throws InvalidArgument if dt <= 0.
VehicleState simulate_vehicle(const VehicleState& v, const ControlSignal& u,
                              double dt, const ControlEnvelope& envelope = {});

}  // namespace tmpud

#endif  // TMPUD_VEHICLE_H_
