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

#include "tmpud/vehicle.h"

#include <cmath>

#include "tmpud/errors.h"

namespace tmpud {

VehicleState simulate_vehicle(const VehicleState& v, const ControlSignal& u,
                              double dt, const ControlEnvelope& envelope) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  const ControlSignal c = envelope.clamp(u);

  const double v0 = v.speed;
  double v1 = v0 + c.acceleration * dt;
  double travelled;
  if (v1 < 0.0) {
    // Decelerates to a standstill inside the step.
    travelled = c.acceleration < 0.0 ? v0 * v0 / (-2.0 * c.acceleration) : 0.0;
    v1 = 0.0;
  } else {
    travelled = 0.5 * (v0 + v1) * dt;
  }

  const double curvature = std::tan(c.steering) / v.wheelbase();
  const double h0 = v.pose.heading();
  const double turn = curvature * travelled;
  Vec2 p = v.pose.position();
  if (std::abs(turn) < 1e-9) {
    p += travelled * heading_vector(h0 + 0.5 * turn);
  } else {
    p += Vec2(std::sin(h0 + turn) - std::sin(h0), std::cos(h0) - std::cos(h0 + turn)) /
         curvature;
  }

  VehicleState next = v;
  next.pose = Pose(p, h0 + turn);
  next.speed = v1;
  next.yaw_rate = dt > 0.0 ? turn / dt : 0.0;
  return next;
}

}  // namespace tmpud
