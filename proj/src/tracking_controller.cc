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

#include "tmpud/tracking_controller.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmpud/errors.h"

namespace tmpud {
namespace {

bool nonneg(const PidGains& g) { return g.kp >= 0.0 && g.ki >= 0.0 && g.kd >= 0.0; }

// Point at arc length `s` along the sample polyline; extends the last
// segment's heading past the end.
Vec2 point_at_arc(std::span<const TrajectorySample> samples, double s) {
  if (samples.size() == 1) {
    return samples[0].pose.position() + s * samples[0].pose.forward();
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const Vec2 a = samples[i].pose.position();
    const Vec2 b = samples[i + 1].pose.position();
    const double len = (b - a).norm();
    if (len > 0.0 && (s <= acc + len || i + 2 == samples.size())) {
      return a + (b - a) * ((s - acc) / len);
    }
    acc += len;
  }
  return samples.back().pose.position() +
         (s - acc) * samples.back().pose.forward();
}

}  // namespace

bool ControllerGains::is_valid() const {
  return nonneg(steering) && nonneg(speed) && target_speed > 0.0 &&
         cross_track_weight >= 0.0 && lookahead_base >= 0.0 && lookahead_time >= 0.0;
}

TrackingError tracking_error(const VehicleState& v, const Trajectory& path,
                             double lookahead) {
  if (path.empty()) throw InvalidArgument("trajectory is empty");
  const auto samples = path.samples();
  const Vec2 p = v.pose.position();

  TrackingError err;
  double best = std::numeric_limits<double>::infinity();
  Vec2 tangent = samples[0].pose.forward();
  if (samples.size() == 1) {
    const Vec2 d = p - samples[0].pose.position();
    err.progress = d.dot(tangent);
    err.cross_track = tangent.x() * d.y() - tangent.y() * d.x();
  } else {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      const Vec2 a = samples[i].pose.position();
      const Vec2 b = samples[i + 1].pose.position();
      const double len = (b - a).norm();
      if (len <= 0.0) continue;
      const Vec2 t = (b - a) / len;
      double u = (p - a).dot(t);
      // The first and last segments extend indefinitely.
      const bool first = i == 0;
      const bool last = i + 2 == samples.size();
      const double lo = first ? -std::numeric_limits<double>::infinity() : 0.0;
      const double hi = last ? std::numeric_limits<double>::infinity() : len;
      u = std::clamp(u, lo, hi);
      const double dist = (p - (a + u * t)).norm();
      if (dist < best) {
        best = dist;
        tangent = t;
        err.progress = acc + u;
        const Vec2 d = p - a;
        err.cross_track = t.x() * d.y() - t.y() * d.x();
      }
      acc += len;
    }
  }

  const Vec2 target = point_at_arc(samples, err.progress + lookahead);
  const Vec2 to_target = target - p;
  const double bearing = to_target.norm() > 1e-9
                             ? std::atan2(to_target.y(), to_target.x())
                             : std::atan2(tangent.y(), tangent.x());
  err.heading = normalize_angle(bearing - v.pose.heading());
  return err;
}

PidTracker::PidTracker(ControllerGains gains, ControlEnvelope envelope)
    : gains_(gains), envelope_(envelope) {
  if (!gains_.is_valid()) throw InvalidArgument("controller gains must be non-negative");
  if (!envelope_.is_valid()) throw InvalidArgument("control envelope is empty");
}

void PidTracker::reset() {
  steer_integral_ = 0.0;
  speed_integral_ = 0.0;
  last_steer_error_.reset();
  last_speed_error_.reset();
}

ControlSignal PidTracker::track_step(const VehicleState& v, const Trajectory& trajectory,
                                     double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (trajectory.empty()) throw InvalidArgument("trajectory is empty");

  const double lookahead =
      gains_.lookahead_base + gains_.lookahead_time * std::max(v.speed, 0.0);
  const TrackingError te = tracking_error(v, trajectory, lookahead);

  // Left of the path means cross_track > 0, which must steer right (< 0).
  const double e_steer = te.heading - gains_.cross_track_weight * te.cross_track;
  const double e_speed = gains_.target_speed - v.speed;

  const double d_steer = last_steer_error_ ? (e_steer - *last_steer_error_) / dt : 0.0;
  const double d_speed = last_speed_error_ ? (e_speed - *last_speed_error_) / dt : 0.0;
  last_steer_error_ = e_steer;
  last_speed_error_ = e_speed;

  const PidGains& gs = gains_.steering;
  const PidGains& ga = gains_.speed;
  const double steer_i = steer_integral_ + e_steer * dt;
  const double speed_i = speed_integral_ + e_speed * dt;
  const double raw_steer = gs.kp * e_steer + gs.ki * steer_i + gs.kd * d_steer;
  const double raw_accel = ga.kp * e_speed + ga.ki * speed_i + ga.kd * d_speed;

  // Conditional integration: freeze an integrator while its output saturates
  // in the direction of the error.
  const ControlSignal out = envelope_.clamp({raw_accel, raw_steer});
  if (out.steering == raw_steer || (raw_steer > out.steering) != (e_steer > 0.0)) {
    steer_integral_ = steer_i;
  }
  if (out.acceleration == raw_accel || (raw_accel > out.acceleration) != (e_speed > 0.0)) {
    speed_integral_ = speed_i;
  }
  return out;
}

}  // namespace tmpud
