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

#include "tmpud/traffic.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmpud/errors.h"

namespace tmpud {

double idm_acceleration(double speed, double desired_speed, std::optional<double> gap,
                        double dv, const TrafficParameters& p) {
  double a = p.idm_max_accel * (1.0 - std::pow(speed / desired_speed, 4));
  if (gap) {
    const double wanted =
        p.idm_min_gap +
        std::max(0.0, speed * p.idm_headway +
                          speed * dv / (2.0 * std::sqrt(p.idm_max_accel * p.idm_comfort_decel)));
    const double s = std::max(*gap, 0.1);
    a -= p.idm_max_accel * (wanted / s) * (wanted / s);
  }
  return std::max(a, -p.max_brake);
}

TrafficWorld::TrafficWorld(const RoadNetwork& network, TrafficParameters params,
                           std::uint64_t seed, ControllerGains gains,
                           ControlEnvelope envelope)
    : network_(&network), params_(params), gains_(gains), envelope_(envelope),
      rng_(seed) {
  if (!(params_.dt > 0.0)) throw InvalidArgument("traffic time step must be positive");
}

int TrafficWorld::add_vehicle(const LaneRef& lane, double arc, double speed) {
  if (!network_->has_lane(lane)) throw InvalidArgument("vehicle spawned on a missing lane");
  Vehicle v;
  v.lane = lane;
  v.arc = arc;
  v.state.speed = std::max(0.0, speed);
  v.state.id = next_id_++;
  v.perturbation = rng_.uniform(-params_.accel_range, params_.accel_range);
  v.next_draw = time_ + params_.accel_period;
  v.state.pose = network_->centerline(lane).pose_at(arc);
  vehicles_.push_back(v);
  return v.state.id;
}

VehicleState TrafficWorld::observe(const Vehicle& v) const {
  VehicleState s = v.state;
  // Turn rate from the centerline heading change just ahead.
  const Polyline& line = network_->centerline(v.lane);
  const double a0 = std::min(v.arc, line.length());
  const double a1 = std::min(a0 + 1.0, line.length());
  if (a1 > a0) {
    const double dh = normalize_angle(line.pose_at(a1).heading() - line.pose_at(a0).heading());
    s.yaw_rate = dh / (a1 - a0) * s.speed;
  } else {
    s.yaw_rate = 0.0;
  }
  return s;
}

std::vector<VehicleState> TrafficWorld::surrounding() const {
  std::vector<VehicleState> out;
  for (const Vehicle& v : vehicles_) {
    if (v.active) out.push_back(observe(v));
  }
  return out;
}

std::optional<std::pair<double, double>> TrafficWorld::leader_of(const VehicleState& from,
                                                                 int self) const {
  std::optional<std::pair<double, double>> best;
  auto consider = [&](const VehicleState& other) {
    const Vec2 d = other.pose.position() - from.pose.position();
    const double lon = d.dot(from.pose.forward());
    const double lat = d.dot(from.pose.left());
    if (lon <= 0.0 || std::abs(lat) >= params_.lateral_band) return;
    const double gap = lon - 0.5 * (from.length + other.length);
    const double closing =
        from.speed - other.speed * std::cos(other.pose.heading() - from.pose.heading());
    if (!best || gap < best->first) best = std::make_pair(gap, closing);
  };
  if (self != -1) consider(ego_);
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (static_cast<int>(i) == self || !vehicles_[i].active) continue;
    consider(vehicles_[i].state);
  }
  return best;
}

void TrafficWorld::step(double dt, const ControlSignal& ego_control, bool* stop_seen) {
  // Accelerations from the current snapshot, then integrate everyone.
  std::vector<double> accel(vehicles_.size(), 0.0);
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    Vehicle& v = vehicles_[i];
    if (!v.active) continue;
    if (time_ >= v.next_draw) {
      v.perturbation = rng_.uniform(-params_.accel_range, params_.accel_range);
      v.next_draw += params_.accel_period;
    }
    double a = v.perturbation;
    if ((v.state.speed >= params_.max_speed && a > 0.0) ||
        (v.state.speed <= params_.min_speed && a < 0.0)) {
      a = 0.0;
    }
    const auto lead = leader_of(v.state, static_cast<int>(i));
    if (lead) {
      a = std::min(a, idm_acceleration(v.state.speed, params_.max_speed, lead->first,
                                       lead->second, params_));
    }
    accel[i] = a;
  }
  ego_ = simulate_vehicle(ego_, ego_control, dt, envelope_);

  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    Vehicle& v = vehicles_[i];
    if (!v.active) continue;
    const double v0 = v.state.speed;
    const double v1 = std::max(0.0, v0 + accel[i] * dt);
    v.arc += 0.5 * (v0 + v1) * dt;
    v.state.speed = v1;
    for (double len = network_->centerline(v.lane).length(); v.active && v.arc > len;
         len = network_->centerline(v.lane).length()) {
      const auto next = network_->outgoing(v.lane);
      if (next.empty()) {
        v.active = false;
        break;
      }
      auto it = std::find_if(next.begin(), next.end(), [](const Connection& c) {
        return c.action == ActionKind::kForward;
      });
      v.arc -= len;
      v.lane = (it != next.end() ? *it : next.front()).to;
    }
    if (!v.active) continue;
    v.state.pose = network_->centerline(v.lane).pose_at(v.arc);
    if (v1 < params_.stop_speed) {
      v.slow_time += dt;
      if (v.slow_time >= params_.stop_duration - 1e-9 && stop_seen) *stop_seen = true;
    } else {
      v.slow_time = 0.0;
    }
  }
  time_ += dt;
}

ExecutionOutcome TrafficWorld::execute(const Trajectory& plan, const Pose& goal,
                                       double timeout) {
  ExecutionOutcome out;
  PidTracker tracker(gains_, envelope_);
  const double start = time_;
  bool stop_seen = false;
  auto at_goal = [&] {
    return distance(ego_.pose, goal) <= kGoalPositionTolerance &&
           heading_difference(ego_.pose, goal) <= kGoalHeadingTolerance;
  };
  while (true) {
    if (at_goal()) {
      out.completed = true;
      break;
    }
    if (time_ - start >= timeout) {
      out.timed_out = true;
      break;
    }
    ControlSignal u = tracker.track_step(ego_, plan, params_.dt);
    const auto lead = leader_of(ego_, -1);
    if (lead) {
      u.acceleration = std::min(
          u.acceleration, idm_acceleration(ego_.speed, gains_.target_speed * 1.2,
                                           lead->first, lead->second, params_));
    }
    const Vec2 before = ego_.pose.position();
    step(params_.dt, u, &stop_seen);
    out.distance += (ego_.pose.position() - before).norm();
    const Footprint ego_fp = ego_.footprint();
    const bool hit = std::any_of(vehicles_.begin(), vehicles_.end(), [&](const Vehicle& v) {
      return v.active && overlaps(ego_fp, v.state.footprint());
    });
    if (hit) {
      out.collision = true;
      break;
    }
  }
  out.forced_stops = stop_seen ? 1 : 0;
  out.duration = time_ - start;
  return out;
}

}  // namespace tmpud
