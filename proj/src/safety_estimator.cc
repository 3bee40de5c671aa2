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

#include "tmpud/safety_estimator.h"

#include <algorithm>
#include <cmath>

#include "tmpud/errors.h"

namespace tmpud {

void SafetyParameters::validate() const {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (!(interval > 0.0) || interval > horizon) {
    throw InvalidArgument("interval must lie in (0, horizon]");
  }
  if (samples < 1) throw InvalidArgument("sample count must be at least 1");
  if (!(safe_distance >= 0.0)) throw InvalidArgument("safe distance must be non-negative");
  if (!(sensing_radius >= 0.0)) throw InvalidArgument("sensing radius must be non-negative");
  if (!envelope.is_valid()) throw InvalidArgument("control envelope is empty");
}

int SafetyParameters::time_steps() const {
  return static_cast<int>(std::floor(horizon / interval + 1e-9)) + 1;
}

VehicleState predict_state(const VehicleState& v, double dt) {
  const double rate = v.yaw_rate.value_or(0.0);
  const double h0 = v.pose.heading();
  const double d = v.speed * dt;
  Vec2 p = v.pose.position();
  if (std::abs(rate) < 1e-12) {
    p += d * heading_vector(h0);
  } else {
    const double r = v.speed / rate;
    const double h1 = h0 + rate * dt;
    p += r * Vec2(std::sin(h1) - std::sin(h0), std::cos(h0) - std::cos(h1));
  }
  VehicleState out = v;
  out.pose = Pose(p, h0 + rate * dt);
  return out;
}

Trajectory predict_surrounding(const VehicleState& v, double t1, double t2,
                               double interval) {
  if (!(interval > 0.0) || !(t2 >= t1)) throw InvalidArgument("invalid prediction horizon");
  const int steps = static_cast<int>(std::floor((t2 - t1) / interval + 1e-9));
  std::vector<TrajectorySample> samples;
  samples.reserve(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    const VehicleState s = predict_state(v, k * interval);
    samples.push_back({t1 + k * interval, s.pose, s.speed});
  }
  return Trajectory(std::move(samples));
}

SafeControlSet::SafeControlSet(const VehicleState& ego_at_t, double t,
                               const VehicleState& other, double other_time,
                               double interval, int checks, double safe_distance,
                               const ControlEnvelope& envelope)
    : ego_(ego_at_t), t_(t), interval_(interval), safe_distance_(safe_distance),
      envelope_(envelope) {
  if (!(interval > 0.0)) throw InvalidArgument("interval must be positive");
  checks = std::max(checks, 1);
  others_.reserve(checks);
  for (int j = 1; j <= checks; ++j) {
    others_.push_back(predict_state(other, t + j * interval - other_time).footprint());
  }
}

bool SafeControlSet::contains(const ControlSignal& u) const {
  VehicleState e = ego_;
  for (const Footprint& other : others_) {
    e = simulate_vehicle(e, u, interval_, envelope_);
    if (!separated_by(e.footprint(), other, safe_distance_)) return false;
  }
  return true;
}

double aggregate_over_time(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("no per-instant safety values");
  double max = 0.0;
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("safety value outside [0, 1]");
    max = std::max(max, v);
    sum += v;
  }
  return 0.5 * (max + sum / static_cast<double>(values.size()));
}

SafetyEstimate estimate_safety(const SafetyQuery& query, const RoadNetwork& network,
                               const PathPlanner& planner) {
  const SafetyParameters& p = query.params;
  p.validate();
  SafetyEstimate out;

  const PoseRegion source = map_state(query.action.source, network);
  const PoseRegion target = map_state(query.action.target, network);
  const Pose x = source.contains(query.ego.pose, kRegionTolerance, 0.5)
                     ? query.ego.pose
                     : source.sample(derive_seed({query.seed, 1}));
  const Pose x_goal = target.sample(derive_seed({query.seed, 2}));

  const double t1 = query.time;
  const double t2 = t1 + p.horizon;
  try {
    out.ego_plan = plan_for_action(planner, network, query.action, x, x_goal,
                                   query.obstacles, t1);
  } catch (const NoPath&) {
    out.value = 0.0;
    out.motion_infeasible = true;
    return out;
  }

  const int steps = p.time_steps();
  for (const VehicleState& other : query.surrounding) {
    if (distance(other.pose, query.ego.pose) > p.sensing_radius) continue;
    VehicleSafety vs;
    vs.id = other.id;
    vs.per_time.reserve(steps);
    for (int k = 0; k < steps; ++k) {
      const double t = t1 + k * p.interval;
      const TrajectorySample s = out.ego_plan.state_at(t);
      VehicleState ego = query.ego;
      ego.pose = s.pose;
      ego.speed = s.speed;
      const int checks =
          std::max(1, static_cast<int>(std::floor((t2 - t) / p.interval + 1e-9)));
      const SafeControlSet set(ego, t, other, t1, p.interval, checks, p.safe_distance,
                               p.envelope);
      vs.per_time.push_back(safe_probability(
          set, p.envelope, p.samples,
          derive_seed({query.seed, static_cast<std::uint64_t>(other.id),
                       static_cast<std::uint64_t>(k)})));
    }
    vs.aggregated = aggregate_over_time(vs.per_time);
    out.value = std::min(out.value, vs.aggregated);
    out.vehicles.push_back(std::move(vs));
  }
  return out;
}

}  // namespace tmpud
