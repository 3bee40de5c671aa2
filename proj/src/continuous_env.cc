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

#include "tmpud/continuous_env.h"

#include <cmath>
#include <vector>

#include "tmpud/errors.h"
#include "tmpud/rng.h"

namespace tmpud {

ContinuousEnvironment::ContinuousEnvironment(const RoadNetwork& network,
                                             const SymbolicState& initial,
                                             DomainFactors factors, std::uint64_t seed,
                                             ContinuousOptions options)
    : network_(&network),
      planner_(network),
      factors_(factors),
      seed_(seed),
      options_(options),
      world_(network,
             [&] {
               TrafficParameters t = options.traffic;
               t.accel_range = factors.acceleration_range();
               return t;
             }(),
             derive_seed({seed, 3}), options.gains, options.estimator.envelope),
      state_(initial) {
  if (!is_valid_state(initial, network)) {
    throw InvalidArgument("initial state " + describe(initial, network) + " does not exist");
  }
  options_.estimator.validate();
  VehicleState ego;
  ego.id = 0;
  ego.pose = sample_state_pose(initial, network, derive_seed({seed, 4}));
  ego.speed = options.gains.target_speed;
  world_.set_ego(ego);
  respawn();
}

void ContinuousEnvironment::respawn() {
  Rng rng(derive_seed({seed_, 5, draws_++}));
  world_.clear_traffic();
  const LaneRef ego_lane = state_.lane_ref();
  const double ego_arc = network_->centerline(ego_lane).project(world_.ego().pose.position());
  const int lanes = network_->lane_count(state_.segment);
  struct Slot {
    int lane;
    double arc;
  };
  std::vector<Slot> taken{{ego_lane.lane, ego_arc}};
  const TrafficParameters& t = world_.params();
  for (int n = 0; n < factors_.vehicle_count(); ++n) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const int lane = static_cast<int>(rng.next() % static_cast<std::uint64_t>(lanes));
      const double arc = ego_arc + rng.uniform(-options_.spawn_window, options_.spawn_window);
      const double speed = rng.uniform(t.spawn_min_speed, t.spawn_max_speed);
      const LaneRef ref{state_.segment, lane};
      if (arc < 0.0 || arc > network_->centerline(ref).length() - 1.0) continue;
      bool clear = true;
      for (const Slot& s : taken) {
        if (s.lane == lane && std::abs(s.arc - arc) < options_.spawn_spacing) clear = false;
      }
      if (!clear) continue;
      taken.push_back({lane, arc});
      world_.add_vehicle(ref, arc, speed);
      break;
    }
  }
}

double ContinuousEnvironment::transition_cost(const DrivingAction& action) {
  if (auto it = costs_.find(action); it != costs_.end()) return it->second;
  double cost = kInfeasibleCost;
  try {
    const Pose from = sample_state_pose(action.source, *network_, derive_seed({seed_, 6}));
    const Pose to = sample_state_pose(action.target, *network_, derive_seed({seed_, 6}));
    cost = plan_for_action(planner_, *network_, action, from, to).length();
  } catch (const NoPath&) {
  }
  costs_.emplace(action, cost);
  return cost;
}

SafetyEstimate ContinuousEnvironment::estimate(const DrivingAction& action) {
  SafetyQuery query;
  query.action = action;
  query.ego = world_.ego();
  query.surrounding = world_.surrounding();
  query.time = world_.now();
  query.params = options_.estimator;
  query.seed = derive_seed({seed_, action_key(action), draws_});
  return tmpud::estimate_safety(query, *network_, planner_);
}

SafetyReport ContinuousEnvironment::estimate_safety(const DrivingAction& action) {
  const SafetyEstimate e = estimate(action);
  if (e.motion_infeasible) return {0.0, kInfeasibleCost};
  // Cost stays the A* length between the state-keyed poses; the live ego
  // pose only shapes the executed trajectory.
  return {e.value, transition_cost(action)};
}

ActionReport ContinuousEnvironment::execute(const DrivingAction& action) {
  if (action.source != state_) {
    throw InvalidArgument("action " + describe(action, *network_) + " does not start in " +
                          describe(state_, *network_));
  }
  ActionReport r;
  const SafetyEstimate e = estimate(action);
  if (e.motion_infeasible) {
    r.completed = false;
    r.detail = "no motion plan";
    return r;
  }
  // Completion is judged against the pose the motion plan was built for.
  const Pose goal = e.ego_plan.back().pose;
  const double timeout = 3.0 * (e.ego_plan.end_time() - e.ego_plan.start_time()) + 30.0;
  const ExecutionOutcome run = world_.execute(e.ego_plan, goal, timeout);
  r.forced_stops = run.forced_stops;
  r.distance = run.distance;
  if (run.collision) {
    r.completed = false;
    r.collision = true;
    r.detail = "collide";
    return r;
  }
  if (!run.completed) {
    r.completed = false;
    r.detail = "timed out";
    return r;
  }
  r.detail = run.forced_stops > 0 ? "stop" : "success";
  state_ = action.target;
  respawn();
  return r;
}

void ContinuousEnvironment::wait() {
  idle_ += 1.0;
  respawn();
}

}  // namespace tmpud
