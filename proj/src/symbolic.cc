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

#include "tmpud/symbolic.h"

#include <algorithm>

#include "tmpud/errors.h"
#include "tmpud/rng.h"

namespace tmpud {

bool is_valid_state(const SymbolicState& s, const RoadNetwork& network) {
  return s.direction == Direction::kForward && network.has_lane(s.lane_ref());
}

std::string describe(const SymbolicState& s, const RoadNetwork& network) {
  std::string seg = (s.segment >= 0 && s.segment < network.segment_count())
                        ? network.segment(s.segment).id
                        : "#" + std::to_string(s.segment);
  return seg + ":" + std::to_string(s.lane) +
         (s.direction == Direction::kReverse ? "r" : "");
}

std::string describe(const DrivingAction& a, const RoadNetwork& network) {
  return std::string(to_string(a.kind)) + "(" + describe(a.source, network) +
         " -> " + describe(a.target, network) + ")";
}

std::uint64_t state_key(const SymbolicState& s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.segment)) << 24) ^
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.lane)) << 4) ^
         static_cast<std::uint64_t>(s.direction);
}

std::uint64_t action_key(const DrivingAction& a) {
  return derive_seed({static_cast<std::uint64_t>(a.kind), state_key(a.source),
                      state_key(a.target)});
}

std::size_t DrivingActionHash::operator()(const DrivingAction& a) const noexcept {
  return static_cast<std::size_t>(action_key(a));
}

std::vector<DrivingAction> successors(const SymbolicState& s,
                                      const RoadNetwork& network) {
  std::vector<DrivingAction> out;
  if (!is_valid_state(s, network)) return out;
  const LaneRef here = s.lane_ref();
  const std::vector<Connection> exits = network.outgoing(here);
  auto to_state = [](const LaneRef& l) {
    return SymbolicState{l.segment, l.lane, Direction::kForward};
  };
  for (const Connection& c : exits) {
    out.push_back({c.action, s, to_state(c.to)});
  }
  const bool has_left = network.left_of(here).has_value();
  const bool has_right = network.right_of(here).has_value();
  for (const Connection& c : exits) {
    if (c.action != ActionKind::kForward) continue;
    if (has_left) {
      if (auto l = network.left_of(c.to)) {
        out.push_back({ActionKind::kMergeLeft, s, to_state(*l)});
      }
    }
    if (has_right) {
      if (auto r = network.right_of(c.to)) {
        out.push_back({ActionKind::kMergeRight, s, to_state(*r)});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool action_preconditions(ActionKind kind, const SymbolicState& s,
                          const RoadNetwork& network) {
  const auto succ = successors(s, network);
  return std::any_of(succ.begin(), succ.end(),
                     [kind](const DrivingAction& a) { return a.kind == kind; });
}

bool is_applicable(const DrivingAction& a, const RoadNetwork& network) {
  const auto succ = successors(a.source, network);
  return std::find(succ.begin(), succ.end(), a) != succ.end();
}

PlanValidation validate_plan(const Plan& plan, const RoadNetwork& network) {
  PlanValidation result;
  auto fail = [&result](std::string msg) {
    result.valid = false;
    result.diagnostics.push_back(std::move(msg));
  };
  if (plan.steps.empty()) return result;
  if (!is_valid_state(plan.initial, network)) {
    fail("initial state " + describe(plan.initial, network) + " is not valid");
  }
  SymbolicState current = plan.initial;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const DrivingAction& a = plan.steps[i];
    const std::string where = "step " + std::to_string(i) + " " + describe(a, network);
    if (a.source != current) {
      fail(where + ": source does not chain from " + describe(current, network));
    }
    if (!is_valid_state(a.source, network)) {
      fail(where + ": source state is not valid");
    } else if (!action_preconditions(a.kind, a.source, network)) {
      fail(where + ": preconditions of " + std::string(to_string(a.kind)) +
           " do not hold");
    } else if (!is_applicable(a, network)) {
      fail(where + ": target is not reachable by this action");
    }
    current = a.target;
  }
  return result;
}

Pose PoseRegion::sample(std::uint64_t seed) const {
  Rng rng(mix_seed(seed));
  return at(rng.uniform(arc_begin_, arc_end_));
}

bool PoseRegion::contains(const Pose& pose, double position_tolerance,
                          double heading_tolerance) const {
  double lateral = 0.0;
  const double arc = lane_->project(pose.position(), &lateral);
  if (arc < arc_begin_ - position_tolerance || arc > arc_end_ + position_tolerance) {
    return false;
  }
  if (std::abs(lateral) > position_tolerance) return false;
  return heading_difference(pose, lane_->pose_at(arc)) <= heading_tolerance;
}

PoseRegion map_state(const SymbolicState& s, const RoadNetwork& network,
                     double zone_fraction) {
  if (!network.has_lane(s.lane_ref())) {
    throw InfeasibleState("state " + describe(s, network) +
                          " references a missing segment or lane");
  }
  if (s.direction != Direction::kForward) {
    throw InfeasibleState("state " + describe(s, network) +
                          " travels against a one-way segment");
  }
  const Polyline& lane = network.centerline(s.lane_ref());
  const double length = lane.length();
  if (!(length > 0.0)) {
    throw InfeasibleState("state " + describe(s, network) + " has a zero-length lane");
  }
  const double zone = std::clamp(zone_fraction, 0.0, 1.0);
  return PoseRegion(&lane, length * (1.0 - zone), length);
}

Pose sample_state_pose(const SymbolicState& s, const RoadNetwork& network,
                       std::uint64_t seed, double zone_fraction) {
  return map_state(s, network, zone_fraction).sample(seed);
}

}  // namespace tmpud
