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

#ifndef TMPUD_SYMBOLIC_H_
#define TMPUD_SYMBOLIC_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tmpud/road_network.h"

namespace tmpud {

// Segments are one-way; travel against the centerline is not drivable.
enum class Direction : std::uint8_t { kForward, kReverse };

// Task-level state: "the vehicle is in the completion zone of this lane".
struct SymbolicState {
  int segment = 0;
  int lane = 0;
  Direction direction = Direction::kForward;

  LaneRef lane_ref() const { return {segment, lane}; }
  auto operator<=>(const SymbolicState&) const = default;
};

bool is_valid_state(const SymbolicState& s, const RoadNetwork& network);
std::string describe(const SymbolicState& s, const RoadNetwork& network);

// A grounded action: kind plus its source and target states, i.e. one
// transition <s, a, s'>.
struct DrivingAction {
  ActionKind kind = ActionKind::kForward;
  SymbolicState source;
  SymbolicState target;

  auto operator<=>(const DrivingAction&) const = default;
};

std::string describe(const DrivingAction& a, const RoadNetwork& network);

struct DrivingActionHash {
  std::size_t operator()(const DrivingAction& a) const noexcept;
};

// Stable 64-bit key of an action, used to derive per-action seeds.
std::uint64_t action_key(const DrivingAction& a);
std::uint64_t state_key(const SymbolicState& s);

// All grounded actions applicable in `s`, ordered by kind then target.
//
// forward / turnleft / turnright follow a connection of the matching kind
// from the end of s's lane. mergeleft (mergeright) requires a lane on the
// left (right) of s's lane, and changes into the corresponding neighbor of
// the forward successor while traversing it.
std::vector<DrivingAction> successors(const SymbolicState& s,
                                      const RoadNetwork& network);

// True iff some grounding of `kind` is applicable in `s`.
bool action_preconditions(ActionKind kind, const SymbolicState& s,
                          const RoadNetwork& network);

// True iff exactly this grounded action is applicable in its source state.
bool is_applicable(const DrivingAction& a, const RoadNetwork& network);

struct Plan {
  SymbolicState initial;
  std::vector<DrivingAction> steps;

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
  SymbolicState final_state() const {
    return steps.empty() ? initial : steps.back().target;
  }
  bool operator==(const Plan&) const = default;
};

struct PlanValidation {
  bool valid = true;
  std::vector<std::string> diagnostics;
  explicit operator bool() const { return valid; }
};

// Checks the chaining invariant and every step's preconditions.
PlanValidation validate_plan(const Plan& plan, const RoadNetwork& network);

// The feasible pose region of a symbolic state: the lane centerline over the
// final `zone_fraction` of its arc length, oriented along travel.
class PoseRegion {
 public:
  PoseRegion(const Polyline* lane, double arc_begin, double arc_end)
      : lane_(lane), arc_begin_(arc_begin), arc_end_(arc_end) {}

  double arc_begin() const { return arc_begin_; }
  double arc_end() const { return arc_end_; }
  const Polyline& lane() const { return *lane_; }

  Pose at(double arc) const { return lane_->pose_at(arc); }
  // One member of the region, a deterministic function of `seed`.
  Pose sample(std::uint64_t seed) const;
  // Membership with tolerances on arc position, lateral offset and heading.
  bool contains(const Pose& pose, double position_tolerance = 1e-6,
                double heading_tolerance = 1e-6) const;

 private:
  const Polyline* lane_;
  double arc_begin_;
  double arc_end_;
};

inline constexpr double kDefaultCompletionZone = 0.2;

// State mapping function. Throws InfeasibleState when `s` has no pose
// (unknown segment or lane, reverse travel, or a zero-length lane).
PoseRegion map_state(const SymbolicState& s, const RoadNetwork& network,
                     double zone_fraction = kDefaultCompletionZone);

// Convenience: map_state(s).sample(seed).
Pose sample_state_pose(const SymbolicState& s, const RoadNetwork& network,
                       std::uint64_t seed,
                       double zone_fraction = kDefaultCompletionZone);

}  // namespace tmpud

#endif  // TMPUD_SYMBOLIC_H_
