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

#ifndef TMPUD_PATH_PLANNER_H_
#define TMPUD_PATH_PLANNER_H_

#include <span>
#include <vector>

#include "tmpud/road_network.h"
#include "tmpud/symbolic.h"
#include "tmpud/trajectory.h"
#include "tmpud/vehicle.h"

namespace tmpud {

struct PathPlannerOptions {
  double step = 1.0;                 // centerline discretization (m)
  double lane_change_length = 10.0;  // longitudinal run of a lane change (m)
  double inflation = 0.3;            // footprint margin against obstacles (m)
  double vehicle_length = 4.5;
  double vehicle_width = 1.8;
  double target_speed = kDefaultTargetSpeed;
};

// Lane-aligned search graph: every lane centerline sampled at (at most)
// `step` spacing, with forward edges along lanes, lane-change edges between
// adjacent lanes of a segment, and edges across network connections.
class LaneGraph {
 public:
  struct Node {
    Pose pose;
    LaneRef lane;
    int index = 0;  // position along its lane
  };
  struct Edge {
    int to = 0;
    double length = 0.0;
    bool lane_change = false;
  };

  LaneGraph(const RoadNetwork& network, const PathPlannerOptions& options);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges_from(int node) const { return adjacency_[node]; }
  int node_count() const { return static_cast<int>(nodes_.size()); }

  // First node id and node count of a lane.
  int lane_begin(const LaneRef& lane) const;
  int lane_size(const LaneRef& lane) const;

  // Closest node whose heading is within 90 degrees of the pose's heading.
  int nearest_node(const Pose& pose) const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<std::vector<int>> lane_begin_;  // [segment][lane]
  std::vector<std::vector<int>> lane_size_;
};

// A* over a LaneGraph built once per network.
class PathPlanner {
 public:
  explicit PathPlanner(const RoadNetwork& network, PathPlannerOptions options = {});

  const LaneGraph& graph() const { return graph_; }
  const PathPlannerOptions& options() const { return options_; }

  // Minimum-length waypoint trajectory from the node nearest `from` to the
  // node nearest `to`, avoiding nodes and edges whose inflated vehicle
  // footprint overlaps an obstacle. Timestamps assume constant target speed
  // starting at `start_time`. Throws NoPath.
  // Without `lane_changes` the route stays on lane-following edges.
  Trajectory plan(const Pose& from, const Pose& to,
                  std::span<const Footprint> obstacles = {},
                  double start_time = 0.0, bool lane_changes = true) const;

  // Node ids whose inflated footprint hits an obstacle.
  std::vector<bool> blocked_nodes(std::span<const Footprint> obstacles) const;

 private:
  PathPlannerOptions options_;
  LaneGraph graph_;
};

// Motion-level route of a grounded action from `from` to `to`. Lane changes
// are routed through a via point `lane_change_length` ahead on the target
// lane so the manoeuvre happens immediately instead of wherever the
// equal-length alternatives tie. Other actions keep their lane. Throws
// NoPath.
Trajectory plan_for_action(const PathPlanner& planner, const RoadNetwork& network,
                           const DrivingAction& action, const Pose& from, const Pose& to,
                           std::span<const Footprint> obstacles = {},
                           double start_time = 0.0);

// One-shot convenience wrapper that builds the graph for each call.
Trajectory plan_path(const Pose& from, const Pose& to, const RoadNetwork& network,
                     std::span<const Footprint> obstacles = {},
                     const PathPlannerOptions& options = {});

}  // namespace tmpud

#endif  // TMPUD_PATH_PLANNER_H_
