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

#include "tmpud/path_planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include "tmpud/errors.h"

namespace tmpud {

namespace {

constexpr double kJoinTolerance = 0.05;  // m

}  // namespace

LaneGraph::LaneGraph(const RoadNetwork& network, const PathPlannerOptions& options) {
  if (!(options.step > 0.0)) throw InvalidArgument("graph step must be positive");
  lane_begin_.resize(network.segment_count());
  lane_size_.resize(network.segment_count());

  // Nodes: uniform arc-length sampling of every lane, both ends included.
  for (int s = 0; s < network.segment_count(); ++s) {
    for (int l = 0; l < network.lane_count(s); ++l) {
      const Polyline& line = network.centerline({s, l});
      const int intervals =
          std::max(1, static_cast<int>(std::ceil(line.length() / options.step - 1e-9)));
      lane_begin_[s].push_back(static_cast<int>(nodes_.size()));
      lane_size_[s].push_back(intervals + 1);
      for (int i = 0; i <= intervals; ++i) {
        nodes_.push_back({line.pose_at(line.length() * i / intervals), {s, l}, i});
      }
    }
  }
  adjacency_.resize(nodes_.size());
  auto link = [this](int a, int b, bool lane_change = false) {
    const double len = (nodes_[a].pose.position() - nodes_[b].pose.position()).norm();
    adjacency_[a].push_back({b, len, lane_change});
  };

  for (int s = 0; s < network.segment_count(); ++s) {
    for (int l = 0; l < network.lane_count(s); ++l) {
      const int begin = lane_begin_[s][l];
      const int size = lane_size_[s][l];
      // Along the lane.
      for (int i = 0; i + 1 < size; ++i) link(begin + i, begin + i + 1);
      // Lane changes into each neighbor, `lane_change_length` further along.
      for (int dl : {-1, 1}) {
        const int nl = l + dl;
        if (nl < 0 || nl >= network.lane_count(s)) continue;
        const int nbegin = lane_begin_[s][nl];
        const int nsize = lane_size_[s][nl];
        const double other_length = network.centerline({s, nl}).length();
        for (int i = 0; i < size; ++i) {
          const double fraction = static_cast<double>(i) / (size - 1);
          const double target_arc =
              fraction * other_length + options.lane_change_length;
          if (target_arc > other_length + 1e-9) break;
          const int j = static_cast<int>(
              std::lround(target_arc / other_length * (nsize - 1)));
          if (j <= 0 || j >= nsize) continue;
          link(begin + i, nbegin + j, true);
        }
      }
    }
  }
  for (const Connection& c : network.connections()) {
    const int from = lane_begin_[c.from.segment][c.from.lane] +
                     lane_size_[c.from.segment][c.from.lane] - 1;
    const int to = lane_begin_[c.to.segment][c.to.lane];
    link(from, to);
  }
}

int LaneGraph::lane_begin(const LaneRef& lane) const {
  return lane_begin_.at(lane.segment).at(lane.lane);
}

int LaneGraph::lane_size(const LaneRef& lane) const {
  return lane_size_.at(lane.segment).at(lane.lane);
}

int LaneGraph::nearest_node(const Pose& pose) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < node_count(); ++i) {
    if (heading_difference(nodes_[i].pose, pose) > 0.5 * std::numbers::pi) continue;
    const double d = (nodes_[i].pose.position() - pose.position()).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (best < 0) throw NoPath("no lane is aligned with the requested pose");
  return best;
}

PathPlanner::PathPlanner(const RoadNetwork& network, PathPlannerOptions options)
    : options_(options), graph_(network, options_) {}

std::vector<bool> PathPlanner::blocked_nodes(std::span<const Footprint> obstacles) const {
  std::vector<bool> blocked(graph_.node_count(), false);
  if (obstacles.empty()) return blocked;
  for (int i = 0; i < graph_.node_count(); ++i) {
    const Footprint fp =
        Footprint{graph_.nodes()[i].pose, options_.vehicle_length, options_.vehicle_width}
            .inflated(options_.inflation);
    for (const Footprint& ob : obstacles) {
      if (overlaps(fp, ob)) {
        blocked[i] = true;
        break;
      }
    }
  }
  return blocked;
}

Trajectory PathPlanner::plan(const Pose& from, const Pose& to,
                             std::span<const Footprint> obstacles,
                             double start_time, bool lane_changes) const {
  const int start = graph_.nearest_node(from);
  const int goal = graph_.nearest_node(to);
  const std::vector<bool> blocked = blocked_nodes(obstacles);
  if (blocked[start] || blocked[goal]) {
    throw NoPath("start or goal pose collides with an obstacle");
  }
  const auto nodes = graph_.nodes();
  auto edge_blocked = [&](int a, int b) {
    if (obstacles.empty()) return false;
    const Vec2 mid = 0.5 * (nodes[a].pose.position() + nodes[b].pose.position());
    const Vec2 d = nodes[b].pose.position() - nodes[a].pose.position();
    const Footprint fp = Footprint{Pose(mid, std::atan2(d.y(), d.x())),
                                   options_.vehicle_length, options_.vehicle_width}
                             .inflated(options_.inflation);
    for (const Footprint& ob : obstacles) {
      if (overlaps(fp, ob)) return true;
    }
    return false;
  };
  const Vec2 goal_pos = nodes[goal].pose.position();
  auto heuristic = [&](int n) { return (nodes[n].pose.position() - goal_pos).norm(); };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(graph_.node_count(), inf);
  std::vector<int> parent(graph_.node_count(), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[start] = 0.0;
  open.push({heuristic(start), start});
  while (!open.empty()) {
    const auto [f, n] = open.top();
    open.pop();
    if (f > g[n] + heuristic(n) + 1e-12) continue;  // stale entry
    if (n == goal) break;
    for (const LaneGraph::Edge& e : graph_.edges_from(n)) {
      if (blocked[e.to] || (e.lane_change && !lane_changes)) continue;
      const double cand = g[n] + e.length;
      if (cand < g[e.to] && !edge_blocked(n, e.to)) {
        g[e.to] = cand;
        parent[e.to] = n;
        open.push({cand + heuristic(e.to), e.to});
      }
    }
  }
  if (g[goal] == inf) throw NoPath("goal pose is unreachable on the lane graph");

  std::vector<int> chain;
  for (int n = goal; n != -1; n = parent[n]) chain.push_back(n);
  std::reverse(chain.begin(), chain.end());

  std::vector<TrajectorySample> samples;
  double travelled = 0.0;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i > 0) {
      travelled += (nodes[chain[i]].pose.position() - nodes[chain[i - 1]].pose.position())
                       .norm();
    }
    // Nodes at a lane join can coincide or sit a few centimetres apart, even
    // slightly behind; keep only the first of such a cluster.
    const double t = start_time + travelled / options_.target_speed;
    if (!samples.empty() &&
        ((nodes[chain[i]].pose.position() - samples.back().pose.position()).norm() <
             kJoinTolerance ||
         !(t > samples.back().time))) {
      continue;
    }
    samples.push_back({t, nodes[chain[i]].pose, options_.target_speed});
  }
  return Trajectory(std::move(samples));
}

Trajectory plan_for_action(const PathPlanner& planner, const RoadNetwork& network,
                           const DrivingAction& action, const Pose& from, const Pose& to,
                           std::span<const Footprint> obstacles, double start_time) {
  if (!is_lane_change(action.kind)) {
    return planner.plan(from, to, obstacles, start_time, false);
  }

  const Polyline& target = network.centerline(action.target.lane_ref());
  const double goal_arc = target.project(to.position());
  const double via_arc = std::min(
      target.project(from.position()) + planner.options().lane_change_length +
          planner.options().step,
      goal_arc);
  const Trajectory first = planner.plan(from, target.pose_at(via_arc), obstacles, start_time);
  const Trajectory second =
      planner.plan(first.back().pose, to, obstacles, first.end_time(), false);
  std::vector<TrajectorySample> samples(first.samples().begin(), first.samples().end());
  for (const TrajectorySample& s : second.samples()) {
    if (s.time > samples.back().time) samples.push_back(s);
  }
  return Trajectory(std::move(samples));
}

Trajectory plan_path(const Pose& from, const Pose& to, const RoadNetwork& network,
                     std::span<const Footprint> obstacles,
                     const PathPlannerOptions& options) {
  return PathPlanner(network, options).plan(from, to, obstacles);
}

}  // namespace tmpud
