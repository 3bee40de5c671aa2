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

#ifndef TMPUD_ROAD_NETWORK_H_
#define TMPUD_ROAD_NETWORK_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tmpud/geometry.h"
#include "tmpud/json_io.h"

namespace tmpud {

// The five symbolic driving actions. The enumerator order is the planner's
// lexicographic tie-breaking order.
enum class ActionKind : std::uint8_t {
  kMergeLeft,
  kMergeRight,
  kForward,
  kTurnLeft,
  kTurnRight,
};

inline constexpr ActionKind kAllActionKinds[] = {
    ActionKind::kMergeLeft, ActionKind::kMergeRight, ActionKind::kForward,
    ActionKind::kTurnLeft, ActionKind::kTurnRight};

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view name);

inline bool is_lane_change(ActionKind kind) {
  return kind == ActionKind::kMergeLeft || kind == ActionKind::kMergeRight;
}

// A lane of a segment. Lane 0 is the rightmost lane.
struct LaneRef {
  int segment = 0;
  int lane = 0;
  auto operator<=>(const LaneRef&) const = default;
};

// Piecewise-linear centerline parameterized by arc length.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> points);

  std::span<const Vec2> points() const { return points_; }
  double length() const { return arc_.empty() ? 0.0 : arc_.back(); }

  // Pose at arc length `s` (clamped to the polyline), heading along it.
  Pose pose_at(double s) const;

  // Closest point: returns its arc length and writes the signed lateral
  // offset of `p` (positive to the left of the direction of travel).
  double project(const Vec2& p, double* lateral = nullptr) const;

 private:
  std::vector<Vec2> points_;
  std::vector<double> arc_;
};

struct Segment {
  std::string id;
  // Per-lane centerlines, rightmost first. All run in the segment's single
  // direction of travel.
  std::vector<Polyline> lanes;

  int lane_count() const { return static_cast<int>(lanes.size()); }
  // Nominal length: the rightmost lane's centerline length.
  double length() const { return lanes.empty() ? 0.0 : lanes.front().length(); }
};

// Directed link from the end of one lane to the start of another. Only
// forward, turnleft and turnright connections exist; lane changes are
// implied by lane adjacency.
struct Connection {
  LaneRef from;
  LaneRef to;
  ActionKind action = ActionKind::kForward;
};

// Lane-graph world model. Immutable after construction.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  // Throws InvalidArgument when a connection references a missing lane, an
  // id repeats, a lane has fewer than two points, or a connection is tagged
  // with a lane-change action.
  RoadNetwork(std::vector<Segment> segments,
              std::vector<Connection> connections);

  static RoadNetwork from_json(const JsonDocument& doc,
                               const Json::json_pointer& at = Json::json_pointer());
  static RoadNetwork from_json_text(std::string_view text,
                                    std::string origin = "<network>");
  static RoadNetwork load(const std::filesystem::path& path);

  int segment_count() const { return static_cast<int>(segments_.size()); }
  const Segment& segment(int index) const { return segments_.at(index); }
  std::span<const Segment> segments() const { return segments_; }
  std::optional<int> find_segment(std::string_view id) const;
  // Throws InvalidArgument for unknown ids.
  int segment_index(std::string_view id) const;

  int lane_count(int segment) const { return segments_.at(segment).lane_count(); }
  bool has_lane(const LaneRef& lane) const;
  const Polyline& centerline(const LaneRef& lane) const {
    return segments_.at(lane.segment).lanes.at(lane.lane);
  }

  std::optional<LaneRef> left_of(const LaneRef& lane) const;
  std::optional<LaneRef> right_of(const LaneRef& lane) const;

  std::span<const Connection> connections() const { return connections_; }
  // Connections leaving the end of `lane`, in declaration order.
  std::vector<Connection> outgoing(const LaneRef& lane) const;

 private:
  std::vector<Segment> segments_;
  std::vector<Connection> connections_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace tmpud

#endif  // TMPUD_ROAD_NETWORK_H_
