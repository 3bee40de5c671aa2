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

#include "tmpud/road_network.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tmpud/errors.h"

namespace tmpud {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kMergeLeft:
      return "mergeleft";
    case ActionKind::kMergeRight:
      return "mergeright";
    case ActionKind::kForward:
      return "forward";
    case ActionKind::kTurnLeft:
      return "turnleft";
    case ActionKind::kTurnRight:
      return "turnright";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view name) {
  for (ActionKind kind : kAllActionKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Polyline

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points)) {
  arc_.reserve(points_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i > 0) total += (points_[i] - points_[i - 1]).norm();
    arc_.push_back(total);
  }
}

Pose Polyline::pose_at(double s) const {
  if (points_.size() < 2) {
    return points_.empty() ? Pose() : Pose(points_.front(), 0.0);
  }
  s = std::clamp(s, 0.0, length());
  auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - arc_.begin());
  i = std::clamp<std::size_t>(i, 1, points_.size() - 1);
  const Vec2& a = points_[i - 1];
  const Vec2& b = points_[i];
  const double piece = arc_[i] - arc_[i - 1];
  const double w = piece > 0.0 ? (s - arc_[i - 1]) / piece : 0.0;
  const Vec2 d = b - a;
  return Pose(a + w * d, std::atan2(d.y(), d.x()));
}

double Polyline::project(const Vec2& p, double* lateral) const {
  double best_dist = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  double best_lat = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    const Vec2& a = points_[i - 1];
    const Vec2& b = points_[i];
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const Vec2 q = a + t * ab;
    const double dist = (p - q).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best_s = arc_[i - 1] + t * std::sqrt(len2);
      const Vec2 rel = p - q;
      best_lat = len2 > 0.0 ? (ab.x() * rel.y() - ab.y() * rel.x()) / std::sqrt(len2)
                            : 0.0;
    }
  }
  if (lateral != nullptr) *lateral = best_lat;
  return best_s;
}

// ---------------------------------------------------------------------------
// RoadNetwork

RoadNetwork::RoadNetwork(std::vector<Segment> segments,
                         std::vector<Connection> connections)
    : segments_(std::move(segments)), connections_(std::move(connections)) {
  for (int i = 0; i < segment_count(); ++i) {
    const Segment& seg = segments_[i];
    if (!index_.emplace(seg.id, i).second) {
      throw InvalidArgument("duplicate segment id '" + seg.id + "'");
    }
    if (seg.lanes.empty()) {
      throw InvalidArgument("segment '" + seg.id + "' has no lanes");
    }
    for (int l = 0; l < seg.lane_count(); ++l) {
      if (seg.lanes[l].points().size() < 2) {
        throw InvalidArgument("segment '" + seg.id + "' lane " +
                              std::to_string(l) +
                              " centerline needs at least two points");
      }
    }
  }
  for (const Connection& c : connections_) {
    if (!has_lane(c.from) || !has_lane(c.to)) {
      throw InvalidArgument("connection references a missing lane");
    }
    if (is_lane_change(c.action)) {
      throw InvalidArgument(
          "connections must be forward, turnleft or turnright; lane changes "
          "follow from lane adjacency");
    }
  }
}

std::optional<int> RoadNetwork::find_segment(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int RoadNetwork::segment_index(std::string_view id) const {
  const auto found = find_segment(id);
  if (!found) throw InvalidArgument("unknown segment '" + std::string(id) + "'");
  return *found;
}

bool RoadNetwork::has_lane(const LaneRef& lane) const {
  return lane.segment >= 0 && lane.segment < segment_count() && lane.lane >= 0 &&
         lane.lane < segments_[lane.segment].lane_count();
}

std::optional<LaneRef> RoadNetwork::left_of(const LaneRef& lane) const {
  LaneRef left{lane.segment, lane.lane + 1};
  if (!has_lane(lane) || !has_lane(left)) return std::nullopt;
  return left;
}

std::optional<LaneRef> RoadNetwork::right_of(const LaneRef& lane) const {
  LaneRef right{lane.segment, lane.lane - 1};
  if (!has_lane(lane) || !has_lane(right)) return std::nullopt;
  return right;
}

std::vector<Connection> RoadNetwork::outgoing(const LaneRef& lane) const {
  std::vector<Connection> out;
  for (const Connection& c : connections_) {
    if (c.from == lane) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON loading

namespace {

using Ptr = Json::json_pointer;

Vec2 read_point(const JsonDocument& doc, const Ptr& at) {
  const Json& v = doc.at(at);
  if (!v.is_array() || v.size() < 2 || !v[0].is_number() || !v[1].is_number()) {
    doc.fail(at, "expected a point [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<Vec2> read_points(const JsonDocument& doc, const Ptr& at) {
  const Json& v = doc.at(at);
  if (!v.is_array()) doc.fail(at, "expected an array of points");
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < v.size(); ++i) pts.push_back(read_point(doc, at / i));
  if (pts.size() < 2) doc.fail(at, "a centerline needs at least two points");
  return pts;
}

// Offsets a reference polyline `offset` meters to its left using averaged
// vertex normals.
std::vector<Vec2> offset_left(const std::vector<Vec2>& ref, double offset) {
  if (offset == 0.0) return ref;
  std::vector<Vec2> out;
  out.reserve(ref.size());
  auto normal = [&](std::size_t i) {
    const Vec2 d = (ref[i + 1] - ref[i]).normalized();
    return Vec2(-d.y(), d.x());
  };
  for (std::size_t i = 0; i < ref.size(); ++i) {
    Vec2 n;
    if (i == 0) {
      n = normal(0);
    } else if (i + 1 == ref.size()) {
      n = normal(i - 1);
    } else {
      n = (normal(i - 1) + normal(i)).normalized();
    }
    out.push_back(ref[i] + offset * n);
  }
  return out;
}

std::vector<Polyline> read_lanes(const JsonDocument& doc, const Ptr& at) {
  std::vector<Polyline> lanes;
  if (doc.contains(at / "centerlines")) {
    const Ptr cl = at / "centerlines";
    const Json& v = doc.at(cl);
    if (!v.is_array() || v.empty()) doc.fail(cl, "expected a non-empty array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      lanes.emplace_back(read_points(doc, cl / i));
    }
    return lanes;
  }
  if (!doc.contains(at / "reference")) {
    doc.fail(at, "segment needs 'centerlines' or 'reference'");
  }
  const long long lane_count = doc.integer_or(at / "lanes", 1);
  if (lane_count < 1) doc.fail(at / "lanes", "lane count must be positive");
  const double lane_width = doc.number_or(at / "lane_width", 3.5);
  if (!(lane_width > 0.0)) doc.fail(at / "lane_width", "lane width must be positive");

  const Ptr ref_at = at / "reference";
  const Json& ref = doc.at(ref_at);
  if (ref.is_array()) {
    const std::vector<Vec2> pts = read_points(doc, ref_at);
    for (long long l = 0; l < lane_count; ++l) {
      lanes.emplace_back(offset_left(pts, static_cast<double>(l) * lane_width));
    }
    return lanes;
  }
  if (!ref.is_object()) doc.fail(ref_at, "expected a point list or an arc object");
  const Ptr start_at = ref_at / "start";
  const Json& start = doc.at(start_at);
  if (!start.is_array() || start.size() != 3) {
    doc.fail(start_at, "expected [x, y, heading]");
  }
  const Vec2 p0(start[0].get<double>(), start[1].get<double>());
  const double h0 = start[2].get<double>();
  const double length = doc.number(ref_at / "length");
  if (!(length > 0.0)) doc.fail(ref_at / "length", "length must be positive");
  const double curvature = doc.number_or(ref_at / "curvature", 0.0);
  const int pieces = std::max(1, static_cast<int>(std::ceil(length)));
  for (long long l = 0; l < lane_count; ++l) {
    const double off = static_cast<double>(l) * lane_width;
    std::vector<Vec2> pts;
    for (int k = 0; k <= pieces; ++k) {
      const double s = length * k / pieces;
      const double h = h0 + curvature * s;
      Vec2 p;
      if (std::abs(curvature) < 1e-12) {
        p = p0 + s * heading_vector(h0);
      } else {
        p = p0 + Vec2(std::sin(h) - std::sin(h0), std::cos(h0) - std::cos(h)) /
                     curvature;
      }
      pts.push_back(p + off * Vec2(-std::sin(h), std::cos(h)));
    }
    lanes.emplace_back(std::move(pts));
  }
  return lanes;
}

struct EndpointSpec {
  std::string segment;
  std::optional<int> lane;
};

EndpointSpec read_endpoint(const JsonDocument& doc, const Ptr& at) {
  const Json& v = doc.at(at);
  if (v.is_string()) return {v.get<std::string>(), std::nullopt};
  if (v.is_array() && v.size() == 2 && v[0].is_string() && v[1].is_number_integer()) {
    return {v[0].get<std::string>(), v[1].get<int>()};
  }
  if (v.is_object()) {
    return {doc.string(at / "segment"),
            static_cast<int>(doc.integer(at / "lane"))};
  }
  doc.fail(at, "expected \"segment\", [\"segment\", lane] or {segment, lane}");
}

}  // namespace

RoadNetwork RoadNetwork::from_json(const JsonDocument& doc, const Ptr& at) {
  const Json& root = doc.at(at);
  if (!root.is_object()) doc.fail(at, "road network must be an object");
  const Ptr segs_at = at / "segments";
  const Json& segs = doc.at(segs_at);
  if (!segs.is_array() || segs.empty()) {
    doc.fail(segs_at, "'segments' must be a non-empty array");
  }
  std::vector<Segment> segments;
  std::unordered_map<std::string, int> ids;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    Segment seg;
    seg.id = doc.string(segs_at / i / "id");
    if (!ids.emplace(seg.id, static_cast<int>(i)).second) {
      doc.fail(segs_at / i / "id", "duplicate segment id '" + seg.id + "'");
    }
    seg.lanes = read_lanes(doc, segs_at / i);
    segments.push_back(std::move(seg));
  }

  std::vector<Connection> connections;
  const Ptr conns_at = at / "connections";
  const Json& conns = doc.at(conns_at);
  if (!conns.is_array()) doc.fail(conns_at, "'connections' must be an array");
  for (std::size_t i = 0; i < conns.size(); ++i) {
    const Ptr c_at = conns_at / i;
    const std::string action_name = doc.string(c_at / "action");
    const auto action = parse_action_kind(action_name);
    if (!action || is_lane_change(*action)) {
      doc.fail(c_at / "action",
               "action must be forward, turnleft or turnright, got '" +
                   action_name + "'");
    }
    const EndpointSpec from = read_endpoint(doc, c_at / "from");
    const EndpointSpec to = read_endpoint(doc, c_at / "to");
    const auto from_it = ids.find(from.segment);
    if (from_it == ids.end()) {
      doc.fail(c_at / "from", "unknown segment '" + from.segment + "'");
    }
    const auto to_it = ids.find(to.segment);
    if (to_it == ids.end()) {
      doc.fail(c_at / "to", "unknown segment '" + to.segment + "'");
    }
    const int from_lanes = segments[from_it->second].lane_count();
    const int to_lanes = segments[to_it->second].lane_count();
    if (from.lane.has_value() != to.lane.has_value()) {
      doc.fail(c_at, "give lanes on both ends or on neither");
    }
    if (!from.lane) {
      // Lane-wise connection between segments.
      for (int l = 0; l < std::min(from_lanes, to_lanes); ++l) {
        connections.push_back({{from_it->second, l}, {to_it->second, l}, *action});
      }
      continue;
    }
    if (*from.lane < 0 || *from.lane >= from_lanes) {
      doc.fail(c_at / "from", "lane index out of range");
    }
    if (*to.lane < 0 || *to.lane >= to_lanes) {
      doc.fail(c_at / "to", "lane index out of range");
    }
    connections.push_back(
        {{from_it->second, *from.lane}, {to_it->second, *to.lane}, *action});
  }
  return RoadNetwork(std::move(segments), std::move(connections));
}

RoadNetwork RoadNetwork::from_json_text(std::string_view text, std::string origin) {
  return from_json(JsonDocument::parse(text, std::move(origin)));
}

RoadNetwork RoadNetwork::load(const std::filesystem::path& path) {
  return from_json(JsonDocument::load(path));
}

}  // namespace tmpud
