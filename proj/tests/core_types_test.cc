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

#include <cmath>
#include <numbers>
#include <string>

#include "gtest/gtest.h"
#include "support/oracles.h"
#include "tmpud/errors.h"
#include "tmpud/symbolic.h"
#include "tmpud/task_planner.h"
#include "tmpud/trajectory.h"

namespace tmpud {
namespace {

using testing::two_segment_road;

TEST(NormalizeAngleTest, RangeAndIdempotence) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double h = rng.uniform(-1e4, 1e4);
    const double n = normalize_angle(h);
    EXPECT_GE(n, -std::numbers::pi);
    EXPECT_LT(n, std::numbers::pi);
    EXPECT_EQ(normalize_angle(n), n);
    EXPECT_NEAR(std::remainder(h - n, 2.0 * std::numbers::pi), 0.0, 1e-9);
  }
  EXPECT_EQ(normalize_angle(std::numbers::pi), -std::numbers::pi);
  EXPECT_EQ(Pose(0, 0, 3.0 * std::numbers::pi).heading(), -std::numbers::pi);
}

TEST(TrajectoryTest, RejectsNonIncreasingTimesAndNegativeSpeed) {
  EXPECT_THROW(Trajectory({{0.0, Pose(), 1.0}, {0.0, Pose(1, 0, 0), 1.0}}), InvalidArgument);
  EXPECT_THROW(Trajectory({{0.0, Pose(), -1.0}}), InvalidArgument);
  const Trajectory t({{0.0, Pose(), 1.0}, {2.0, Pose(2, 0, 0), 1.0}});
  EXPECT_DOUBLE_EQ(t.length(), 2.0);
  EXPECT_DOUBLE_EQ(t.state_at(1.0).pose.x(), 1.0);
  EXPECT_DOUBLE_EQ(t.state_at(3.0).pose.x(), 3.0);
}

TEST(RoadNetworkTest, LeftRightAreMutuallyInverse) {
  const RoadNetwork net = RoadNetwork::load(testing::data_path("networks/urban_modules.json"));
  for (int s = 0; s < net.segment_count(); ++s) {
    for (int l = 0; l < net.lane_count(s); ++l) {
      const LaneRef lane{s, l};
      if (auto left = net.left_of(lane)) {
        EXPECT_EQ(net.right_of(*left), lane);
      }
      if (auto right = net.right_of(lane)) {
        EXPECT_EQ(net.left_of(*right), lane);
      }
    }
  }
}

TEST(RoadNetworkTest, LoadErrorsCarryLineNumbers) {
  try {
    RoadNetwork::from_json_text(R"({
  "segments": [
    {"id": "s", "reference": [[0, 0], [10, 0]]}
  ],
  "connections": [
    {"from": ["s", 0], "to": ["missing", 0], "action": "forward"}
  ]
})",
                                "net.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("net.json:6"), std::string::npos) << e.what();
  }
  EXPECT_THROW(RoadNetwork::from_json_text("{\"segments\": [}"), ParseError);
  EXPECT_THROW(RoadNetwork::from_json_text(
                   R"({"segments": [{"id": "s", "centerlines": [[[0, 0]]]}], "connections": []})"),
               ParseError);
}

TEST(RoadNetworkTest, RejectsLaneChangeConnections) {
  EXPECT_THROW(RoadNetwork::from_json_text(R"({
    "segments": [{"id": "a", "reference": [[0, 0], [10, 0]]},
                 {"id": "b", "reference": [[10, 0], [20, 0]]}],
    "connections": [{"from": ["a", 0], "to": ["b", 0], "action": "mergeleft"}]})"),
               ParseError);
}

TEST(MapStateTest, SampledPoseLiesOnCenterlineAlongTravel) {
  const RoadNetwork net = two_segment_road();
  const SymbolicState s{0, 0, Direction::kForward};
  const PoseRegion region = map_state(s, net);
  const Pose p = region.sample(7);
  EXPECT_NEAR(p.y(), 0.0, 1e-12);
  EXPECT_NEAR(p.heading(), 0.0, 1e-12);
  EXPECT_GE(p.x(), 80.0 - 1e-9);
  EXPECT_LE(p.x(), 100.0 + 1e-9);
  EXPECT_TRUE(region.contains(p));
}

TEST(MapStateTest, LaneOutOfRangeIsInfeasible) {
  const RoadNetwork net = two_segment_road();
  EXPECT_THROW(map_state({0, 2, Direction::kForward}, net), InfeasibleState);
  EXPECT_THROW(map_state({0, 0, Direction::kReverse}, net), InfeasibleState);
  EXPECT_THROW(map_state({5, 0, Direction::kForward}, net), InfeasibleState);
}

TEST(MapStateTest, ZeroLengthLaneIsInfeasible) {
  const RoadNetwork net = RoadNetwork::from_json_text(
      R"({"segments": [{"id": "z", "centerlines": [[[1, 1], [1, 1]]]}], "connections": []})");
  EXPECT_THROW(map_state({0, 0, Direction::kForward}, net), InfeasibleState);
}

TEST(MapStateTest, SameSeedSamePose) {
  const RoadNetwork net = RoadNetwork::load(testing::data_path("networks/fig3.json"));
  const SymbolicState s{1, 1, Direction::kForward};
  const Pose a = sample_state_pose(s, net, 42);
  const Pose b = sample_state_pose(s, net, 42);
  EXPECT_EQ(a.x(), b.x());
  EXPECT_EQ(a.y(), b.y());
  EXPECT_EQ(a.heading(), b.heading());
}

TEST(MapStateTest, EverySampleIsARegionMember) {
  const RoadNetwork net = RoadNetwork::load(testing::data_path("networks/urban_modules.json"));
  for (int seg = 0; seg < net.segment_count(); ++seg) {
    for (int l = 0; l < net.lane_count(seg); ++l) {
      const SymbolicState s{seg, l, Direction::kForward};
      const PoseRegion region = map_state(s, net);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_TRUE(region.contains(region.sample(seed))) << describe(s, net);
      }
    }
  }
}

TEST(ValidatePlanTest, EmptyPlanIsValid) {
  const RoadNetwork net = two_segment_road();
  EXPECT_TRUE(validate_plan(Plan{{0, 0, Direction::kForward}, {}}, net));
}

TEST(ValidatePlanTest, MergeLeftFromLeftmostLaneIsInvalid) {
  const RoadNetwork net = two_segment_road();
  Plan p{{0, 1, Direction::kForward},
         {{ActionKind::kMergeLeft, {0, 1, Direction::kForward}, {1, 2, Direction::kForward}}}};
  const PlanValidation v = validate_plan(p, net);
  EXPECT_FALSE(v);
  EXPECT_FALSE(v.diagnostics.empty());
}

TEST(ValidatePlanTest, BrokenChainIsInvalid) {
  const RoadNetwork net = two_segment_road();
  Plan p{{0, 0, Direction::kForward},
         {{ActionKind::kForward, {0, 1, Direction::kForward}, {1, 1, Direction::kForward}}}};
  EXPECT_FALSE(validate_plan(p, net));
}

// Four segments: a 2-lane road of three pieces and a left branch that can
// only be entered from the left lane.
TEST(ValidatePlanTest, PlannerOutputOnFourSegmentNetworkIsValid) {
  const RoadNetwork net = RoadNetwork::from_json_text(R"({
    "segments": [
      {"id": "a", "reference": [[0, 0], [50, 0]], "lanes": 2},
      {"id": "b", "reference": [[50, 0], [100, 0]], "lanes": 2},
      {"id": "c", "reference": [[100, 0], [150, 0]], "lanes": 2},
      {"id": "d", "reference": [[150, 3.5], [150, 60]]}
    ],
    "connections": [
      {"from": ["a", 0], "to": ["b", 0], "action": "forward"},
      {"from": ["a", 1], "to": ["b", 1], "action": "forward"},
      {"from": ["b", 0], "to": ["c", 0], "action": "forward"},
      {"from": ["b", 1], "to": ["c", 1], "action": "forward"},
      {"from": ["c", 1], "to": ["d", 0], "action": "turnleft"}
    ]})");
  const PlanningProblem problem{{0, 0, Direction::kForward}, {3, std::nullopt}, &net};
  const Plan p = compute_plan(problem, UtilityTables());
  EXPECT_EQ(p.size(), 3u);
  EXPECT_TRUE(validate_plan(p, net));
}

}  // namespace
}  // namespace tmpud
