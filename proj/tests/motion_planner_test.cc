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
#include <limits>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "support/oracles.h"
#include "tmpud/errors.h"
#include "tmpud/path_planner.h"
#include "tmpud/tracking_controller.h"
#include "tmpud/vehicle.h"

namespace tmpud {
namespace {

using testing::two_segment_road;

Trajectory straight_line(double length, double speed = kDefaultTargetSpeed) {
  std::vector<TrajectorySample> s;
  for (int i = 0; i <= static_cast<int>(length); ++i) {
    s.push_back({i / speed, Pose(i, 0.0, 0.0), speed});
  }
  return Trajectory(std::move(s));
}

TEST(PlanPathTest, SameLaneIsCenterlineDistance) {
  const RoadNetwork net = two_segment_road();
  const Trajectory t = plan_path(Pose(10.3, 0, 0), Pose(170.6, 0, 0), net);
  EXPECT_NEAR(t.length(), 160.3, 1.0);
  for (const TrajectorySample& s : t.samples()) EXPECT_NEAR(s.pose.y(), 0.0, 1e-9);
  EXPECT_NEAR(t.end_time() - t.start_time(), t.length() / kDefaultTargetSpeed, 1e-9);
}

TEST(PlanPathTest, WallIsNoPath) {
  const RoadNetwork net = two_segment_road();
  const std::vector<Footprint> wall{{Pose(100, 1.75, 0), 1.0, 12.0}};
  EXPECT_THROW(plan_path(Pose(10, 0, 0), Pose(180, 0, 0), net, wall), NoPath);
  EXPECT_THROW(plan_path(Pose(180, 0, 0), Pose(10, 0, 0), net), NoPath);
}

TEST(PlanPathTest, ObstacleForcesLaneChange) {
  const RoadNetwork net = two_segment_road();
  const std::vector<Footprint> car{{Pose(60, 0, 0), 4.5, 1.8}};
  const Trajectory t = plan_path(Pose(10, 0, 0), Pose(150, 0, 0), net, car);
  bool left_lane = false;
  for (const TrajectorySample& s : t.samples()) left_lane |= s.pose.y() > 3.0;
  EXPECT_TRUE(left_lane);
  for (const TrajectorySample& s : t.samples()) {
    EXPECT_FALSE(overlaps(Footprint{s.pose, 4.5, 1.8}.inflated(0.3), car[0]));
  }
}

TEST(PlanPathTest, LaneChangeMatchesDijkstra) {
  const RoadNetwork net = two_segment_road();
  const PathPlanner planner(net);
  const Pose from(20, 0, 0);
  const Pose to(90, 3.5, 0);
  const Trajectory t = planner.plan(from, to);
  const double oracle = testing::dijkstra_length(
      planner.graph(), planner.graph().nearest_node(from), planner.graph().nearest_node(to));
  EXPECT_NEAR(t.length(), oracle, 1e-6);
  EXPECT_NEAR(t.back().pose.y(), 3.5, 1e-9);
}

TEST(PlanPathTest, RandomPairsMatchDijkstra) {
  const RoadNetwork net = RoadNetwork::load(testing::data_path("networks/urban_modules.json"));
  const PathPlanner planner(net);
  Rng rng(8);
  int reachable = 0;
  for (int i = 0; i < 200; ++i) {
    auto random_pose = [&] {
      const int seg = static_cast<int>(rng.next() % net.segment_count());
      const int l = static_cast<int>(rng.next() % net.lane_count(seg));
      const Polyline& lane = net.centerline({seg, l});
      return lane.pose_at(rng.uniform(0.0, lane.length()));
    };
    const Pose a = random_pose();
    const Pose b = random_pose();
    const double oracle = testing::dijkstra_length(
        planner.graph(), planner.graph().nearest_node(a), planner.graph().nearest_node(b));
    if (std::isinf(oracle)) {
      EXPECT_THROW(planner.plan(a, b), NoPath);
      continue;
    }
    ++reachable;
    EXPECT_NEAR(planner.plan(a, b).length(), oracle, 1e-6) << i;
  }
  EXPECT_GT(reachable, 50);
}

TEST(SimulateVehicleTest, StraightDisplacement) {
  VehicleState v;
  v.pose = Pose(1, 2, std::numbers::pi / 4);
  v.speed = 5.0;
  const VehicleState n = simulate_vehicle(v, {0.0, 0.0}, 1.0);
  EXPECT_NEAR(distance(v.pose, n.pose), 5.0, 1e-12);
  EXPECT_NEAR(n.pose.heading(), v.pose.heading(), 1e-12);
}

TEST(SimulateVehicleTest, SpeedNeverNegative) {
  VehicleState v;
  v.speed = 2.0;
  const VehicleState n = simulate_vehicle(v, {-10.0, 0.0}, 1.0);
  EXPECT_EQ(n.speed, 0.0);
  EXPECT_THROW(simulate_vehicle(v, {}, 0.0), InvalidArgument);
}

TEST(SimulateVehicleTest, ConstantSteeringClosesTheCircle) {
  VehicleState v;
  v.speed = 6.0;
  const double theta = 0.1;
  const double radius = v.wheelbase() / std::tan(theta);
  const double period = 2.0 * std::numbers::pi * radius / v.speed;
  const int steps = 1000;
  VehicleState cur = v;
  double max_dev = 0.0;
  for (int i = 0; i < steps; ++i) {
    cur = simulate_vehicle(cur, {0.0, theta}, period / steps);
    // Centre of the circle sits `radius` to the left of the start.
    max_dev = std::max(max_dev, std::abs((cur.pose.position() - Vec2(0, radius)).norm() - radius));
  }
  EXPECT_NEAR(normalize_angle(cur.pose.heading() - v.pose.heading()), 0.0, 1e-6);
  EXPECT_NEAR(cur.pose.x(), 0.0, 1e-6);
  EXPECT_NEAR(cur.pose.y(), 0.0, 1e-6);
  EXPECT_LT(max_dev, 1e-6);
}

TEST(SimulateVehicleTest, FuzzKeepsInvariants) {
  Rng rng(21);
  for (int i = 0; i < 5000; ++i) {
    VehicleState v;
    v.pose = Pose(rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-10, 10));
    v.speed = rng.uniform(0, 20);
    const ControlSignal u{rng.uniform(-20, 20), rng.uniform(-2, 2)};
    const VehicleState n = simulate_vehicle(v, u, rng.uniform(0.001, 2.0));
    EXPECT_GE(n.speed, 0.0);
    EXPECT_GE(n.pose.heading(), -std::numbers::pi);
    EXPECT_LT(n.pose.heading(), std::numbers::pi);
    EXPECT_TRUE(n.pose.is_finite());
  }
}

TEST(TrackStepTest, ZeroErrorFixedPoint) {
  const Trajectory path = straight_line(200);
  PidTracker tracker;
  VehicleState v;
  v.pose = Pose(50, 0, 0);
  v.speed = kDefaultTargetSpeed;
  for (int i = 0; i < 3; ++i) {
    const ControlSignal u = tracker.track_step(v, path, 0.05);
    EXPECT_NEAR(u.acceleration, 0.0, 1e-9);
    EXPECT_NEAR(u.steering, 0.0, 1e-9);
  }
}

TEST(TrackStepTest, SteersTowardThePath) {
  const Trajectory path = straight_line(200);
  PidTracker tracker;
  VehicleState v;
  v.pose = Pose(50, 1.0, 0);
  v.speed = kDefaultTargetSpeed;
  EXPECT_LT(tracker.track_step(v, path, 0.05).steering, 0.0);
  tracker.reset();
  v.pose = Pose(50, -1.0, 0);
  EXPECT_GT(tracker.track_step(v, path, 0.05).steering, 0.0);
  EXPECT_THROW(tracker.track_step(v, path, 0.0), InvalidArgument);
  EXPECT_THROW(tracker.track_step(v, Trajectory(), 0.1), InvalidArgument);
}

struct ClosedLoop {
  double settle_time = std::numeric_limits<double>::infinity();
  double final_cross_track = 0.0;
};

ClosedLoop simulate_closed_loop(VehicleState v, double seconds, double dt = 0.05) {
  const Trajectory path = straight_line(400);
  PidTracker tracker;
  const ControllerGains& g = tracker.gains();
  ClosedLoop out;
  double last_outside = 0.0;
  for (double t = 0.0; t < seconds - 1e-9; t += dt) {
    const ControlSignal u = tracker.track_step(v, path, dt);
    EXPECT_TRUE(tracker.envelope().contains(u));
    v = simulate_vehicle(v, u, dt, tracker.envelope());
    if (std::abs(v.speed - g.target_speed) > 0.02 * g.target_speed) last_outside = t + dt;
  }
  out.settle_time = last_outside;
  out.final_cross_track = std::abs(v.pose.y());
  return out;
}

// Frozen regression bound from the closed-loop simulation: the default
// gains settle from rest within 2% of 20 km/h well inside 8 s.
TEST(TrackStepTest, StepResponseSettlesWithinBound) {
  VehicleState v;
  v.pose = Pose(0, 0, 0);
  const ClosedLoop r = simulate_closed_loop(v, 20.0);
  EXPECT_LT(r.settle_time, 8.0);
}

TEST(TrackStepTest, LateralOffsetsConverge) {
  for (double offset = -2.0; offset <= 2.0; offset += 0.25) {
    VehicleState v;
    v.pose = Pose(0, offset, 0);
    v.speed = kDefaultTargetSpeed;
    EXPECT_LT(simulate_closed_loop(v, 10.0).final_cross_track, 0.1) << offset;
  }
}

TEST(TrackStepTest, OutputStaysInsideEnvelope) {
  Rng rng(99);
  const Trajectory path = straight_line(200);
  const ControlEnvelope env;
  for (int i = 0; i < 2000; ++i) {
    PidTracker tracker({}, env);
    VehicleState v;
    v.pose = Pose(rng.uniform(-20, 220), rng.uniform(-30, 30), rng.uniform(-4, 4));
    v.speed = rng.uniform(0, 25);
    for (int k = 0; k < 5; ++k) {
      const ControlSignal u = tracker.track_step(v, path, rng.uniform(0.01, 0.5));
      ASSERT_TRUE(env.contains(u));
      v = simulate_vehicle(v, u, 0.1, env);
    }
  }
}

}  // namespace
}  // namespace tmpud
