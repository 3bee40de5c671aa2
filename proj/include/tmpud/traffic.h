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

#ifndef TMPUD_TRAFFIC_H_
#define TMPUD_TRAFFIC_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tmpud/rng.h"
#include "tmpud/road_network.h"
#include "tmpud/tracking_controller.h"
#include "tmpud/trajectory.h"
#include "tmpud/vehicle.h"

namespace tmpud {

// Lane-following traffic: each surrounding vehicle keeps its lane, applies a
// random piecewise-constant acceleration, and yields to whatever is ahead of
// it (the ego included) through the intelligent driver model.
struct TrafficParameters {
  double accel_range = 1.0;      // perturbations are uniform in [-a, a]
  double accel_period = 1.0;     // seconds between perturbation draws
  double min_speed = 3.0;        // perturbations never push below / above
  double max_speed = 8.5;
  double spawn_min_speed = 4.5;
  double spawn_max_speed = 7.0;

  // Intelligent driver model, shared by traffic and the ego's speed cap.
  double idm_max_accel = 1.5;
  double idm_comfort_decel = 2.0;
  double idm_min_gap = 2.0;
  double idm_headway = 1.2;
  double max_brake = 8.0;
  double lateral_band = 2.0;  // |lateral offset| under which a vehicle is "ahead"

  double stop_speed = 0.5;     // a vehicle slower than this ...
  double stop_duration = 1.0;  // ... for this long counts as forced to stop

  double dt = 0.1;
};

// IDM acceleration toward a leader `gap` metres ahead closing at `dv` m/s.
double idm_acceleration(double speed, double desired_speed, std::optional<double> gap,
                        double dv, const TrafficParameters& p);

struct ExecutionOutcome {
  bool completed = false;
  bool collision = false;
  bool timed_out = false;
  int forced_stops = 0;  // at most one per execution
  double distance = 0.0;
  double duration = 0.0;
};

class TrafficWorld {
 public:
  struct Vehicle {
    VehicleState state;
    LaneRef lane;
    double arc = 0.0;
    double perturbation = 0.0;
    double next_draw = 0.0;
    double slow_time = 0.0;
    bool active = true;
  };

  TrafficWorld(const RoadNetwork& network, TrafficParameters params, std::uint64_t seed,
               ControllerGains gains = {}, ControlEnvelope envelope = {});

  double now() const { return time_; }
  const VehicleState& ego() const { return ego_; }
  void set_ego(const VehicleState& ego) { ego_ = ego; }
  const TrafficParameters& params() const { return params_; }

  void clear_traffic() { vehicles_.clear(); }
  // Places a vehicle on `lane` at arc length `arc`; returns its id.
  int add_vehicle(const LaneRef& lane, double arc, double speed);
  std::span<const Vehicle> vehicles() const { return vehicles_; }
  // Observations of active vehicles, with turn rates.
  std::vector<VehicleState> surrounding() const;

  // Drives the ego along `plan` with the tracking controller until it is
  // within the completion tolerance of `goal`, it collides, or `timeout`
  // seconds pass. Traffic advances in lockstep.
  ExecutionOutcome execute(const Trajectory& plan, const Pose& goal, double timeout);

  static constexpr double kGoalPositionTolerance = 1.5;
  static constexpr double kGoalHeadingTolerance = 0.3;

 private:
  void step(double dt, const ControlSignal& ego_control, bool* stop_seen);
  // Nearest vehicle ahead of `from` (excluding `self`, -1 for the ego) as
  // (gap, closing speed).
  std::optional<std::pair<double, double>> leader_of(const VehicleState& from,
                                                     int self) const;
  VehicleState observe(const Vehicle& v) const;

  const RoadNetwork* network_;
  TrafficParameters params_;
  ControllerGains gains_;
  ControlEnvelope envelope_;
  Rng rng_;
  double time_ = 0.0;
  VehicleState ego_;
  std::vector<Vehicle> vehicles_;
  int next_id_ = 1;
};

}  // namespace tmpud

#endif  // TMPUD_TRAFFIC_H_
