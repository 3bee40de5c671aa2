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

#ifndef TMPUD_SAFETY_ESTIMATOR_H_
#define TMPUD_SAFETY_ESTIMATOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tmpud/path_planner.h"
#include "tmpud/rng.h"
#include "tmpud/symbolic.h"
#include "tmpud/trajectory.h"
#include "tmpud/vehicle.h"

namespace tmpud {

struct SafetyParameters {
  double horizon = 3.0;         // T (s)
  double interval = 0.5;        // omega (s)
  int samples = 2000;           // M
  double safe_distance = 2.0;   // d_safe (m)
  double sensing_radius = 50.0;
  ControlEnvelope envelope;

  // Throws InvalidArgument unless T > 0, 0 < omega <= T, M >= 1, d_safe >= 0.
  void validate() const;
  // Number of time indices k = 0..floor(T / omega).
  int time_steps() const;
};

// Constant speed and turn rate extrapolation of `v` by `dt` seconds.
VehicleState predict_state(const VehicleState& v, double dt);

// predict_state sampled at t1 + k * interval for k = 0..floor((t2-t1)/interval).
// `v` is the observation at t1.
Trajectory predict_surrounding(const VehicleState& v, double t1, double t2,
                               double interval);

// U^S_i(t): controls that, held constant from the ego state at time t, keep
// the ego at least `safe_distance` from the predicted vehicle at every
// checked instant t + j * interval, j = 1..J. The prediction is evaluated
// analytically, so instants past the horizon are allowed.
class SafeControlSet {
 public:
  SafeControlSet(const VehicleState& ego_at_t, double t, const VehicleState& other,
                 double other_time, double interval, int checks, double safe_distance,
                 const ControlEnvelope& envelope = {});

  double time() const { return t_; }
  int checks() const { return static_cast<int>(others_.size()); }
  bool contains(const ControlSignal& u) const;
  bool operator()(const ControlSignal& u) const { return contains(u); }

 private:
  VehicleState ego_;
  double t_;
  double interval_;
  double safe_distance_;
  ControlEnvelope envelope_;
  std::vector<Footprint> others_;
};

// o_i(t): fraction of M controls drawn uniformly from the envelope that
// `member` accepts. Pure given the seed.
template <typename Membership>
double safe_probability(const Membership& member, const ControlEnvelope& envelope,
                        int samples, std::uint64_t seed) {
  Rng rng(seed);
  int hits = 0;
  for (int m = 0; m < samples; ++m) {
    const double a = rng.uniform(envelope.min_acceleration, envelope.max_acceleration);
    const double s = rng.uniform(envelope.min_steering, envelope.max_steering);
    if (member(ControlSignal{a, s})) ++hits;
  }
  return samples > 0 ? static_cast<double>(hits) / samples : 0.0;
}

// (max + mean) / 2 of the per-instant values. Throws EmptyInput when empty
// and InvalidArgument for values outside [0, 1].
double aggregate_over_time(std::span<const double> values);

struct SafetyQuery {
  DrivingAction action;
  VehicleState ego;
  std::vector<VehicleState> surrounding;
  double time = 0.0;  // t1
  SafetyParameters params;
  std::uint64_t seed = 0;
  // Optional obstacles for the ego path search.
  std::vector<Footprint> obstacles;
};

struct VehicleSafety {
  int id = 0;
  double aggregated = 1.0;       // o_i*
  std::vector<double> per_time;  // o_i(t1 + k * omega)
};

struct SafetyEstimate {
  double value = 1.0;
  bool motion_infeasible = false;
  std::vector<VehicleSafety> vehicles;  // only those within sensing range
  Trajectory ego_plan;
};

// Samples the start and goal poses of the action (the start is the ego's own
// pose when it lies in the source region), plans the ego trajectory, and
// returns the minimum aggregated safe probability over sensed vehicles. An
// unreachable goal yields value 0 with motion_infeasible set.
SafetyEstimate estimate_safety(const SafetyQuery& query, const RoadNetwork& network,
                               const PathPlanner& planner);

// Tolerance used to decide that the ego already sits in the source region.
inline constexpr double kRegionTolerance = 2.0;

}  // namespace tmpud

#endif  // TMPUD_SAFETY_ESTIMATOR_H_
