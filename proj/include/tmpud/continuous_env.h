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

#ifndef TMPUD_CONTINUOUS_ENV_H_
#define TMPUD_CONTINUOUS_ENV_H_

#include <cstdint>
#include <map>
#include <optional>

#include "tmpud/executor.h"
#include "tmpud/path_planner.h"
#include "tmpud/safety_estimator.h"
#include "tmpud/traffic.h"
#include "tmpud/world_model.h"

namespace tmpud {

struct ContinuousOptions {
  SafetyParameters estimator;
  TrafficParameters traffic;
  ControllerGains gains;
  double spawn_window = 30.0;
  double spawn_spacing = 8.0;
};

// Environment backed by the micro-simulator. Costs are motion-plan lengths,
// safety comes from the sampling estimator, and actions are driven by the
// tracking controller through live traffic. Traffic is redrawn around the
// ego after every completed action and every wait.
class ContinuousEnvironment : public Environment {
 public:
  // Throws InvalidArgument for an invalid initial state.
  ContinuousEnvironment(const RoadNetwork& network, const SymbolicState& initial,
                        DomainFactors factors, std::uint64_t seed,
                        ContinuousOptions options = {});

  double now() const override { return world_.now() + idle_; }
  double transition_cost(const DrivingAction& action) override;
  SafetyReport estimate_safety(const DrivingAction& action) override;
  ActionReport execute(const DrivingAction& action) override;
  void wait() override;

  const SymbolicState& state() const { return state_; }
  const TrafficWorld& world() const { return world_; }

  // Cost reported for actions without a motion plan.
  static constexpr double kInfeasibleCost = 1e6;

 private:
  SafetyEstimate estimate(const DrivingAction& action);
  void respawn();

  const RoadNetwork* network_;
  PathPlanner planner_;
  DomainFactors factors_;
  std::uint64_t seed_;
  ContinuousOptions options_;
  TrafficWorld world_;
  SymbolicState state_;
  double idle_ = 0.0;  // time spent waiting in place
  std::uint64_t draws_ = 0;
  std::map<DrivingAction, double> costs_;
};

}  // namespace tmpud

#endif  // TMPUD_CONTINUOUS_ENV_H_
