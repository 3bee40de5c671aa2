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

#ifndef TMPUD_TASK_PLANNER_H_
#define TMPUD_TASK_PLANNER_H_

#include <cmath>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "tmpud/symbolic.h"

namespace tmpud {

inline constexpr double kDefaultGamma = 50.0;

using ActionSet = std::unordered_set<DrivingAction, DrivingActionHash>;
template <typename T>
using ActionMap = std::unordered_map<DrivingAction, T, DrivingActionHash>;

// Per-transition Cost (meters) and Safe ([0, 1]) functions plus the safety
// weight gamma. Missing entries fall back to the geometric length of the
// target lane and to Safe = 1.0.
class UtilityTables {
 public:
  explicit UtilityTables(double gamma = kDefaultGamma);

  double gamma() const { return gamma_; }
  void set_gamma(double gamma);

  void set_cost(const DrivingAction& a, double cost);
  void set_safe(const DrivingAction& a, double safe);
  void clear_safe() { safe_.clear(); }

  std::optional<double> cost_entry(const DrivingAction& a) const;
  std::optional<double> safe_entry(const DrivingAction& a) const;
  double cost_of(const DrivingAction& a, const RoadNetwork& network) const;
  double safe_of(const DrivingAction& a) const;

  const ActionMap<double>& costs() const { return cost_; }
  const ActionMap<double>& safeties() const { return safe_; }

 private:
  ActionMap<double> cost_;
  ActionMap<double> safe_;
  double gamma_;
};

// Cost + gamma / (1 + e^(Safe - 1)).
inline double transition_utility(double cost, double safe, double gamma) {
  return cost + gamma / (1.0 + std::exp(safe - 1.0));
}

double transition_utility(const DrivingAction& a, const UtilityTables& tables,
                          const RoadNetwork& network);

// Length of the target lane's centerline.
double default_transition_cost(const DrivingAction& a, const RoadNetwork& network);

// Goal predicate: a segment, optionally restricted to one lane.
struct GoalSpec {
  int segment = 0;
  std::optional<int> lane;

  static GoalSpec exactly(const SymbolicState& s) { return {s.segment, s.lane}; }
  bool satisfied_by(const SymbolicState& s) const {
    return s.direction == Direction::kForward && s.segment == segment &&
           (!lane || *lane == s.lane);
  }
};

struct PlanningProblem {
  SymbolicState initial;
  GoalSpec goal;
  const RoadNetwork* network = nullptr;
};

// Sum of transition utilities along the plan.
double plan_utility(const Plan& plan, const UtilityTables& tables,
                    const RoadNetwork& network);

// Optimal plan under the summed transition utility, found by uniform-cost
// search over symbolic states. Equal-utility plans are ordered by fewer
// transitions, then lexicographically by action kind (mergeleft < mergeright
// < forward < turnleft < turnright). Actions in `forbidden` are skipped.
//
// Throws InvalidArgument for an invalid initial state and NoPlanExists when
// no goal state is reachable.
Plan compute_plan(const PlanningProblem& problem, const UtilityTables& tables,
                  const ActionSet& forbidden = {});

// Every grounded action of the network, in deterministic order.
std::vector<DrivingAction> all_actions(const RoadNetwork& network);

}  // namespace tmpud

#endif  // TMPUD_TASK_PLANNER_H_
