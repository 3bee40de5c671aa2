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

#include "tmpud/task_planner.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <queue>
#include <set>

#include "tmpud/errors.h"

namespace tmpud {

UtilityTables::UtilityTables(double gamma) : gamma_(kDefaultGamma) {
  set_gamma(gamma);
}

void UtilityTables::set_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("gamma must be positive and finite");
  }
  gamma_ = gamma;
}

void UtilityTables::set_cost(const DrivingAction& a, double cost) {
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    throw InvalidArgument("cost must be finite and non-negative");
  }
  cost_[a] = cost;
}

void UtilityTables::set_safe(const DrivingAction& a, double safe) {
  if (!(safe >= 0.0 && safe <= 1.0)) {
    throw InvalidArgument("safety value must lie in [0, 1]");
  }
  safe_[a] = safe;
}

std::optional<double> UtilityTables::cost_entry(const DrivingAction& a) const {
  const auto it = cost_.find(a);
  if (it == cost_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> UtilityTables::safe_entry(const DrivingAction& a) const {
  const auto it = safe_.find(a);
  if (it == safe_.end()) return std::nullopt;
  return it->second;
}

double UtilityTables::cost_of(const DrivingAction& a,
                              const RoadNetwork& network) const {
  if (auto c = cost_entry(a)) return *c;
  return default_transition_cost(a, network);
}

double UtilityTables::safe_of(const DrivingAction& a) const {
  return safe_entry(a).value_or(1.0);
}

double default_transition_cost(const DrivingAction& a, const RoadNetwork& network) {
  return network.centerline(a.target.lane_ref()).length();
}

double transition_utility(const DrivingAction& a, const UtilityTables& tables,
                          const RoadNetwork& network) {
  return transition_utility(tables.cost_of(a, network), tables.safe_of(a),
                            tables.gamma());
}

double plan_utility(const Plan& plan, const UtilityTables& tables,
                    const RoadNetwork& network) {
  double total = 0.0;
  for (const DrivingAction& a : plan.steps) {
    total += transition_utility(a, tables, network);
  }
  return total;
}

std::vector<DrivingAction> all_actions(const RoadNetwork& network) {
  std::vector<DrivingAction> out;
  for (int seg = 0; seg < network.segment_count(); ++seg) {
    for (int lane = 0; lane < network.lane_count(seg); ++lane) {
      const auto succ = successors({seg, lane, Direction::kForward}, network);
      out.insert(out.end(), succ.begin(), succ.end());
    }
  }
  return out;
}

namespace {

// Search label. Paths share prefixes through `parent`.
struct Label {
  double utility;
  int depth;
  SymbolicState state;
  std::shared_ptr<const Label> parent;
  DrivingAction action;  // meaningless for the root
};
using LabelPtr = std::shared_ptr<const Label>;

std::vector<DrivingAction> actions_of(const Label* label) {
  std::vector<DrivingAction> out;
  for (; label != nullptr && label->parent != nullptr; label = label->parent.get()) {
    out.push_back(label->action);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Strict "a is preferred to b": lower utility, then fewer transitions, then
// the lexicographically smaller action sequence.
bool preferred(const LabelPtr& a, const LabelPtr& b) {
  if (a->utility != b->utility) return a->utility < b->utility;
  if (a->depth != b->depth) return a->depth < b->depth;
  return actions_of(a.get()) < actions_of(b.get());
}

}  // namespace

Plan compute_plan(const PlanningProblem& problem, const UtilityTables& tables,
                  const ActionSet& forbidden) {
  if (problem.network == nullptr) throw InvalidArgument("problem has no network");
  const RoadNetwork& network = *problem.network;
  if (!is_valid_state(problem.initial, network)) {
    throw InvalidArgument("initial state " + describe(problem.initial, network) +
                          " is not valid");
  }

  auto worse = [](const LabelPtr& a, const LabelPtr& b) { return preferred(b, a); };
  std::priority_queue<LabelPtr, std::vector<LabelPtr>, decltype(worse)> open(worse);
  std::set<SymbolicState> closed;
  open.push(std::make_shared<const Label>(
      Label{0.0, 0, problem.initial, nullptr, DrivingAction{}}));

  while (!open.empty()) {
    LabelPtr top = open.top();
    open.pop();
    if (!closed.insert(top->state).second) continue;
    if (problem.goal.satisfied_by(top->state)) {
      return Plan{problem.initial, actions_of(top.get())};
    }
    for (const DrivingAction& a : successors(top->state, network)) {
      if (closed.contains(a.target) || forbidden.contains(a)) continue;
      open.push(std::make_shared<const Label>(
          Label{top->utility + transition_utility(a, tables, network),
                top->depth + 1, a.target, top, a}));
    }
  }
  throw NoPlanExists("no plan from " + describe(problem.initial, network) +
                     " reaches the goal segment " +
                     network.segment(problem.goal.segment).id);
}

}  // namespace tmpud
