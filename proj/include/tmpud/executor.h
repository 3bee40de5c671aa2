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

#ifndef TMPUD_EXECUTOR_H_
#define TMPUD_EXECUTOR_H_

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tmpud/task_planner.h"

namespace tmpud {

enum class PolicyKind : std::uint8_t { kTmpud, kNoCom, kThBased };

struct ExecutionPolicy {
  PolicyKind kind = PolicyKind::kTmpud;
  double beta = 0.0;  // ThBased only

  static ExecutionPolicy tmpud() { return {PolicyKind::kTmpud, 0.0}; }
  static ExecutionPolicy nocom() { return {PolicyKind::kNoCom, 0.0}; }
  // Throws InvalidArgument unless beta is in [0, 1].
  static ExecutionPolicy thbased(double beta);

  // "tmpud", "nocom", or "th<beta>" such as "th0.3".
  std::string name() const;
  static ExecutionPolicy parse(std::string_view name);

  bool operator==(const ExecutionPolicy&) const = default;
};

enum class EventKind : std::uint8_t {
  kPlanComputed,
  kSafetyEstimated,
  kReplanned,
  kActionStarted,
  kActionCompleted,
  kCollision,
  kForcedStop,
  kGoalReached,
  kActionRejected,
  kWaited,
  kPlanFailed,
};

std::string_view to_string(EventKind kind);

struct TraceEvent {
  double time = 0.0;
  EventKind kind = EventKind::kPlanComputed;
  std::optional<DrivingAction> action;
  std::optional<double> value;
  std::string detail;
};

class ExecutionTrace {
 public:
  void add(TraceEvent event);
  const std::vector<TraceEvent>& events() const { return events_; }

  std::vector<DrivingAction> executed_actions() const;  // action_started order
  int count(EventKind kind) const;
  bool reached_goal() const { return count(EventKind::kGoalReached) > 0; }
  bool collided() const { return count(EventKind::kCollision) > 0; }
  bool failed() const { return count(EventKind::kPlanFailed) > 0; }
  int unsafe_count() const {
    return count(EventKind::kCollision) + count(EventKind::kForcedStop);
  }

  double distance = 0.0;  // metres driven by completed actions
  double partial_distance = 0.0;  // metres driven by an action that collided

  // One JSON object per line.
  void write_jsonl(std::ostream& out, const RoadNetwork& network) const;

 private:
  std::vector<TraceEvent> events_;
};

struct SafetyReport {
  double safety = 1.0;
  std::optional<double> cost;  // refreshed motion-level cost, if measured
};

struct ActionReport {
  bool completed = true;
  bool collision = false;
  int forced_stops = 0;
  double distance = 0.0;
  std::string detail;
};

// What the executor needs from the world: time, motion-level costs, the
// safety estimator, and the motion layer that drives an action to its end.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual double now() const = 0;
  // Cost(<s, a, s'>) before any interaction.
  virtual double transition_cost(const DrivingAction& action) = 0;
  virtual SafetyReport estimate_safety(const DrivingAction& action) = 0;
  virtual ActionReport execute(const DrivingAction& action) = 0;
  // Lets time pass in place so traffic changes (used by ThBased when every
  // alternative was rejected).
  virtual void wait() = 0;
};

// Per-iteration view handed to ExecutorConfig::observer.
struct IterationSnapshot {
  SymbolicState state;
  Plan remaining;     // plan before the update
  Plan recomputed;    // plan computed after the update
  const UtilityTables* tables = nullptr;
  bool replanned = false;
};

struct ExecutorConfig {
  double gamma = kDefaultGamma;
  int max_iterations = 10000;  // guards against estimate/replan cycles
  int max_waits = 10;          // ThBased only
  std::function<void(const IterationSnapshot&)> observer;
};

// Interactive task-motion loop: optimistic Safe = 1 initialization, then per
// action estimate, table update, replan, and either execution or adoption
// of the new plan.
ExecutionTrace run_tmpud(const PlanningProblem& problem, Environment& env,
                         const ExecutorConfig& config = {});

// NoCom (plan once, execute everything) and ThBased (reject actions whose
// safety falls below beta and replan around them).
ExecutionTrace run_baseline(const PlanningProblem& problem, Environment& env,
                            const ExecutionPolicy& policy,
                            const ExecutorConfig& config = {});

// Dispatches on policy.kind.
ExecutionTrace run_policy(const PlanningProblem& problem, Environment& env,
                          const ExecutionPolicy& policy,
                          const ExecutorConfig& config = {});

// Deterministic stand-in world: scripted safety values (default 1.0),
// geometric costs, and actions that always complete unless scripted
// otherwise.
class ScriptedEnvironment : public Environment {
 public:
  explicit ScriptedEnvironment(const RoadNetwork& network) : network_(&network) {}

  void set_safety(const DrivingAction& action, double safety) { safety_[action] = safety; }
  void set_collision(const DrivingAction& action) { collide_.insert(action); }
  void set_forced_stop(const DrivingAction& action) { stop_.insert(action); }

  double now() const override { return time_; }
  double transition_cost(const DrivingAction& action) override;
  SafetyReport estimate_safety(const DrivingAction& action) override;
  ActionReport execute(const DrivingAction& action) override;
  void wait() override { time_ += 1.0; ++waits_; }

  int waits() const { return waits_; }

 private:
  const RoadNetwork* network_;
  ActionMap<double> safety_;
  ActionSet collide_;
  ActionSet stop_;
  double time_ = 0.0;
  int waits_ = 0;
};

}  // namespace tmpud

#endif  // TMPUD_EXECUTOR_H_
