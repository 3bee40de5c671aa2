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

#include "tmpud/executor.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tmpud/errors.h"
#include "tmpud/json_io.h"

namespace tmpud {

ExecutionPolicy ExecutionPolicy::thbased(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("beta must lie in [0, 1]");
  return {PolicyKind::kThBased, beta};
}

std::string ExecutionPolicy::name() const {
  switch (kind) {
    case PolicyKind::kTmpud:
      return "tmpud";
    case PolicyKind::kNoCom:
      return "nocom";
    case PolicyKind::kThBased: {
      std::ostringstream out;
      out << "th" << beta;
      return out.str();
    }
  }
  return "?";
}

ExecutionPolicy ExecutionPolicy::parse(std::string_view name) {
  if (name == "tmpud") return tmpud();
  if (name == "nocom") return nocom();
  if (name.starts_with("th")) {
    std::string_view digits = name.substr(2);
    if (digits.starts_with("based")) digits = digits.substr(5);
    double beta = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), beta);
    if (ec == std::errc() && end == digits.data() + digits.size() && !digits.empty()) {
      return thbased(beta);
    }
  }
  throw ParseError("unknown policy '" + std::string(name) +
                   "' (expected tmpud, nocom or th<beta>)");
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kPlanComputed: return "plan_computed";
    case EventKind::kSafetyEstimated: return "safety_estimated";
    case EventKind::kReplanned: return "replanned";
    case EventKind::kActionStarted: return "action_started";
    case EventKind::kActionCompleted: return "action_completed";
    case EventKind::kCollision: return "collision";
    case EventKind::kForcedStop: return "forced_stop";
    case EventKind::kGoalReached: return "goal_reached";
    case EventKind::kActionRejected: return "action_rejected";
    case EventKind::kWaited: return "waited";
    case EventKind::kPlanFailed: return "plan_failed";
  }
  return "?";
}

void ExecutionTrace::add(TraceEvent event) { events_.push_back(std::move(event)); }

std::vector<DrivingAction> ExecutionTrace::executed_actions() const {
  std::vector<DrivingAction> out;
  for (const TraceEvent& e : events_) {
    if (e.kind == EventKind::kActionStarted && e.action) out.push_back(*e.action);
  }
  return out;
}

int ExecutionTrace::count(EventKind kind) const {
  return static_cast<int>(std::count_if(events_.begin(), events_.end(),
                                        [&](const TraceEvent& e) { return e.kind == kind; }));
}

void ExecutionTrace::write_jsonl(std::ostream& out, const RoadNetwork& network) const {
  for (const TraceEvent& e : events_) {
    Json j;
    j["t"] = e.time;
    j["event"] = std::string(to_string(e.kind));
    if (e.action) j["action"] = describe(*e.action, network);
    if (e.value) j["value"] = *e.value;
    if (!e.detail.empty()) j["detail"] = e.detail;
    out << j.dump() << "\n";
  }
}

namespace {

std::string describe_plan(const Plan& plan, const RoadNetwork& network) {
  std::string out;
  for (const DrivingAction& a : plan.steps) {
    if (!out.empty()) out += "; ";
    out += describe(a, network);
  }
  return out.empty() ? "(empty)" : out;
}

PlanningProblem from_state(const PlanningProblem& problem, const SymbolicState& s) {
  PlanningProblem p = problem;
  p.initial = s;
  return p;
}

class Loop {
 public:
  Loop(const PlanningProblem& problem, Environment& env, const ExecutorConfig& config)
      : problem_(problem), env_(env), config_(config), tables_(config.gamma),
        state_(problem.initial) {
    if (problem.network == nullptr) throw InvalidArgument("problem has no network");
    for (const DrivingAction& a : all_actions(network())) {
      tables_.set_cost(a, env_.transition_cost(a));
    }
  }

  const RoadNetwork& network() const { return *problem_.network; }

  void emit(EventKind kind, std::optional<DrivingAction> action = std::nullopt,
            std::optional<double> value = std::nullopt, std::string detail = {}) {
    trace_.add({env_.now(), kind, action, value, std::move(detail)});
  }

  std::optional<Plan> plan(const ActionSet& forbidden = {}) {
    try {
      return compute_plan(from_state(problem_, state_), tables_, forbidden);
    } catch (const NoPlanExists&) {
      return std::nullopt;
    }
  }

  void fail(const std::string& why) {
    emit(EventKind::kPlanFailed, std::nullopt, std::nullopt, why);
  }

  // Runs one action at the motion level. False when the trial is over.
  bool execute(const DrivingAction& a) {
    emit(EventKind::kActionStarted, a);
    const ActionReport r = env_.execute(a);
    if (r.forced_stops > 0) {
      emit(EventKind::kForcedStop, a, r.forced_stops, r.detail);
    }
    if (r.collision) {
      trace_.partial_distance += r.distance;
      emit(EventKind::kCollision, a, std::nullopt, r.detail);
      return false;
    }
    if (!r.completed) {
      trace_.partial_distance += r.distance;
      fail("action did not complete: " + (r.detail.empty() ? describe(a, network()) : r.detail));
      return false;
    }
    trace_.distance += r.distance;
    state_ = a.target;
    emit(EventKind::kActionCompleted, a, r.distance);
    return true;
  }

  bool tick() {
    if (++iterations_ > config_.max_iterations) {
      fail("iteration limit reached");
      return false;
    }
    return true;
  }

  void finish() {
    emit(EventKind::kGoalReached, std::nullopt, std::nullopt, describe(state_, network()));
  }

  void observe(const Plan& remaining, const Plan& recomputed, bool replanned) {
    if (config_.observer) {
      config_.observer({state_, remaining, recomputed, &tables_, replanned});
    }
  }

  const PlanningProblem& problem_;
  Environment& env_;
  const ExecutorConfig& config_;
  UtilityTables tables_;
  SymbolicState state_;
  ExecutionTrace trace_;
  int iterations_ = 0;
};

void pop_front(Plan& plan, const SymbolicState& state) {
  plan.steps.erase(plan.steps.begin());
  plan.initial = state;
}

}  // namespace

ExecutionTrace run_tmpud(const PlanningProblem& problem, Environment& env,
                         const ExecutorConfig& config) {
  Loop loop(problem, env, config);
  std::optional<Plan> p = loop.plan();
  if (!p) {
    loop.fail("no plan from the initial state");
    return std::move(loop.trace_);
  }
  loop.emit(EventKind::kPlanComputed, std::nullopt, std::nullopt,
            describe_plan(*p, loop.network()));

  while (!p->empty()) {
    if (!loop.tick()) return std::move(loop.trace_);
    const DrivingAction a = p->steps.front();
    const SafetyReport r = env.estimate_safety(a);
    loop.emit(EventKind::kSafetyEstimated, a, r.safety);
    loop.tables_.set_safe(a, r.safety);
    if (r.cost) loop.tables_.set_cost(a, *r.cost);

    std::optional<Plan> next = loop.plan();
    if (!next) {
      loop.fail("no plan after updating " + describe(a, loop.network()));
      return std::move(loop.trace_);
    }
    // A different plan of equal utility (up to rounding) is not an
    // improvement; keep the current one.
    bool same = *next == *p;
    if (!same) {
      const double current = plan_utility(*p, loop.tables_, loop.network());
      const double candidate = plan_utility(*next, loop.tables_, loop.network());
      same = !(candidate < current - 1e-9 * std::max(1.0, std::abs(current)));
    }
    loop.observe(*p, *next, !same);
    if (same) {
      if (!loop.execute(a)) return std::move(loop.trace_);
      pop_front(*p, loop.state_);
    } else {
      loop.emit(EventKind::kReplanned, std::nullopt, std::nullopt,
                describe_plan(*next, loop.network()));
      p = std::move(next);
    }
  }
  loop.finish();
  return std::move(loop.trace_);
}

ExecutionTrace run_baseline(const PlanningProblem& problem, Environment& env,
                            const ExecutionPolicy& policy, const ExecutorConfig& config) {
  if (policy.kind == PolicyKind::kTmpud) {
    throw InvalidArgument("run_baseline expects nocom or thbased");
  }
  Loop loop(problem, env, config);
  std::optional<Plan> p = loop.plan();
  if (!p) {
    loop.fail("no plan from the initial state");
    return std::move(loop.trace_);
  }
  loop.emit(EventKind::kPlanComputed, std::nullopt, std::nullopt,
            describe_plan(*p, loop.network()));

  if (policy.kind == PolicyKind::kNoCom) {
    for (const DrivingAction& a : p->steps) {
      if (!loop.execute(a)) return std::move(loop.trace_);
    }
    loop.finish();
    return std::move(loop.trace_);
  }

  // ThBased. Rejections accumulate while the vehicle stays in one state and
  // are lifted once it moves on or after waiting.
  ActionSet rejected;
  int waits = 0;
  while (!p->empty()) {
    if (!loop.tick()) return std::move(loop.trace_);
    const DrivingAction a = p->steps.front();
    const SafetyReport r = env.estimate_safety(a);
    loop.emit(EventKind::kSafetyEstimated, a, r.safety);

    if (r.safety >= policy.beta) {
      if (!loop.execute(a)) return std::move(loop.trace_);
      pop_front(*p, loop.state_);
      waits = 0;
      if (!rejected.empty()) {
        rejected.clear();
        std::optional<Plan> next = loop.plan();
        if (!next) {
          loop.fail("no plan after lifting rejections");
          return std::move(loop.trace_);
        }
        if (*next != *p) {
          loop.emit(EventKind::kReplanned, std::nullopt, std::nullopt,
                    describe_plan(*next, loop.network()));
          p = std::move(next);
        }
      }
      continue;
    }

    loop.emit(EventKind::kActionRejected, a, r.safety);
    rejected.insert(a);
    std::optional<Plan> next = loop.plan(rejected);
    if (!next) {
      if (waits >= config.max_waits) {
        loop.fail("every alternative rejected after " + std::to_string(waits) + " waits");
        return std::move(loop.trace_);
      }
      env.wait();
      ++waits;
      loop.emit(EventKind::kWaited, std::nullopt, waits);
      rejected.clear();
      next = loop.plan();
      if (!next) {
        loop.fail("no plan after waiting");
        return std::move(loop.trace_);
      }
    }
    loop.emit(EventKind::kReplanned, std::nullopt, std::nullopt,
              describe_plan(*next, loop.network()));
    p = std::move(next);
  }
  loop.finish();
  return std::move(loop.trace_);
}

ExecutionTrace run_policy(const PlanningProblem& problem, Environment& env,
                          const ExecutionPolicy& policy, const ExecutorConfig& config) {
  if (policy.kind == PolicyKind::kTmpud) return run_tmpud(problem, env, config);
  return run_baseline(problem, env, policy, config);
}

double ScriptedEnvironment::transition_cost(const DrivingAction& action) {
  return default_transition_cost(action, *network_);
}

SafetyReport ScriptedEnvironment::estimate_safety(const DrivingAction& action) {
  const auto it = safety_.find(action);
  return {it == safety_.end() ? 1.0 : it->second, std::nullopt};
}

ActionReport ScriptedEnvironment::execute(const DrivingAction& action) {
  ActionReport r;
  const double length = default_transition_cost(action, *network_);
  time_ += length / 5.0;
  if (collide_.contains(action)) {
    r.completed = false;
    r.collision = true;
    r.distance = 0.5 * length;
    return r;
  }
  r.forced_stops = stop_.contains(action) ? 1 : 0;
  r.distance = length;
  return r;
}

}  // namespace tmpud
