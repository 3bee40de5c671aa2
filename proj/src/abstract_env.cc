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

#include "tmpud/abstract_env.h"

#include "tmpud/errors.h"
#include "tmpud/rng.h"

namespace tmpud {

TrialStep step_trial(const SymbolicState& state, const DrivingAction& action,
                     const RoadNetwork& network, const WorldModel& model,
                     const DomainFactors& factors, double mu, std::uint64_t seed) {
  if (action.source != state || !is_applicable(action, network)) {
    throw InvalidArgument("action " + describe(action, network) + " is not applicable in " +
                          describe(state, network));
  }
  TrialStep step;
  step.outcome = sample_outcome(model, action.kind, factors, mu, seed);
  if (step.outcome == Outcome::kCollide) {
    step.next = state;
    return step;
  }
  step.next = action.target;
  step.distance = default_transition_cost(action, network);
  return step;
}

AbstractEnvironment::AbstractEnvironment(const RoadNetwork& network, const WorldModel& model,
                                         DomainFactors factors, std::uint64_t trial_seed,
                                         double speed)
    : network_(&network), model_(&model), factors_(factors), seed_(trial_seed),
      speed_(speed) {
  if (!(speed_ > 0.0)) throw InvalidArgument("speed must be positive");
}

double AbstractEnvironment::transition_cost(const DrivingAction& action) {
  return default_transition_cost(action, *network_);
}

double AbstractEnvironment::latent_safety(const DrivingAction& action) const {
  return sample_safety(*model_, action.kind, factors_,
                       derive_seed({seed_, action_key(action),
                                    static_cast<std::uint64_t>(epoch_), 1}));
}

SafetyReport AbstractEnvironment::estimate_safety(const DrivingAction& action) {
  return {latent_safety(action), std::nullopt};
}

ActionReport AbstractEnvironment::execute(const DrivingAction& action) {
  const TrialStep step =
      step_trial(action.source, action, *network_, *model_, factors_, latent_safety(action),
                 derive_seed({seed_, action_key(action), static_cast<std::uint64_t>(epoch_), 2}));
  ++epoch_;
  ActionReport r;
  const double length = default_transition_cost(action, *network_);
  time_ += length / speed_;
  r.detail = std::string(outcome_name(step.outcome, action.kind));
  switch (step.outcome) {
    case Outcome::kCollide:
      r.completed = false;
      r.collision = true;
      break;
    case Outcome::kStop:
      r.forced_stops = 1;
      r.distance = step.distance;
      break;
    case Outcome::kSuccess:
      r.distance = step.distance;
      break;
  }
  return r;
}

void AbstractEnvironment::wait() {
  ++epoch_;
  time_ += 1.0;
}

}  // namespace tmpud
