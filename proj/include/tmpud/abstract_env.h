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

#ifndef TMPUD_ABSTRACT_ENV_H_
#define TMPUD_ABSTRACT_ENV_H_

#include <cstdint>

#include "tmpud/executor.h"
#include "tmpud/world_model.h"

namespace tmpud {

struct TrialStep {
  SymbolicState next;
  Outcome outcome = Outcome::kSuccess;
  double distance = 0.0;
};

// Advances an abstract trial by one action: draws the outcome for safety
// value `mu`, applies the symbolic effect unless the ego collided, and adds
// the target lane's length unless it collided. Throws InvalidArgument when
// the action does not start in `state` or is not applicable.
TrialStep step_trial(const SymbolicState& state, const DrivingAction& action,
                     const RoadNetwork& network, const WorldModel& model,
                     const DomainFactors& factors, double mu, std::uint64_t seed);

// Environment whose action outcomes come from a world model. Each action has
// a latent safety value per epoch, drawn from the model's safety histogram
// and hashed from (trial seed, action, epoch). Epochs advance whenever time
// passes (an executed action or a wait), so repeated estimates at one instant
// agree, and outcomes are the same whether or not a policy estimated first.
class AbstractEnvironment : public Environment {
 public:
  AbstractEnvironment(const RoadNetwork& network, const WorldModel& model,
                      DomainFactors factors, std::uint64_t trial_seed,
                      double speed = 20.0 / 3.6);

  double now() const override { return time_; }
  double transition_cost(const DrivingAction& action) override;
  SafetyReport estimate_safety(const DrivingAction& action) override;
  ActionReport execute(const DrivingAction& action) override;
  void wait() override;

  double latent_safety(const DrivingAction& action) const;
  int epoch() const { return epoch_; }

 private:
  const RoadNetwork* network_;
  const WorldModel* model_;
  DomainFactors factors_;
  std::uint64_t seed_;
  double speed_;
  double time_ = 0.0;
  int epoch_ = 0;
};

}  // namespace tmpud

#endif  // TMPUD_ABSTRACT_ENV_H_
