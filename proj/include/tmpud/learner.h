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

#ifndef TMPUD_LEARNER_H_
#define TMPUD_LEARNER_H_

#include <cstdint>
#include <iterator>
#include <vector>

#include "tmpud/safety_estimator.h"
#include "tmpud/traffic.h"
#include "tmpud/world_model.h"

namespace tmpud {

inline SafetyParameters learning_estimator() {
  SafetyParameters p;
  p.samples = 200;
  return p;
}

struct LearnerOptions {
  int episodes = 1000;  // per action kind and safety bucket
  // Episodes are drawn in rounds of `episodes` until every bucket is full or
  // this many rounds ran; rare buckets may stay short.
  int max_rounds = 10;
  std::uint64_t seed = 1;
  int workers = 1;
  std::vector<ActionKind> kinds{std::begin(kAllActionKinds), std::end(kAllActionKinds)};
  // Estimator settings used to label episodes; fewer samples than the
  // online default keep learning fast.
  SafetyParameters estimator = learning_estimator();
  TrafficParameters traffic;
  ControllerGains gains;
  double spawn_window = 30.0;   // longitudinal spread of traffic around the ego (m)
  double spawn_spacing = 8.0;   // minimum same-lane spacing at spawn (m)
  double timeout = 60.0;
};

// The learning arena: a 200 m straight two-lane road split into the
// segments "approach" and "merge" (100 m each).
const RoadNetwork& learning_arena();

struct Episode {
  double safety = 1.0;
  Outcome outcome = Outcome::kSuccess;
  bool timed_out = false;
};

// One micro-simulation: spawn the ego in the completion zone of the source
// lane and the factor-implied traffic around it, estimate the action's
// safety, then drive the action and classify what happened. Turns are
// driven as lane-keeping runs, as the arena has no junction.
Episode run_episode(ActionKind kind, const DomainFactors& factors,
                    const LearnerOptions& options, std::uint64_t seed);

// Fills each safety bucket of each kind with up to options.episodes outcome
// counts. The safety histogram keeps every episode drawn, so it reflects how
// often each value occurs. Deterministic for a given seed and any worker
// count.
WorldModel learn_world_model(const DomainFactors& factors, const LearnerOptions& options);

}  // namespace tmpud

#endif  // TMPUD_LEARNER_H_
