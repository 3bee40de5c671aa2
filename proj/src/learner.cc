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

#include "tmpud/learner.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "tmpud/errors.h"
#include "tmpud/parallel.h"

namespace tmpud {
namespace {

constexpr double kSegmentLength = 100.0;

const PathPlanner& arena_planner() {
  static const PathPlanner planner(learning_arena());
  return planner;
}

}  // namespace

const RoadNetwork& learning_arena() {
  static const RoadNetwork arena = RoadNetwork::from_json_text(R"({
    "segments": [
      {"id": "approach", "reference": {"start": [0, 0, 0], "length": 100}, "lanes": 2},
      {"id": "merge", "reference": {"start": [100, 0, 0], "length": 100}, "lanes": 2}
    ],
    "connections": [{"from": "approach", "to": "merge", "action": "forward"}]
  })", "<arena>");
  return arena;
}

Episode run_episode(ActionKind kind, const DomainFactors& factors,
                    const LearnerOptions& options, std::uint64_t seed) {
  const RoadNetwork& arena = learning_arena();
  const int approach = arena.segment_index("approach");
  const int merge = arena.segment_index("merge");
  Rng rng(derive_seed({seed, 10}));

  int source_lane = 0;
  int target_lane = 0;
  ActionKind driven = kind;
  switch (kind) {
    case ActionKind::kMergeLeft:
      source_lane = 0;
      target_lane = 1;
      break;
    case ActionKind::kMergeRight:
      source_lane = 1;
      target_lane = 0;
      break;
    default:
      source_lane = target_lane = static_cast<int>(rng.next() % 2);
      driven = ActionKind::kForward;
      break;
  }
  const DrivingAction action{driven, {approach, source_lane}, {merge, target_lane}};

  VehicleState ego;
  ego.pose = sample_state_pose(action.source, arena, derive_seed({seed, 11}));
  ego.speed = options.gains.target_speed;
  ego.id = 0;
  const double ego_arc = arena.centerline(action.source.lane_ref()).project(ego.pose.position());

  TrafficParameters traffic = options.traffic;
  traffic.accel_range = factors.acceleration_range();
  TrafficWorld world(arena, traffic, derive_seed({seed, 12}), options.gains,
                     options.estimator.envelope);
  world.set_ego(ego);

  // Traffic around the ego on either lane, keeping a minimum spacing.
  struct Slot {
    int lane;
    double arc;  // along the whole 200 m road
  };
  std::vector<Slot> taken{{source_lane, ego_arc}};
  for (int n = 0; n < factors.vehicle_count(); ++n) {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const int lane = static_cast<int>(rng.next() % 2);
      const double arc =
          ego_arc + rng.uniform(-options.spawn_window, options.spawn_window);
      const double speed = rng.uniform(traffic.spawn_min_speed, traffic.spawn_max_speed);
      if (arc < 0.0 || arc > 2.0 * kSegmentLength - 1.0) continue;
      bool clear = true;
      for (const Slot& s : taken) {
        if (s.lane == lane && std::abs(s.arc - arc) < options.spawn_spacing) clear = false;
      }
      if (!clear) continue;
      taken.push_back({lane, arc});
      if (arc < kSegmentLength) {
        world.add_vehicle({approach, lane}, arc, speed);
      } else {
        world.add_vehicle({merge, lane}, arc - kSegmentLength, speed);
      }
      break;
    }
  }

  SafetyQuery query;
  query.action = action;
  query.ego = ego;
  query.surrounding = world.surrounding();
  query.time = world.now();
  query.params = options.estimator;
  query.seed = derive_seed({seed, 13});
  const SafetyEstimate estimate = estimate_safety(query, arena, arena_planner());
  if (estimate.motion_infeasible) {
    throw NoPath("learning arena action has no motion plan");
  }
  const Pose goal = map_state(action.target, arena).sample(derive_seed({query.seed, 2}));

  const ExecutionOutcome run = world.execute(estimate.ego_plan, goal, options.timeout);
  Episode episode;
  episode.safety = estimate.value;
  episode.timed_out = run.timed_out;
  if (run.collision) {
    episode.outcome = Outcome::kCollide;
  } else if (run.forced_stops > 0) {
    episode.outcome = Outcome::kStop;
  } else {
    episode.outcome = Outcome::kSuccess;
  }
  return episode;
}

WorldModel learn_world_model(const DomainFactors& factors, const LearnerOptions& options) {
  if (options.episodes < 1) throw InvalidArgument("episodes must be at least 1");
  if (options.max_rounds < 1) throw InvalidArgument("max_rounds must be at least 1");
  options.estimator.validate();
  const int round = options.episodes;

  WorldModel model;
  std::vector<Episode> episodes(round);
  for (ActionKind kind : options.kinds) {
    WorldModelCell cell;
    std::array<int, kSafetyBuckets> filled{};
    for (int r = 0; r < options.max_rounds; ++r) {
      parallel_for(round, options.workers, [&](int i) {
        const auto index = static_cast<std::uint64_t>(r) * round + i;
        episodes[i] = run_episode(
            kind, factors, options,
            derive_seed({options.seed, static_cast<std::uint64_t>(kind), index}));
      });
      for (const Episode& ep : episodes) {
        ++cell.safety_histogram[safety_histogram_index(ep.safety)];
        const int b = safety_bucket(ep.safety);
        if (filled[b] < round) {
          ++filled[b];
          ++cell.counts[b][static_cast<int>(ep.outcome)];
        }
      }
      if (std::all_of(filled.begin(), filled.end(), [&](int n) { return n >= round; })) break;
    }
    model.set_cell(kind, factors, std::move(cell));
  }
  return model;
}

}  // namespace tmpud
