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

// Reference implementations used by the tests. They share no search code
// with the library: enumeration, Dijkstra and the closed forms are written
// out independently here.

#ifndef TMPUD_TESTS_SUPPORT_ORACLES_H_
#define TMPUD_TESTS_SUPPORT_ORACLES_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmpud/path_planner.h"
#include "tmpud/rng.h"
#include "tmpud/task_planner.h"

namespace tmpud::testing {

std::filesystem::path data_path(const std::string& relative);

// Random lane graph with 2..max_segments straight segments of 1..max_lanes
// lanes and random forward/turn connections. Not every pair of states is
// connected.
RoadNetwork random_network(Rng& rng, int max_segments = 12, int max_lanes = 3);

// Random Cost in [0, 100] and Safe in [0, 1] for every grounded action.
UtilityTables random_tables(Rng& rng, const RoadNetwork& network, double gamma);

struct EnumerationResult {
  std::optional<double> best;  // none when the goal is unreachable
  long long plans = 0;         // goal-reaching plans visited
};

// Exhaustive depth-first enumeration of simple plans (no repeated state),
// up to `max_depth` actions. Branches whose partial utility already exceeds
// the best complete plan are cut, which is exact because every transition
// utility is positive.
EnumerationResult enumerate_min_utility(const PlanningProblem& problem,
                                        const UtilityTables& tables,
                                        const ActionSet& forbidden = {},
                                        int max_depth = 64);

// Shortest path over symbolic states with edge weight Cost + gamma / 2.
std::optional<double> shortest_cost_plus_half_gamma(const PlanningProblem& problem,
                                                    const UtilityTables& tables);

// Plain Dijkstra over the planner's lane graph between two node ids.
// Blocked nodes are skipped. Returns infinity when unreachable.
double dijkstra_length(const LaneGraph& graph, int from, int to,
                       const std::vector<bool>& blocked = {});

// Two straight 100 m two-lane segments "s" -> "t" along +x.
RoadNetwork two_segment_road();

}  // namespace tmpud::testing

#endif  // TMPUD_TESTS_SUPPORT_ORACLES_H_
