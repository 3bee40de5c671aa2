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

#include "support/oracles.h"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace tmpud::testing {

std::filesystem::path data_path(const std::string& relative) {
  return std::filesystem::path(TMPUD_DATA_DIR) / relative;
}

RoadNetwork random_network(Rng& rng, int max_segments, int max_lanes) {
  const int n = 2 + static_cast<int>(rng.next() % (max_segments - 1));
  std::vector<Segment> segments;
  for (int i = 0; i < n; ++i) {
    Segment seg;
    seg.id = "s" + std::to_string(i);
    const int lanes = 1 + static_cast<int>(rng.next() % max_lanes);
    const double length = rng.uniform(5.0, 100.0);
    for (int l = 0; l < lanes; ++l) {
      const double y = 20.0 * i + 3.5 * l;
      seg.lanes.emplace_back(std::vector<Vec2>{{0.0, y}, {length, y}});
    }
    segments.push_back(std::move(seg));
  }
  std::set<std::tuple<int, int, int, int, int>> seen;
  std::vector<Connection> connections;
  auto add = [&](int fs, int fl, int ts, int tl, ActionKind kind) {
    if (seen.insert({fs, fl, ts, tl, static_cast<int>(kind)}).second) {
      connections.push_back({{fs, fl}, {ts, tl}, kind});
    }
  };
  constexpr ActionKind kLinkKinds[] = {ActionKind::kForward, ActionKind::kTurnLeft,
                                       ActionKind::kTurnRight};
  for (int i = 0; i < n; ++i) {
    const int lanes = segments[i].lane_count();
    // A chain toward the next segment keeps most problems solvable.
    if (i + 1 < n && rng.uniform() < 0.9) {
      const int fl = static_cast<int>(rng.next() % lanes);
      add(i, fl, i + 1, static_cast<int>(rng.next() % segments[i + 1].lane_count()),
          ActionKind::kForward);
    }
    const int extra = 1 + static_cast<int>(rng.next() % 3);
    for (int k = 0; k < extra; ++k) {
      const int to = static_cast<int>(rng.next() % n);
      add(i, static_cast<int>(rng.next() % lanes), to,
          static_cast<int>(rng.next() % segments[to].lane_count()),
          kLinkKinds[rng.next() % 3]);
    }
  }
  return RoadNetwork(std::move(segments), std::move(connections));
}

UtilityTables random_tables(Rng& rng, const RoadNetwork& network, double gamma) {
  UtilityTables t(gamma);
  for (const DrivingAction& a : all_actions(network)) {
    t.set_cost(a, rng.uniform(0.0, 100.0));
    t.set_safe(a, rng.uniform());
  }
  return t;
}

namespace {

double utility_of(const DrivingAction& a, const UtilityTables& t, const RoadNetwork& net) {
  const double cost = t.cost_entry(a).value_or(default_transition_cost(a, net));
  const double safe = t.safe_entry(a).value_or(1.0);
  return cost + t.gamma() / (1.0 + std::exp(safe - 1.0));
}

}  // namespace

EnumerationResult enumerate_min_utility(const PlanningProblem& problem,
                                        const UtilityTables& tables,
                                        const ActionSet& forbidden, int max_depth) {
  const RoadNetwork& net = *problem.network;
  EnumerationResult result;
  std::set<SymbolicState> on_path{problem.initial};
  std::function<void(const SymbolicState&, double, int)> dfs =
      [&](const SymbolicState& s, double acc, int depth) {
        if (result.best && acc > *result.best) return;
        if (problem.goal.satisfied_by(s)) {
          ++result.plans;
          if (!result.best || acc < *result.best) result.best = acc;
          return;
        }
        if (depth == max_depth) return;
        for (const DrivingAction& a : successors(s, net)) {
          if (forbidden.contains(a) || on_path.contains(a.target)) continue;
          on_path.insert(a.target);
          dfs(a.target, acc + utility_of(a, tables, net), depth + 1);
          on_path.erase(a.target);
        }
      };
  dfs(problem.initial, 0.0, 0);
  return result;
}

std::optional<double> shortest_cost_plus_half_gamma(const PlanningProblem& problem,
                                                    const UtilityTables& tables) {
  const RoadNetwork& net = *problem.network;
  std::map<SymbolicState, double> dist{{problem.initial, 0.0}};
  using Entry = std::pair<double, SymbolicState>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({0.0, problem.initial});
  while (!open.empty()) {
    const auto [d, s] = open.top();
    open.pop();
    if (d > dist[s]) continue;
    if (problem.goal.satisfied_by(s)) return d;
    for (const DrivingAction& a : successors(s, net)) {
      const double w =
          tables.cost_entry(a).value_or(default_transition_cost(a, net)) + tables.gamma() / 2.0;
      const auto it = dist.find(a.target);
      if (it == dist.end() || d + w < it->second) {
        dist[a.target] = d + w;
        open.push({d + w, a.target});
      }
    }
  }
  return std::nullopt;
}

double dijkstra_length(const LaneGraph& graph, int from, int to,
                       const std::vector<bool>& blocked) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.node_count(), inf);
  std::vector<bool> done(graph.node_count(), false);
  dist[from] = 0.0;
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  open.push({0.0, from});
  while (!open.empty()) {
    const auto [d, n] = open.top();
    open.pop();
    if (done[n]) continue;
    done[n] = true;
    if (n == to) return d;
    for (const LaneGraph::Edge& e : graph.edges_from(n)) {
      if (!blocked.empty() && blocked[e.to]) continue;
      if (d + e.length < dist[e.to]) {
        dist[e.to] = d + e.length;
        open.push({dist[e.to], e.to});
      }
    }
  }
  return inf;
}

RoadNetwork two_segment_road() {
  return RoadNetwork::from_json_text(R"({
    "segments": [
      {"id": "s", "reference": [[0, 0], [100, 0]], "lanes": 2},
      {"id": "t", "reference": [[100, 0], [200, 0]], "lanes": 2}
    ],
    "connections": [
      {"from": ["s", 0], "to": ["t", 0], "action": "forward"},
      {"from": ["s", 1], "to": ["t", 1], "action": "forward"}
    ]
  })");
}

}  // namespace tmpud::testing
