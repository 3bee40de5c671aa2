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

#ifndef TMPUD_HARNESS_H_
#define TMPUD_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmpud/executor.h"
#include "tmpud/learner.h"
#include "tmpud/world_model.h"

namespace tmpud {

// Parameter blocks shared by config files. Members that are absent keep
// their defaults; present members are range-checked by the consumers.
SafetyParameters parse_safety_parameters(const JsonDocument& doc,
                                         const Json::json_pointer& at);
ControllerGains parse_controller_gains(const JsonDocument& doc,
                                       const Json::json_pointer& at);
ControlEnvelope parse_control_envelope(const JsonDocument& doc,
                                       const Json::json_pointer& at);
TrafficParameters parse_traffic_parameters(const JsonDocument& doc,
                                           const Json::json_pointer& at);
// {"segment": id, "lane": n}; the lane defaults to 0.
SymbolicState parse_state(const JsonDocument& doc, const Json::json_pointer& at,
                          const RoadNetwork& network);

// Road network, start state, and goal. Loaded from the members "network"
// (a file path relative to the document, or an inline network), "initial"
// and "goal".
struct Scenario {
  std::shared_ptr<const RoadNetwork> network;
  SymbolicState initial;
  GoalSpec goal;

  static Scenario from_json(const JsonDocument& doc,
                            const std::filesystem::path& base_dir = ".");
  static Scenario load(const std::filesystem::path& path);
};

// Everything a benchmark run needs. Loaded from JSON; paths inside the file
// are relative to the file's directory.
struct ScenarioConfig {
  std::shared_ptr<const RoadNetwork> network;
  SymbolicState initial;
  GoalSpec goal;
  std::vector<ExecutionPolicy> policies;
  std::vector<DomainFactors> conditions;
  int trials_per_batch = 250;
  int batches = 4;
  std::uint64_t base_seed = 1;
  int workers = 1;

  ExecutorConfig executor;
  // World model: loaded from `world_model_path` when set, else learned with
  // `learner` for every condition before the trials start.
  std::optional<std::filesystem::path> world_model_path;
  LearnerOptions learner;
  // Online estimator settings for continuous-environment runs.
  SafetyParameters estimator;

  // Throws InvalidArgument with a description of the first problem.
  void validate() const;
  void set_scenario(const Scenario& scenario);
  PlanningProblem problem() const { return {initial, goal, network.get()}; }

  static ScenarioConfig from_json(const JsonDocument& doc,
                                  const std::filesystem::path& base_dir = ".");
  static ScenarioConfig load(const std::filesystem::path& path);
};

struct TrialRecord {
  std::string policy;
  std::string condition;
  int batch = 0;
  int trial = 0;  // index within the condition, across batches
  std::uint64_t seed = 0;
  bool completed = false;  // reached the goal without colliding
  bool collision = false;
  bool failed = false;     // gave up (no plan, limits)
  double distance = 0.0;   // metres of completed actions
  double partial_distance = 0.0;
  int forced_stops = 0;
  int replans = 0;
  int rejections = 0;
  int waits = 0;
  double wall_seconds = 0.0;  // not written to CSV

  int unsafe() const { return (collision ? 1 : 0) + forced_stops; }
};

// Record of one executed trace.
TrialRecord make_record(const ExecutionTrace& trace, const ExecutionPolicy& policy,
                        const DomainFactors& condition, int batch, int trial,
                        std::uint64_t seed);

// Learns (or loads) the world model the config calls for.
WorldModel prepare_world_model(const ScenarioConfig& cfg);

// Runs every policy x condition x trial in abstract simulation. Trial i of
// a condition uses seed base_seed + i for every policy. Records come back in
// (condition, policy, trial) order whatever the worker count.
std::vector<TrialRecord> run_batch(const ScenarioConfig& cfg, const WorldModel& model);

struct SummaryRow {
  std::string policy;
  std::string condition;
  int trials = 0;
  int completed = 0;
  int collisions = 0;
  int forced_stops = 0;
  int failed = 0;
  int unsafe = 0;                 // collisions + forced stops
  double mean_distance = 0.0;     // over completed trials
  double mean_partial_distance = 0.0;  // over collided trials
  int batches = 0;
  double batch_distance_mean = 0.0;
  double batch_distance_stderr = 0.0;
  double batch_unsafe_mean = 0.0;
  double batch_unsafe_stderr = 0.0;
};

// One row per (policy, condition) in first-appearance order. Throws
// EmptyInput.
std::vector<SummaryRow> summarize(std::span<const TrialRecord> records);

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_trials_csv(std::istream& in, const std::string& origin);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
void write_summary_table(std::ostream& out, std::span<const SummaryRow> rows);
// x = mean distance, y = collisions + stops; one point per policy and
// condition, plus pooled "all" rows.
void write_plot_csv(std::ostream& out, std::span<const TrialRecord> records);

inline constexpr char kTrialsCsv[] = "trials.csv";
inline constexpr char kSummaryCsv[] = "summary.csv";
inline constexpr char kPlotCsv[] = "plot_data.csv";

// Writes the three benchmark CSVs into `dir`, creating it if needed.
void write_benchmark_outputs(const std::filesystem::path& dir,
                             std::span<const TrialRecord> records);

}  // namespace tmpud

#endif  // TMPUD_HARNESS_H_
