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

// Command-line front end: estimate, run, learn-worldmodel, benchmark and
// summarize. Failures are reported on stderr as a single JSON object
// {"error": {"kind": ..., "message": ...}} with a nonzero exit status.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmpud/abstract_env.h"
#include "tmpud/continuous_env.h"
#include "tmpud/errors.h"
#include "tmpud/harness.h"
#include "tmpud/safety_estimator.h"

namespace fs = std::filesystem;
using Ptr = tmpud::Json::json_pointer;

namespace {

int report_error(const std::string& kind, const std::string& message, int status) {
  tmpud::Json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return status;
}

// --- estimate --------------------------------------------------------------

tmpud::VehicleState parse_vehicle(const tmpud::JsonDocument& doc, const Ptr& at) {
  tmpud::VehicleState v;
  v.pose = tmpud::Pose(doc.number(at / "x"), doc.number(at / "y"),
                       doc.number_or(at / "heading", 0.0));
  v.speed = doc.number_or(at / "speed", tmpud::kDefaultTargetSpeed);
  v.length = doc.number_or(at / "length", v.length);
  v.width = doc.number_or(at / "width", v.width);
  v.id = static_cast<int>(doc.integer_or(at / "id", 0));
  if (doc.contains(at / "yaw_rate")) v.yaw_rate = doc.number(at / "yaw_rate");
  if (v.speed < 0.0 || !(v.length > 0.0) || !(v.width > 0.0)) {
    doc.fail(at, "speed must be non-negative and dimensions positive");
  }
  return v;
}

int cmd_estimate(const std::string& snapshot_path, std::optional<std::uint64_t> seed) {
  const tmpud::JsonDocument doc = tmpud::JsonDocument::load(snapshot_path);
  const tmpud::Scenario network_only = [&] {
    tmpud::Scenario sc;
    const tmpud::Json& net = doc.at(Ptr("/network"));
    const fs::path base = fs::path(snapshot_path).parent_path();
    sc.network = std::make_shared<const tmpud::RoadNetwork>(
        net.is_string() ? tmpud::RoadNetwork::load(base / net.get<std::string>())
                        : tmpud::RoadNetwork::from_json(doc, Ptr("/network")));
    return sc;
  }();
  const tmpud::RoadNetwork& net = *network_only.network;

  tmpud::SafetyQuery q;
  const std::string kind_name = doc.string(Ptr("/action/kind"));
  const std::optional<tmpud::ActionKind> kind = tmpud::parse_action_kind(kind_name);
  if (!kind) doc.fail(Ptr("/action/kind"), "unknown action kind '" + kind_name + "'");
  q.action.kind = *kind;
  q.action.source = tmpud::parse_state(doc, Ptr("/action/source"), net);
  q.action.target = tmpud::parse_state(doc, Ptr("/action/target"), net);
  if (!tmpud::is_applicable(q.action, net)) {
    doc.fail(Ptr("/action"), "action " + tmpud::describe(q.action, net) + " is not applicable");
  }
  q.ego = parse_vehicle(doc, Ptr("/ego"));
  if (doc.contains(Ptr("/surrounding"))) {
    const tmpud::Json& list = doc.at(Ptr("/surrounding"));
    if (!list.is_array()) doc.fail(Ptr("/surrounding"), "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      tmpud::VehicleState v = parse_vehicle(doc, Ptr("/surrounding") / i);
      if (!doc.contains(Ptr("/surrounding") / i / "id")) v.id = static_cast<int>(i) + 1;
      q.surrounding.push_back(v);
    }
  }
  q.time = doc.number_or(Ptr("/time"), 0.0);
  q.params = tmpud::parse_safety_parameters(doc, Ptr("/estimator"));
  q.params.envelope = tmpud::parse_control_envelope(doc, Ptr("/envelope"));
  q.seed = seed ? *seed : static_cast<std::uint64_t>(doc.integer_or(Ptr("/seed"), 1));

  const tmpud::PathPlanner planner(net);
  const tmpud::SafetyEstimate est = tmpud::estimate_safety(q, net, planner);

  tmpud::Json out;
  out["action"] = tmpud::describe(q.action, net);
  out["safety"] = est.value;
  out["motion_infeasible"] = est.motion_infeasible;
  out["vehicles"] = tmpud::Json::array();
  for (const tmpud::VehicleSafety& v : est.vehicles) {
    out["vehicles"].push_back(
        {{"id", v.id}, {"aggregated", v.aggregated}, {"per_time", v.per_time}});
  }
  std::cout << out.dump() << "\n";
  return 0;
}

// --- run ---------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string scenario;
  std::string policy = "tmpud";
  std::optional<double> beta;
  std::uint64_t seed = 1;
  std::string condition;
  std::string env = "abstract";
  std::string world_model;
  std::optional<double> gamma;
};

tmpud::ExecutionPolicy resolve_policy(const RunArgs& a) {
  if (a.policy == "thbased") {
    if (!a.beta) throw tmpud::InvalidArgument("--policy thbased needs --beta");
    return tmpud::ExecutionPolicy::thbased(*a.beta);
  }
  if (a.beta) throw tmpud::InvalidArgument("--beta only applies to --policy thbased");
  return tmpud::ExecutionPolicy::parse(a.policy);
}

int cmd_run(const RunArgs& a) {
  tmpud::ScenarioConfig cfg = tmpud::ScenarioConfig::load(a.config);
  if (!a.scenario.empty()) cfg.set_scenario(tmpud::Scenario::load(a.scenario));
  if (a.gamma) {
    if (!(*a.gamma > 0.0)) throw tmpud::InvalidArgument("--gamma must be positive");
    cfg.executor.gamma = *a.gamma;
  }
  const tmpud::ExecutionPolicy policy = resolve_policy(a);
  const tmpud::DomainFactors factors =
      a.condition.empty() ? cfg.conditions.front() : tmpud::DomainFactors::parse(a.condition);
  const tmpud::PlanningProblem problem = cfg.problem();

  tmpud::ExecutionTrace trace;
  if (a.env == "abstract") {
    tmpud::WorldModel model;
    if (!a.world_model.empty()) {
      model = tmpud::WorldModel::load(a.world_model);
    } else if (cfg.world_model_path) {
      model = tmpud::WorldModel::load(*cfg.world_model_path);
    } else {
      model = tmpud::learn_world_model(factors, cfg.learner);
    }
    tmpud::AbstractEnvironment env(*cfg.network, model, factors, a.seed);
    trace = tmpud::run_policy(problem, env, policy, cfg.executor);
  } else if (a.env == "continuous") {
    tmpud::ContinuousOptions opts;
    opts.estimator = cfg.estimator;
    opts.traffic = cfg.learner.traffic;
    opts.gains = cfg.learner.gains;
    tmpud::ContinuousEnvironment env(*cfg.network, cfg.initial, factors, a.seed, opts);
    trace = tmpud::run_policy(problem, env, policy, cfg.executor);
  } else {
    throw tmpud::InvalidArgument("--env must be abstract or continuous");
  }

  trace.write_jsonl(std::cout, *cfg.network);
  const tmpud::TrialRecord r = tmpud::make_record(trace, policy, factors, 0, 0, a.seed);
  tmpud::Json m = {{"policy", r.policy},
                   {"condition", r.condition},
                   {"seed", r.seed},
                   {"completed", r.completed},
                   {"collision", r.collision},
                   {"failed", r.failed},
                   {"distance", r.distance},
                   {"partial_distance", r.partial_distance},
                   {"forced_stops", r.forced_stops},
                   {"replans", r.replans},
                   {"rejections", r.rejections},
                   {"waits", r.waits}};
  std::cout << tmpud::Json{{"metrics", m}}.dump() << "\n";
  return 0;
}

// --- learn-worldmodel ----------------------------------------------------------

struct LearnArgs {
  std::string density;
  std::string accel;
  int episodes = 1000;
  int max_rounds = 10;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<int> vehicles;
  std::string config;
  std::string out;
};

int cmd_learn(const LearnArgs& a) {
  tmpud::DomainFactors factors;
  factors.density = tmpud::parse_level(a.density);
  factors.acceleration = tmpud::parse_level(a.accel);
  factors.vehicle_override = a.vehicles;
  tmpud::LearnerOptions opts;
  if (!a.config.empty()) opts = tmpud::ScenarioConfig::load(a.config).learner;
  opts.episodes = a.episodes;
  opts.max_rounds = a.max_rounds;
  opts.seed = a.seed;
  opts.workers = a.workers;
  const tmpud::WorldModel model = tmpud::learn_world_model(factors, opts);
  model.save(a.out);
  std::cout << tmpud::Json{{"out", a.out}, {"condition", factors.name()},
                           {"cells", model.cell_count()}}
                   .dump()
            << "\n";
  return 0;
}

// --- benchmark / summarize -------------------------------------------------------

int cmd_benchmark(const std::string& config, const std::string& out_dir,
                  std::optional<int> workers, const std::string& world_model) {
  tmpud::ScenarioConfig cfg = tmpud::ScenarioConfig::load(config);
  if (workers) {
    if (*workers < 1) throw tmpud::InvalidArgument("--workers must be at least 1");
    cfg.workers = *workers;
    cfg.learner.workers = *workers;
  }
  if (!world_model.empty()) cfg.world_model_path = world_model;
  const tmpud::WorldModel model = tmpud::prepare_world_model(cfg);
  const std::vector<tmpud::TrialRecord> records = tmpud::run_batch(cfg, model);
  tmpud::write_benchmark_outputs(out_dir, records);
  if (!cfg.world_model_path) model.save(fs::path(out_dir) / "world_model.json");
  const std::vector<tmpud::SummaryRow> rows = tmpud::summarize(records);
  tmpud::write_summary_table(std::cout, rows);
  return 0;
}

int cmd_summarize(const std::string& in, const std::string& format) {
  fs::path path = in;
  if (fs::is_directory(path)) path /= tmpud::kTrialsCsv;
  std::ifstream file(path);
  if (!file) throw tmpud::InvalidArgument("cannot read " + path.string());
  const std::vector<tmpud::TrialRecord> records = tmpud::read_trials_csv(file, path.string());
  const std::vector<tmpud::SummaryRow> rows = tmpud::summarize(records);
  if (format == "csv") {
    tmpud::write_summary_csv(std::cout, rows);
  } else {
    tmpud::write_summary_table(std::cout, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task-motion planning for urban driving"};
  app.require_subcommand(1);

  std::string snapshot;
  std::optional<std::uint64_t> estimate_seed;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Safety value and per-vehicle breakdown for a scene snapshot");
  estimate->add_option("--scenario", snapshot, "Snapshot JSON file")->required();
  estimate->add_option("--seed", estimate_seed, "Overrides the snapshot's seed");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Execute one trial and print its trace");
  run->add_option("--config", run_args.config, "Scenario config JSON")->required();
  run->add_option("--scenario", run_args.scenario,
                  "Network, initial state and goal overriding the config's");
  run->add_option("--policy", run_args.policy, "tmpud, nocom, thbased or th<beta>");
  run->add_option("--beta", run_args.beta, "Threshold for --policy thbased")
      ->check(CLI::Range(0.0, 1.0));
  run->add_option("--seed", run_args.seed, "Trial seed");
  run->add_option("--condition", run_args.condition,
                  "density-acceleration, e.g. high-low (default: first in config)");
  run->add_option("--env", run_args.env, "abstract or continuous")
      ->check(CLI::IsMember({"abstract", "continuous"}));
  run->add_option("--world-model", run_args.world_model, "World model JSON (abstract env)");
  run->add_option("--gamma", run_args.gamma, "Safety weight");

  LearnArgs learn_args;
  CLI::App* learn = app.add_subcommand("learn-worldmodel", "Learn outcome statistics");
  learn->add_option("--density", learn_args.density, "low or high")->required();
  learn->add_option("--accel", learn_args.accel, "low or high")->required();
  learn->add_option("--episodes", learn_args.episodes, "Episodes per action kind and bucket")
      ->check(CLI::PositiveNumber);
  learn->add_option("--max-rounds", learn_args.max_rounds, "Round limit per action kind")
      ->check(CLI::PositiveNumber);
  learn->add_option("--seed", learn_args.seed, "Seed");
  learn->add_option("--workers", learn_args.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  learn->add_option("--vehicles", learn_args.vehicles, "Override the surrounding-vehicle count")
      ->check(CLI::NonNegativeNumber);
  learn->add_option("--config", learn_args.config, "Take traffic and controller blocks from here");
  learn->add_option("--out", learn_args.out, "Output JSON file")->required();

  std::string bench_config, bench_out, bench_model;
  std::optional<int> bench_workers;
  CLI::App* bench = app.add_subcommand("benchmark", "Run every policy and condition");
  bench->add_option("--config", bench_config, "Scenario config JSON")->required();
  bench->add_option("--out", bench_out, "Output directory")->required();
  bench->add_option("--workers", bench_workers, "Worker threads (overrides the config)");
  bench->add_option("--world-model", bench_model, "Use this world model instead of learning");

  std::string sum_in, sum_format = "table";
  CLI::App* sum = app.add_subcommand("summarize", "Summarize a benchmark's trials.csv");
  sum->add_option("--in", sum_in, "Benchmark output directory or trials CSV")->required();
  sum->add_option("--format", sum_format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  try {
    if (*estimate) return cmd_estimate(snapshot, estimate_seed);
    if (*run) return cmd_run(run_args);
    if (*learn) return cmd_learn(learn_args);
    if (*bench) return cmd_benchmark(bench_config, bench_out, bench_workers, bench_model);
    if (*sum) return cmd_summarize(sum_in, sum_format);
  } catch (const tmpud::Error& e) {
    return report_error(e.kind(), e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return 0;
}
