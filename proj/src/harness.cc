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

#include "tmpud/harness.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "tmpud/abstract_env.h"
#include "tmpud/errors.h"
#include "tmpud/parallel.h"

namespace tmpud {

using Ptr = Json::json_pointer;

SafetyParameters parse_safety_parameters(const JsonDocument& doc, const Ptr& at) {
  SafetyParameters p;
  if (!doc.contains(at)) return p;
  p.horizon = doc.number_or(at / "horizon", p.horizon);
  p.interval = doc.number_or(at / "interval", p.interval);
  p.samples = static_cast<int>(doc.integer_or(at / "samples", p.samples));
  p.safe_distance = doc.number_or(at / "safe_distance", p.safe_distance);
  p.sensing_radius = doc.number_or(at / "sensing_radius", p.sensing_radius);
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    doc.fail(at, e.what());
  }
  return p;
}

ControlEnvelope parse_control_envelope(const JsonDocument& doc, const Ptr& at) {
  ControlEnvelope e;
  if (!doc.contains(at)) return e;
  e.min_acceleration = doc.number_or(at / "min_acceleration", e.min_acceleration);
  e.max_acceleration = doc.number_or(at / "max_acceleration", e.max_acceleration);
  e.min_steering = doc.number_or(at / "min_steering", e.min_steering);
  e.max_steering = doc.number_or(at / "max_steering", e.max_steering);
  if (!e.is_valid()) doc.fail(at, "control envelope is empty");
  return e;
}

namespace {

PidGains parse_pid(const JsonDocument& doc, const Ptr& at, PidGains g) {
  if (!doc.contains(at)) return g;
  g.kp = doc.number_or(at / "kp", g.kp);
  g.ki = doc.number_or(at / "ki", g.ki);
  g.kd = doc.number_or(at / "kd", g.kd);
  return g;
}

}  // namespace

SymbolicState parse_state(const JsonDocument& doc, const Ptr& at, const RoadNetwork& net) {
  const std::string id = doc.string(at / "segment");
  const std::optional<int> seg = net.find_segment(id);
  if (!seg) doc.fail(at / "segment", "unknown segment '" + id + "'");
  SymbolicState s{*seg, static_cast<int>(doc.integer_or(at / "lane", 0)), Direction::kForward};
  if (!is_valid_state(s, net)) doc.fail(at, "state " + describe(s, net) + " does not exist");
  return s;
}

ControllerGains parse_controller_gains(const JsonDocument& doc, const Ptr& at) {
  ControllerGains g;
  if (!doc.contains(at)) return g;
  g.steering = parse_pid(doc, at / "steering", g.steering);
  g.speed = parse_pid(doc, at / "speed", g.speed);
  g.target_speed = doc.number_or(at / "target_speed", g.target_speed);
  g.cross_track_weight = doc.number_or(at / "cross_track_weight", g.cross_track_weight);
  g.lookahead_base = doc.number_or(at / "lookahead_base", g.lookahead_base);
  g.lookahead_time = doc.number_or(at / "lookahead_time", g.lookahead_time);
  if (!g.is_valid()) doc.fail(at, "controller gains must be non-negative with positive speed");
  return g;
}

TrafficParameters parse_traffic_parameters(const JsonDocument& doc, const Ptr& at) {
  TrafficParameters t;
  if (!doc.contains(at)) return t;
  t.min_speed = doc.number_or(at / "min_speed", t.min_speed);
  t.max_speed = doc.number_or(at / "max_speed", t.max_speed);
  t.spawn_min_speed = doc.number_or(at / "spawn_min_speed", t.spawn_min_speed);
  t.spawn_max_speed = doc.number_or(at / "spawn_max_speed", t.spawn_max_speed);
  t.accel_period = doc.number_or(at / "accel_period", t.accel_period);
  t.stop_speed = doc.number_or(at / "stop_speed", t.stop_speed);
  t.stop_duration = doc.number_or(at / "stop_duration", t.stop_duration);
  t.dt = doc.number_or(at / "dt", t.dt);
  if (!(t.dt > 0.0) || !(t.accel_period > 0.0) || t.min_speed > t.max_speed ||
      t.spawn_min_speed > t.spawn_max_speed) {
    doc.fail(at, "inconsistent traffic parameters");
  }
  return t;
}

void ScenarioConfig::validate() const {
  if (!network) throw InvalidArgument("config has no road network");
  if (!is_valid_state(initial, *network)) throw InvalidArgument("initial state is invalid");
  if (goal.segment < 0 || goal.segment >= network->segment_count()) {
    throw InvalidArgument("goal segment is invalid");
  }
  if (policies.empty()) throw InvalidArgument("config lists no policies");
  if (conditions.empty()) throw InvalidArgument("config lists no conditions");
  if (trials_per_batch < 1) throw InvalidArgument("trials_per_batch must be at least 1");
  if (batches < 1) throw InvalidArgument("batches must be at least 1");
  if (workers < 1) throw InvalidArgument("workers must be at least 1");
  if (learner.episodes < 1) throw InvalidArgument("world_model.learn.episodes must be at least 1");
  if (learner.max_rounds < 1) {
    throw InvalidArgument("world_model.learn.max_rounds must be at least 1");
  }
}

Scenario Scenario::from_json(const JsonDocument& doc, const std::filesystem::path& base_dir) {
  Scenario sc;
  const Ptr net_at("/network");
  const Json& net = doc.at(net_at);
  if (net.is_string()) {
    sc.network = std::make_shared<const RoadNetwork>(
        RoadNetwork::load(base_dir / net.get<std::string>()));
  } else {
    sc.network = std::make_shared<const RoadNetwork>(RoadNetwork::from_json(doc, net_at));
  }
  sc.initial = parse_state(doc, Ptr("/initial"), *sc.network);
  const std::string id = doc.string(Ptr("/goal/segment"));
  const std::optional<int> seg = sc.network->find_segment(id);
  if (!seg) doc.fail(Ptr("/goal/segment"), "unknown segment '" + id + "'");
  sc.goal.segment = *seg;
  if (doc.contains(Ptr("/goal/lane"))) {
    sc.goal.lane = static_cast<int>(doc.integer(Ptr("/goal/lane")));
    if (*sc.goal.lane < 0 || *sc.goal.lane >= sc.network->lane_count(*seg)) {
      doc.fail(Ptr("/goal/lane"), "goal lane out of range");
    }
  }
  return sc;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  return from_json(JsonDocument::load(path), path.parent_path());
}

void ScenarioConfig::set_scenario(const Scenario& sc) {
  network = sc.network;
  initial = sc.initial;
  goal = sc.goal;
}

ScenarioConfig ScenarioConfig::from_json(const JsonDocument& doc,
                                         const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  cfg.set_scenario(Scenario::from_json(doc, base_dir));
  const Json& policies = doc.at(Ptr("/policies"));
  if (!policies.is_array()) doc.fail(Ptr("/policies"), "expected an array of policy names");
  for (std::size_t i = 0; i < policies.size(); ++i) {
    try {
      cfg.policies.push_back(ExecutionPolicy::parse(doc.string(Ptr("/policies") / i)));
    } catch (const Error& e) {
      doc.fail(Ptr("/policies") / i, e.what());
    }
  }
  const Json& conditions = doc.at(Ptr("/conditions"));
  if (!conditions.is_array()) doc.fail(Ptr("/conditions"), "expected an array");
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    try {
      cfg.conditions.push_back(DomainFactors::parse(doc.string(Ptr("/conditions") / i)));
    } catch (const ParseError& e) {
      doc.fail(Ptr("/conditions") / i, e.what());
    }
  }
  cfg.trials_per_batch = static_cast<int>(doc.integer_or(Ptr("/trials_per_batch"), 250));
  cfg.batches = static_cast<int>(doc.integer_or(Ptr("/batches"), 4));
  cfg.base_seed = static_cast<std::uint64_t>(doc.integer_or(Ptr("/base_seed"), 1));
  cfg.workers = static_cast<int>(doc.integer_or(Ptr("/workers"), 1));

  cfg.executor.gamma = doc.number_or(Ptr("/executor/gamma"), kDefaultGamma);
  cfg.executor.max_waits = static_cast<int>(doc.integer_or(Ptr("/executor/max_waits"), 10));
  cfg.executor.max_iterations =
      static_cast<int>(doc.integer_or(Ptr("/executor/max_iterations"), 10000));
  if (!(cfg.executor.gamma > 0.0)) doc.fail(Ptr("/executor/gamma"), "gamma must be positive");

  if (doc.contains(Ptr("/world_model/path"))) {
    cfg.world_model_path = base_dir / doc.string(Ptr("/world_model/path"));
  }
  const Ptr learn_at("/world_model/learn");
  cfg.learner.episodes = static_cast<int>(doc.integer_or(learn_at / "episodes", 1000));
  cfg.learner.seed = static_cast<std::uint64_t>(doc.integer_or(learn_at / "seed", 1));
  cfg.learner.max_rounds = static_cast<int>(doc.integer_or(learn_at / "max_rounds", 10));
  cfg.learner.workers = cfg.workers;
  cfg.learner.estimator = learning_estimator();
  if (doc.contains(learn_at / "estimator")) {
    cfg.learner.estimator = parse_safety_parameters(doc, learn_at / "estimator");
  }
  cfg.learner.traffic = parse_traffic_parameters(doc, Ptr("/traffic"));
  cfg.learner.gains = parse_controller_gains(doc, Ptr("/controller"));
  cfg.learner.estimator.envelope = parse_control_envelope(doc, Ptr("/envelope"));
  cfg.estimator = parse_safety_parameters(doc, Ptr("/estimator"));
  cfg.estimator.envelope = cfg.learner.estimator.envelope;

  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    doc.fail(Ptr(""), e.what());
  }
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  return from_json(JsonDocument::load(path), path.parent_path());
}

TrialRecord make_record(const ExecutionTrace& trace, const ExecutionPolicy& policy,
                        const DomainFactors& condition, int batch, int trial,
                        std::uint64_t seed) {
  TrialRecord r;
  r.policy = policy.name();
  r.condition = condition.name();
  r.batch = batch;
  r.trial = trial;
  r.seed = seed;
  r.collision = trace.collided();
  r.failed = trace.failed();
  r.completed = trace.reached_goal() && !r.collision;
  r.distance = trace.distance;
  r.partial_distance = trace.partial_distance;
  r.forced_stops = trace.count(EventKind::kForcedStop);
  r.replans = trace.count(EventKind::kReplanned);
  r.rejections = trace.count(EventKind::kActionRejected);
  r.waits = trace.count(EventKind::kWaited);
  return r;
}

WorldModel prepare_world_model(const ScenarioConfig& cfg) {
  if (cfg.world_model_path) {
    WorldModel model = WorldModel::load(*cfg.world_model_path);
    for (const DomainFactors& f : cfg.conditions) {
      for (ActionKind k : kAllActionKinds) model.cell(k, f);  // throws MissingCell
    }
    return model;
  }
  WorldModel model;
  for (const DomainFactors& f : cfg.conditions) model.merge(learn_world_model(f, cfg.learner));
  return model;
}

std::vector<TrialRecord> run_batch(const ScenarioConfig& cfg, const WorldModel& model) {
  cfg.validate();
  const int per_condition = cfg.trials_per_batch * cfg.batches;
  const int policies = static_cast<int>(cfg.policies.size());
  const int total = static_cast<int>(cfg.conditions.size()) * policies * per_condition;
  const PlanningProblem problem = cfg.problem();
  ExecutorConfig exec = cfg.executor;
  exec.observer = nullptr;

  std::vector<TrialRecord> records(total);
  parallel_for(total, cfg.workers, [&](int job) {
    const int trial = job % per_condition;
    const int policy = (job / per_condition) % policies;
    const int condition = job / (per_condition * policies);
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
    const auto start = std::chrono::steady_clock::now();
    AbstractEnvironment env(*cfg.network, model, cfg.conditions[condition], seed);
    const ExecutionTrace trace = run_policy(problem, env, cfg.policies[policy], exec);
    TrialRecord r = make_record(trace, cfg.policies[policy], cfg.conditions[condition],
                                trial / cfg.trials_per_batch, trial, seed);
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    records[job] = std::move(r);
  });
  return records;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) /
         std::sqrt(static_cast<double>(v.size()));
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

std::vector<SummaryRow> summarize(std::span<const TrialRecord> records) {
  if (records.empty()) throw EmptyInput("no trial records to summarize");
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialRecord*>> groups;
  for (const TrialRecord& r : records) {
    auto key = std::make_pair(r.policy, r.condition);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }

  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const auto& group = groups[key];
    SummaryRow row;
    row.policy = key.first;
    row.condition = key.second;
    double dist_sum = 0.0;
    double partial_sum = 0.0;
    std::map<int, std::pair<std::vector<double>, int>> batches;  // distances, unsafe
    for (const TrialRecord* r : group) {
      ++row.trials;
      row.collisions += r->collision ? 1 : 0;
      row.forced_stops += r->forced_stops;
      row.failed += r->failed ? 1 : 0;
      auto& b = batches[r->batch];
      b.second += r->unsafe();
      if (r->completed) {
        ++row.completed;
        dist_sum += r->distance;
        b.first.push_back(r->distance);
      }
      if (r->collision) partial_sum += r->distance + r->partial_distance;
    }
    row.unsafe = row.collisions + row.forced_stops;
    row.mean_distance = row.completed > 0 ? dist_sum / row.completed : 0.0;
    row.mean_partial_distance = row.collisions > 0 ? partial_sum / row.collisions : 0.0;
    std::vector<double> batch_dist;
    std::vector<double> batch_unsafe;
    for (const auto& [index, b] : batches) {
      if (!b.first.empty()) batch_dist.push_back(mean_of(b.first));
      batch_unsafe.push_back(b.second);
    }
    row.batches = static_cast<int>(batches.size());
    row.batch_distance_mean = mean_of(batch_dist);
    row.batch_distance_stderr = stderr_of(batch_dist);
    row.batch_unsafe_mean = mean_of(batch_unsafe);
    row.batch_unsafe_stderr = stderr_of(batch_unsafe);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

constexpr const char* kTrialColumns =
    "policy,condition,batch,trial,seed,completed,collision,failed,distance,"
    "partial_distance,forced_stops,replans,rejections,waits";

}  // namespace

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << kTrialColumns << "\n";
  for (const TrialRecord& r : records) {
    out << r.policy << ',' << r.condition << ',' << r.batch << ',' << r.trial << ','
        << r.seed << ',' << (r.completed ? 1 : 0) << ',' << (r.collision ? 1 : 0) << ','
        << (r.failed ? 1 : 0) << ',' << fixed(r.distance) << ',' << fixed(r.partial_distance)
        << ',' << r.forced_stops << ',' << r.replans << ',' << r.rejections << ','
        << r.waits << "\n";
  }
}

std::vector<TrialRecord> read_trials_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin + ":1: empty trials file");
  if (line != kTrialColumns) {
    throw ParseError(origin + ":1: unexpected header (expected " + kTrialColumns + ")");
  }
  std::vector<TrialRecord> out;
  for (int lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 14) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 14 fields, got " +
                       std::to_string(f.size()));
    }
    try {
      TrialRecord r;
      r.policy = f[0];
      r.condition = f[1];
      r.batch = std::stoi(f[2]);
      r.trial = std::stoi(f[3]);
      r.seed = std::stoull(f[4]);
      r.completed = f[5] == "1";
      r.collision = f[6] == "1";
      r.failed = f[7] == "1";
      r.distance = std::stod(f[8]);
      r.partial_distance = std::stod(f[9]);
      r.forced_stops = std::stoi(f[10]);
      r.replans = std::stoi(f[11]);
      r.rejections = std::stoi(f[12]);
      r.waits = std::stoi(f[13]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError(origin + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "policy,condition,trials,completed,collisions,forced_stops,unsafe,failed,"
         "mean_distance,mean_partial_distance,batches,batch_distance_mean,"
         "batch_distance_stderr,batch_unsafe_mean,batch_unsafe_stderr\n";
  for (const SummaryRow& r : rows) {
    out << r.policy << ',' << r.condition << ',' << r.trials << ',' << r.completed << ','
        << r.collisions << ',' << r.forced_stops << ',' << r.unsafe << ',' << r.failed << ','
        << fixed(r.mean_distance) << ',' << fixed(r.mean_partial_distance) << ','
        << r.batches << ',' << fixed(r.batch_distance_mean) << ','
        << fixed(r.batch_distance_stderr) << ',' << fixed(r.batch_unsafe_mean) << ','
        << fixed(r.batch_unsafe_stderr) << "\n";
  }
}

void write_summary_table(std::ostream& out, std::span<const SummaryRow> rows) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-8s %-10s %7s %9s %12s %7s %11s\n", "policy",
                "condition", "trials", "completed", "distance(m)", "unsafe", "+-batch");
  out << buf;
  for (const SummaryRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-8s %-10s %7d %9d %12.1f %7d %11.2f\n",
                  r.policy.c_str(), r.condition.c_str(), r.trials, r.completed,
                  r.mean_distance, r.unsafe, r.batch_unsafe_stderr);
    out << buf;
  }
}

void write_plot_csv(std::ostream& out, std::span<const TrialRecord> records) {
  std::vector<TrialRecord> pooled(records.begin(), records.end());
  for (TrialRecord& r : pooled) r.condition = "all";
  out << "policy,condition,mean_distance,unsafe\n";
  for (const auto& rows : {summarize(records), summarize(pooled)}) {
    for (const SummaryRow& r : rows) {
      out << r.policy << ',' << r.condition << ',' << fixed(r.mean_distance) << ','
          << r.unsafe << "\n";
    }
  }
}

void write_benchmark_outputs(const std::filesystem::path& dir,
                             std::span<const TrialRecord> records) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + (dir / name).string());
    return out;
  };
  {
    std::ofstream out = open(kTrialsCsv);
    write_trials_csv(out, records);
  }
  {
    std::ofstream out = open(kSummaryCsv);
    const std::vector<SummaryRow> rows = summarize(records);
    write_summary_csv(out, rows);
  }
  std::ofstream out = open(kPlotCsv);
  write_plot_csv(out, records);
}

}  // namespace tmpud
