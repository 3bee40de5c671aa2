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

#include <array>
#include <cmath>
#include <filesystem>
#include <set>
#include <string>

#include "gtest/gtest.h"
#include "support/oracles.h"
#include "tmpud/abstract_env.h"
#include "tmpud/errors.h"
#include "tmpud/learner.h"

namespace tmpud {
namespace {

using testing::data_path;

constexpr SymbolicState St(int seg, int lane) { return {seg, lane, Direction::kForward}; }

// Upper 1% point of chi-square with 2 degrees of freedom.
constexpr double kChiSquare2At99 = 9.21034037197618;

const DomainFactors kLowLow{Level::kLow, Level::kLow, std::nullopt};
const DomainFactors kHighHigh{Level::kHigh, Level::kHigh, std::nullopt};

WorldModel fixed_model(const Distribution& p, const DomainFactors& f = kLowLow,
                       std::optional<int> safety_bin = std::nullopt) {
  WorldModel m;
  for (ActionKind kind : kAllActionKinds) {
    WorldModelCell c = WorldModelCell::with_distribution(p);
    if (safety_bin) c.safety_histogram[*safety_bin] = 1;
    m.set_cell(kind, f, c);
  }
  return m;
}

std::array<int, kOutcomeCount> draw(const WorldModel& m, double mu, int n) {
  std::array<int, kOutcomeCount> counts{};
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(n); ++i) {
    ++counts[static_cast<int>(
        sample_outcome(m, ActionKind::kMergeLeft, kLowLow, mu, derive_seed({77, i})))];
  }
  return counts;
}

TEST(WorldModelTest, SmoothedDistributionsSumToOne) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    WorldModelCell c;
    for (auto& row : c.counts) {
      for (int& n : row) n = static_cast<int>(rng.next() % 50);
    }
    for (int b = 0; b < kSafetyBuckets; ++b) {
      const Distribution p = c.distribution(b);
      EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
      for (double x : p) EXPECT_GT(x, 0.0);
    }
  }
  EXPECT_NEAR(WorldModelCell().distribution(0)[0], 1.0 / 3.0, 1e-15);
}

TEST(WorldModelTest, SamplerPassesChiSquare) {
  Rng rng(31);
  const int n = 10000;
  for (int k = 0; k < 20; ++k) {
    Distribution p;
    const double a = rng.uniform(0.05, 1.0);
    const double b = rng.uniform(0.05, 1.0);
    const double c = rng.uniform(0.05, 1.0);
    p = {a / (a + b + c), b / (a + b + c), c / (a + b + c)};
    const WorldModel m = fixed_model(p);
    const auto counts = draw(m, 0.5, n);
    double chi = 0.0;
    for (int o = 0; o < kOutcomeCount; ++o) {
      const double expected = n * p[o];
      chi += (counts[o] - expected) * (counts[o] - expected) / expected;
    }
    EXPECT_LT(chi, kChiSquare2At99) << k;
  }
}

TEST(WorldModelTest, CertainMergeAlwaysMerges) {
  const auto counts = draw(fixed_model({1.0, 0.0, 0.0}), 0.3, 5000);
  EXPECT_EQ(counts[0], 5000);
  EXPECT_EQ(sample_categorical({0.0, 0.0, 1.0}, 0.0), Outcome::kStop);
  EXPECT_EQ(sample_categorical({0.0, 1.0, 0.0}, 1.0 - 1e-17), Outcome::kCollide);
}

TEST(WorldModelTest, EmpiricalFrequenciesTrackTheDistribution) {
  const auto counts = draw(fixed_model({0.5, 0.3, 0.2}), 0.9, 10000);
  EXPECT_NEAR(counts[0] / 10000.0, 0.5, 0.02);
  EXPECT_NEAR(counts[1] / 10000.0, 0.3, 0.02);
  EXPECT_NEAR(counts[2] / 10000.0, 0.2, 0.02);
}

TEST(WorldModelTest, RejectsBadInput) {
  const WorldModel m = fixed_model({1.0, 0.0, 0.0});
  EXPECT_THROW(sample_outcome(m, ActionKind::kMergeLeft, kLowLow, 1.5, 1), InvalidArgument);
  EXPECT_THROW(sample_outcome(m, ActionKind::kMergeLeft, kLowLow, -0.1, 1), InvalidArgument);
  EXPECT_THROW(sample_outcome(m, ActionKind::kMergeLeft, kHighHigh, 0.5, 1), MissingCell);
  WorldModel bad;
  EXPECT_THROW(bad.set_cell(ActionKind::kForward, kLowLow,
                            WorldModelCell::with_distribution({0.5, 0.6, 0.0})),
               InvalidArgument);
  EXPECT_THROW(bad.set_cell(ActionKind::kForward, kLowLow,
                            WorldModelCell::with_distribution({1.2, -0.2, 0.0})),
               InvalidArgument);
}

TEST(WorldModelTest, BucketsAndHistogramBins) {
  EXPECT_EQ(safety_bucket(0.0), 0);
  EXPECT_EQ(safety_bucket(0.19), 0);
  EXPECT_EQ(safety_bucket(0.2), 1);
  EXPECT_EQ(safety_bucket(1.0), kSafetyBuckets - 1);
  EXPECT_EQ(safety_histogram_index(0.0), 0);
  EXPECT_EQ(safety_histogram_index(1e-9), 1);
  EXPECT_EQ(safety_histogram_index(1.0 - 1e-9), kSafetyHistogramBins - 2);
  EXPECT_EQ(safety_histogram_index(1.0), kSafetyHistogramBins - 1);
  EXPECT_THROW(safety_bucket(1.01), InvalidArgument);
}

TEST(WorldModelTest, SafetySamplesFollowTheHistogram) {
  WorldModel m;
  WorldModelCell c;
  c.safety_histogram[0] = 1;
  c.safety_histogram[kSafetyHistogramBins - 1] = 3;
  m.set_cell(ActionKind::kForward, kLowLow, c);
  int ones = 0;
  for (int i = 0; i < 4000; ++i) {
    const double mu = sample_safety(m, ActionKind::kForward, kLowLow, i);
    ASSERT_TRUE(mu == 0.0 || mu == 1.0);
    ones += mu == 1.0;
  }
  EXPECT_NEAR(ones / 4000.0, 0.75, 0.03);
}

TEST(WorldModelTest, OutcomeLabelsAreExhaustive) {
  std::set<std::string> merge;
  std::set<std::string> drive;
  for (int o = 0; o < kOutcomeCount; ++o) {
    merge.insert(std::string(outcome_name(static_cast<Outcome>(o), ActionKind::kMergeLeft)));
    drive.insert(std::string(outcome_name(static_cast<Outcome>(o), ActionKind::kForward)));
  }
  EXPECT_EQ(merge, (std::set<std::string>{"merge", "collide", "stop"}));
  EXPECT_EQ(drive, (std::set<std::string>{"success", "collide", "stop"}));
  EXPECT_EQ(outcome_name(Outcome::kSuccess, ActionKind::kMergeRight), "merge");
}

TEST(WorldModelTest, JsonRoundTrip) {
  WorldModel m = fixed_model({0.7, 0.2, 0.1}, kHighHigh, 12);
  WorldModelCell learned;
  learned.counts[2] = {10, 3, 1};
  learned.safety_histogram[5] = 7;
  m.set_cell(ActionKind::kTurnLeft, kLowLow, learned);
  const std::string text = m.to_json().dump(2);
  const WorldModel back = WorldModel::from_json(JsonDocument::parse(text));
  EXPECT_EQ(back, m);
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "tmpud_world_model_test.json";
  m.save(path);
  EXPECT_EQ(WorldModel::load(path), m);
  std::filesystem::remove(path);
  EXPECT_THROW(WorldModel::from_json(JsonDocument::parse(R"({"cells": 3})")), ParseError);
}

TEST(StepTrialTest, ForwardAdvancesByTheLaneLength) {
  const RoadNetwork net = RoadNetwork::from_json_text(R"({
    "segments": [{"id": "a", "reference": [[0, 0], [100, 0]]},
                 {"id": "b", "reference": [[100, 0], [200, 0]]}],
    "connections": [{"from": ["a", 0], "to": ["b", 0], "action": "forward"}]})");
  const DrivingAction fwd{ActionKind::kForward, St(0, 0), St(1, 0)};
  const TrialStep ok = step_trial(St(0, 0), fwd, net, fixed_model({1, 0, 0}), kLowLow, 1.0, 3);
  EXPECT_EQ(ok.next, St(1, 0));
  EXPECT_EQ(ok.outcome, Outcome::kSuccess);
  EXPECT_NEAR(ok.distance, 100.0, 1e-9);

  const TrialStep hit = step_trial(St(0, 0), fwd, net, fixed_model({0, 1, 0}), kLowLow, 1.0, 3);
  EXPECT_EQ(hit.outcome, Outcome::kCollide);
  EXPECT_EQ(hit.next, St(0, 0));
  EXPECT_EQ(hit.distance, 0.0);

  const TrialStep stop = step_trial(St(0, 0), fwd, net, fixed_model({0, 0, 1}), kLowLow, 1.0, 3);
  EXPECT_EQ(stop.outcome, Outcome::kStop);
  EXPECT_EQ(stop.next, St(1, 0));

  EXPECT_THROW(step_trial(St(1, 0), fwd, net, fixed_model({1, 0, 0}), kLowLow, 1.0, 3),
               InvalidArgument);
}

TEST(AbstractEnvironmentTest, AllSafeTrialDrivesThePlannedCost) {
  const RoadNetwork net = RoadNetwork::load(data_path("networks/fig3.json"));
  const PlanningProblem p{St(0, 0), {net.segment_index("goal"), std::nullopt}, &net};
  const WorldModel m = fixed_model({1, 0, 0}, kLowLow, kSafetyHistogramBins - 1);
  AbstractEnvironment env(net, m, kLowLow, 11);
  ExecutorConfig c;
  c.gamma = 50.0;
  const ExecutionTrace t = run_tmpud(p, env, c);
  const Plan plan = compute_plan(p, UtilityTables(50.0));
  double cost = 0.0;
  for (const DrivingAction& a : plan.steps) cost += default_transition_cost(a, net);
  EXPECT_TRUE(t.reached_goal());
  EXPECT_EQ(t.count(EventKind::kReplanned), 0);
  EXPECT_NEAR(t.distance, cost, 1e-9);
}

TEST(AbstractEnvironmentTest, LatentSafetyIsStableUntilTimePasses) {
  const RoadNetwork net = RoadNetwork::load(data_path("networks/fig3.json"));
  const WorldModel m = fixed_model({1, 0, 0});  // empty histogram: uniform safety
  AbstractEnvironment env(net, m, kLowLow, 4);
  const DrivingAction merge{ActionKind::kMergeLeft, St(0, 0), St(1, 1)};
  const double mu = env.estimate_safety(merge).safety;
  EXPECT_EQ(env.estimate_safety(merge).safety, mu);
  env.wait();
  EXPECT_EQ(env.epoch(), 1);
  EXPECT_NE(env.estimate_safety(merge).safety, mu);
  AbstractEnvironment again(net, m, kLowLow, 4);
  EXPECT_EQ(again.estimate_safety(merge).safety, mu);
}

LearnerOptions small_options(int episodes, int rounds) {
  LearnerOptions o;
  o.episodes = episodes;
  o.max_rounds = rounds;
  o.seed = 9;
  o.kinds = {ActionKind::kMergeLeft};
  return o;
}

TEST(LearnerTest, EmptyRoadAlwaysMerges) {
  DomainFactors empty = kLowLow;
  empty.vehicle_override = 0;
  const int n = 30;
  const WorldModel m = learn_world_model(empty, small_options(n, 2));
  const WorldModelCell& c = m.cell(ActionKind::kMergeLeft, empty);
  const int top = kSafetyBuckets - 1;
  EXPECT_EQ(c.counts[top][0], n);
  EXPECT_EQ(c.counts[top][1] + c.counts[top][2], 0);
  EXPECT_NEAR(m.distribution(ActionKind::kMergeLeft, empty, 1.0)[0],
              (n + 1.0) / (n + 3.0), 1e-12);
  EXPECT_EQ(c.safety_histogram[kSafetyHistogramBins - 1], 2 * n);
}

TEST(LearnerTest, SameSeedSameModel) {
  const LearnerOptions o = small_options(15, 1);
  EXPECT_EQ(learn_world_model(kHighHigh, o), learn_world_model(kHighHigh, o));
  LearnerOptions parallel = o;
  parallel.workers = 3;
  EXPECT_EQ(learn_world_model(kHighHigh, parallel), learn_world_model(kHighHigh, o));
}

TEST(LearnerTest, RejectsEmptyBudgets) {
  EXPECT_THROW(learn_world_model(kLowLow, small_options(0, 1)), InvalidArgument);
  EXPECT_THROW(learn_world_model(kLowLow, small_options(10, 0)), InvalidArgument);
}

// One-sided two-proportion z-test at the 1% level: dense, aggressive
// traffic produces more unsafe merges than sparse, calm traffic.
TEST(LearnerTest, DenseAggressiveTrafficIsLessSafe) {
  const int n = 5000;
  LearnerOptions o = small_options(n, 1);
  auto unsafe_rate = [&](const DomainFactors& f) {
    int unsafe = 0;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(n); ++i) {
      const Episode e = run_episode(ActionKind::kMergeLeft, f, o, derive_seed({123, i}));
      unsafe += e.outcome != Outcome::kSuccess;
    }
    return static_cast<double>(unsafe) / n;
  };
  const double low = unsafe_rate(kLowLow);
  const double high = unsafe_rate(kHighHigh);
  const double pooled = 0.5 * (low + high);
  const double z = (high - low) / std::sqrt(pooled * (1.0 - pooled) * 2.0 / n);
  EXPECT_GT(z, 2.326) << low << " vs " << high;
}

}  // namespace
}  // namespace tmpud
