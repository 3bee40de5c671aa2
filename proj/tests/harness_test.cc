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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "support/oracles.h"
#include "tmpud/errors.h"
#include "tmpud/harness.h"

namespace tmpud {
namespace {

using testing::data_path;

const std::vector<DomainFactors> kAllConditions{
    DomainFactors::parse("low-low"), DomainFactors::parse("low-high"),
    DomainFactors::parse("high-low"), DomainFactors::parse("high-high")};

// Outcome mass shifts toward collisions and stops as the latent safety drops.
WorldModel graded_model() {
  WorldModel m;
  for (const DomainFactors& f : kAllConditions) {
    for (ActionKind kind : kAllActionKinds) {
      WorldModelCell c;
      c.fixed.emplace();
      for (int b = 0; b < kSafetyBuckets; ++b) {
        const double risk = 0.3 * (kSafetyBuckets - 1 - b) / (kSafetyBuckets - 1);
        (*c.fixed)[b] = {1.0 - risk, 0.6 * risk, 0.4 * risk};
      }
      for (int i = 0; i < kSafetyHistogramBins; ++i) c.safety_histogram[i] = 1 + i % 4;
      m.set_cell(kind, f, c);
    }
  }
  return m;
}

ScenarioConfig fig3_config(int trials_per_batch, int batches) {
  ScenarioConfig cfg;
  cfg.set_scenario(Scenario::load(data_path("scenarios/fig3.json")));
  cfg.policies = {ExecutionPolicy::nocom(), ExecutionPolicy::thbased(0.3),
                  ExecutionPolicy::thbased(0.5), ExecutionPolicy::tmpud()};
  cfg.conditions = kAllConditions;
  cfg.trials_per_batch = trials_per_batch;
  cfg.batches = batches;
  cfg.base_seed = 40;
  cfg.executor.gamma = 50.0;
  return cfg;
}

std::string trials_csv(std::span<const TrialRecord> records) {
  std::ostringstream out;
  write_trials_csv(out, records);
  return out.str();
}

std::string summary_csv(std::span<const TrialRecord> records) {
  std::ostringstream out;
  write_summary_csv(out, summarize(records));
  return out.str();
}

TEST(RunBatchTest, OneTrialGivesOneRecord) {
  ScenarioConfig cfg = fig3_config(1, 1);
  cfg.policies = {ExecutionPolicy::tmpud()};
  cfg.conditions = {kAllConditions[0]};
  const std::vector<TrialRecord> r = run_batch(cfg, graded_model());
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].policy, "tmpud");
  EXPECT_EQ(r[0].condition, "low-low");
  EXPECT_EQ(r[0].seed, 40u);
}

TEST(RunBatchTest, FullGridShapesAndConsistency) {
  const ScenarioConfig cfg = fig3_config(25, 4);
  const std::vector<TrialRecord> records = run_batch(cfg, graded_model());
  ASSERT_EQ(records.size(), 1600u);
  const std::vector<SummaryRow> rows = summarize(records);
  ASSERT_EQ(rows.size(), 16u);
  for (const TrialRecord& r : records) {
    EXPECT_FALSE(r.completed && (r.collision || r.failed));
    EXPECT_TRUE(r.completed || r.collision || r.failed);
    EXPECT_GE(r.distance, 0.0);
    if (r.policy == "nocom") {
      EXPECT_EQ(r.replans, 0);
      EXPECT_EQ(r.rejections, 0);
    }
    if (r.policy == "tmpud") {
      EXPECT_EQ(r.rejections, 0);
    }
  }
  for (const SummaryRow& row : rows) {
    EXPECT_EQ(row.trials, 100);
    EXPECT_EQ(row.batches, 4);
    EXPECT_EQ(row.unsafe, row.collisions + row.forced_stops);
    EXPECT_EQ(row.completed + row.collisions + row.failed, row.trials);
    EXPECT_NEAR(row.batch_unsafe_mean * row.batches, row.unsafe, 1e-9);
  }
}

TEST(RunBatchTest, RepeatRunsAndWorkerCountsAgree) {
  ScenarioConfig cfg = fig3_config(10, 2);
  const WorldModel m = graded_model();
  const std::vector<TrialRecord> a = run_batch(cfg, m);
  const std::vector<TrialRecord> b = run_batch(cfg, m);
  cfg.workers = 3;
  const std::vector<TrialRecord> c = run_batch(cfg, m);
  EXPECT_EQ(trials_csv(a), trials_csv(b));
  EXPECT_EQ(trials_csv(a), trials_csv(c));
  EXPECT_EQ(summary_csv(a), summary_csv(c));
}

TEST(RunBatchTest, MissingWorldModelCellIsReported) {
  ScenarioConfig cfg = fig3_config(1, 1);
  EXPECT_THROW(run_batch(cfg, WorldModel()), MissingCell);
  cfg.policies.clear();
  EXPECT_THROW(run_batch(cfg, graded_model()), InvalidArgument);
}

TrialRecord record(const char* policy, int batch, bool completed, double distance) {
  TrialRecord r;
  r.policy = policy;
  r.condition = "low-low";
  r.batch = batch;
  r.completed = completed;
  r.distance = distance;
  return r;
}

// Values worked out by hand for the six records below.
TEST(SummarizeTest, HandBuiltFixture) {
  std::vector<TrialRecord> records;
  records.push_back(record("a", 0, true, 100.0));
  records.push_back(record("a", 0, true, 120.0));
  records.back().forced_stops = 1;
  records.push_back(record("a", 1, false, 30.0));
  records.back().collision = true;
  records.back().partial_distance = 10.0;
  records.push_back(record("a", 1, true, 140.0));
  records.push_back(record("b", 0, true, 200.0));
  records.push_back(record("b", 1, false, 50.0));
  records.back().failed = true;

  const std::vector<SummaryRow> rows = summarize(records);
  ASSERT_EQ(rows.size(), 2u);
  const SummaryRow& a = rows[0];
  EXPECT_EQ(a.policy, "a");
  EXPECT_EQ(a.trials, 4);
  EXPECT_EQ(a.completed, 3);
  EXPECT_EQ(a.collisions, 1);
  EXPECT_EQ(a.forced_stops, 1);
  EXPECT_EQ(a.unsafe, 2);
  EXPECT_EQ(a.failed, 0);
  EXPECT_DOUBLE_EQ(a.mean_distance, 120.0);
  EXPECT_DOUBLE_EQ(a.mean_partial_distance, 40.0);
  EXPECT_EQ(a.batches, 2);
  EXPECT_DOUBLE_EQ(a.batch_distance_mean, 125.0);
  EXPECT_NEAR(a.batch_distance_stderr, 15.0, 1e-12);
  EXPECT_DOUBLE_EQ(a.batch_unsafe_mean, 1.0);
  EXPECT_DOUBLE_EQ(a.batch_unsafe_stderr, 0.0);

  const SummaryRow& b = rows[1];
  EXPECT_EQ(b.trials, 2);
  EXPECT_EQ(b.completed, 1);
  EXPECT_EQ(b.failed, 1);
  EXPECT_EQ(b.unsafe, 0);
  EXPECT_DOUBLE_EQ(b.mean_distance, 200.0);
  EXPECT_DOUBLE_EQ(b.batch_distance_mean, 200.0);
  EXPECT_DOUBLE_EQ(b.batch_distance_stderr, 0.0);
}

TEST(SummarizeTest, IdenticalTrialsHaveZeroSpread) {
  std::vector<TrialRecord> records;
  for (int i = 0; i < 8; ++i) records.push_back(record("x", i % 4, true, 77.5));
  const SummaryRow row = summarize(records).front();
  EXPECT_DOUBLE_EQ(row.mean_distance, 77.5);
  EXPECT_DOUBLE_EQ(row.batch_distance_stderr, 0.0);
  EXPECT_EQ(row.failed, 0);
}

TEST(SummarizeTest, EmptyInputThrows) {
  EXPECT_THROW(summarize({}), EmptyInput);
}

TEST(TrialsCsvTest, RoundTrip) {
  const std::vector<TrialRecord> records = run_batch(fig3_config(3, 2), graded_model());
  const std::string text = trials_csv(records);
  std::istringstream in(text);
  const std::vector<TrialRecord> back = read_trials_csv(in, "t.csv");
  ASSERT_EQ(back.size(), records.size());
  EXPECT_EQ(trials_csv(back), text);
}

TEST(TrialsCsvTest, ReadErrorsCarryLineNumbers) {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_trials_csv(in, "t.csv");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  std::ostringstream header;
  write_trials_csv(header, {});
  const std::string h = header.str();
  EXPECT_NE(error_of("").find("t.csv:1"), std::string::npos);
  EXPECT_NE(error_of("policy,condition\n").find("t.csv:1"), std::string::npos);
  EXPECT_NE(error_of(h + "tmpud,low-low,0,0,1,1,0,0,5.0,0,0,0,0,0\ntmpud,low-low\n")
                .find("t.csv:3"),
            std::string::npos);
  EXPECT_NE(error_of(h + "tmpud,low-low,x,0,1,1,0,0,5.0,0,0,0,0,0\n").find("t.csv:2"),
            std::string::npos);
}

TEST(BenchmarkOutputsTest, WritesAllThreeFiles) {
  const std::vector<TrialRecord> records = run_batch(fig3_config(2, 2), graded_model());
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "tmpud_harness_test_out";
  std::filesystem::remove_all(dir);
  write_benchmark_outputs(dir, records);
  for (const char* name : {kTrialsCsv, kSummaryCsv, kPlotCsv}) {
    EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  }
  std::ifstream in(dir / kTrialsCsv, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, trials_csv(records));
  std::filesystem::remove_all(dir);
}

std::string config_error(const std::string& text) {
  try {
    ScenarioConfig::from_json(JsonDocument::parse(text, "cfg.json"), data_path("configs"));
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

TEST(ScenarioConfigTest, ParsesTheShippedConfigs) {
  const ScenarioConfig demo = ScenarioConfig::load(data_path("configs/demo.json"));
  EXPECT_EQ(demo.policies.size(), 3u);
  EXPECT_EQ(demo.conditions.size(), 2u);
  EXPECT_EQ(demo.trials_per_batch, 20);
  EXPECT_EQ(demo.learner.max_rounds, 2);
  EXPECT_EQ(demo.executor.gamma, 50.0);
  const ScenarioConfig bench = ScenarioConfig::load(data_path("configs/benchmark.json"));
  EXPECT_EQ(bench.policies.size(), 5u);
  EXPECT_EQ(bench.conditions.size(), 4u);
  EXPECT_EQ(bench.trials_per_batch * bench.batches, 1000);
}

TEST(ScenarioConfigTest, ErrorsPointAtTheOffendingLine) {
  const std::string head = R"({
  "network": "../networks/fig3.json",
  "initial": {"segment": "start", "lane": 0},
  "goal": {"segment": "goal"},
)";
  EXPECT_NE(config_error(head + R"(  "policies": ["tmpud",
               "greedy"],
  "conditions": ["low-low"]
})").find("cfg.json:6"),
            std::string::npos);
  EXPECT_NE(config_error(head + R"(  "policies": ["tmpud"],
  "conditions": ["low-low", "medium-low"]
})").find("cfg.json:6"),
            std::string::npos);
  EXPECT_NE(config_error(head + R"(  "policies": ["tmpud"],
  "conditions": ["low-low"],
  "executor": {"gamma": -1}
})").find("cfg.json:7"),
            std::string::npos);
  EXPECT_NE(config_error(R"({
  "network": "../networks/fig3.json",
  "initial": {"segment": "nowhere", "lane": 0},
  "goal": {"segment": "goal"},
  "policies": ["tmpud"],
  "conditions": ["low-low"]
})").find("cfg.json:3"),
            std::string::npos);
  EXPECT_FALSE(config_error(head + R"(  "policies": [],
  "conditions": ["low-low"]
})").empty());
  EXPECT_FALSE(config_error("{ not json").empty());
}

}  // namespace
}  // namespace tmpud
