// Copyright 2026 The Bayes-Swarm Authors
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
#include <sstream>

#include <gtest/gtest.h>

#include "bswarm/experiment.hpp"
#include "support/tiny_case.hpp"

namespace {

using namespace bswarm;
namespace fs = std::filesystem;

ExperimentConfig tiny(int robots = 2) {
  auto c = ExperimentConfig::from_key_values(KeyValueFile::parse(kTinyCaseText));
  c.robots = robots;
  c.seeds = {0, 1};
  c.per_robot_rmse = false;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Seeds, ParsesForms) {
  EXPECT_EQ(parse_seeds("7"), (std::vector<std::uint64_t>{7}));
  EXPECT_EQ(parse_seeds("0,1,2"), (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(parse_seeds("0-4"), (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(parse_seeds("1, 5-6"), (std::vector<std::uint64_t>{1, 5, 6}));
  EXPECT_THROW(parse_seeds("4-1"), ConfigError);
  EXPECT_THROW(parse_seeds("x"), ConfigError);
  EXPECT_THROW(parse_seeds(""), ConfigError);
}

TEST(ExperimentConfig, ValidationNamesField) {
  ExperimentConfig c;
  c.robots = 0;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("'robots'"), std::string::npos);
  }
  c = ExperimentConfig{};
  c.alpha = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.final_grid = 1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ExperimentConfig, UnknownVariantRejected) {
  EXPECT_THROW(ExperimentConfig::from_key_values(KeyValueFile::parse("variant = greedy\n")), ConfigError);
}

TEST(ExperimentConfig, KeyValueRoundTrip) {
  auto c = ExperimentConfig::from_key_values(
      KeyValueFile::parse("case = case2\nrobots = 7\nvariant = sync\nseeds = 3-5\nbeta = 20\n"
                          "penalty = false\nsnapshot_times = 10 20\n"));
  EXPECT_EQ(c.robots, 7);
  EXPECT_EQ(c.variant, Variant::sync);
  EXPECT_FALSE(c.penalty_enabled);
  EXPECT_EQ(c.beta.value(), 20.0);
  const auto back = ExperimentConfig::from_key_values(c.to_key_values());
  EXPECT_EQ(back.to_key_values().serialize(), c.to_key_values().serialize());
}

TEST(ExperimentConfig, MissingFileIsNamed) {
  try {
    (void)ExperimentConfig::load("/no/such/exp.conf");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/no/such/exp.conf"), std::string::npos);
  }
}

TEST(Resolve, OverridesReachSimulation) {
  ExperimentConfig c;
  c.case_name = "case2";
  c.robots = 4;
  c.beta = 12.0;
  c.n_max = 300;
  c.alpha = 0.25;
  c.noise_std = 0.0;
  const auto r = resolve(c);
  EXPECT_EQ(r.swarm.robots, 4);
  EXPECT_EQ(r.options.acquisition.beta, 12.0);
  EXPECT_EQ(r.options.planner.n_max, 300u);
  EXPECT_EQ(r.options.planner.alpha_override.value(), 0.25);
  EXPECT_EQ(r.preset.field.noise_std(), 0.0);
  EXPECT_EQ(r.preset.config.t_max, 1000.0);
}

TEST(ConfigHash, StableAndSensitive) {
  const auto a = tiny();
  const auto ra = resolve(a);
  EXPECT_EQ(config_hash(a, ra), config_hash(a, resolve(a)));
  EXPECT_EQ(config_hash(a, ra).size(), 16u);
  auto b = a;
  b.robots = 3;
  EXPECT_NE(config_hash(a, ra), config_hash(b, resolve(b)));
  auto c = a;
  c.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a, ra), config_hash(c, resolve(c)));
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
}

TEST(Median, IgnoresNonFinite) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_EQ(median({NAN, 5.0, 1.0}), 3.0);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(VariantSpec, Tokens) {
  EXPECT_TRUE(parse_variant_spec("exhaustive").exhaustive);
  const auto v = parse_variant_spec("full:nopenalty");
  EXPECT_EQ(v.variant, Variant::full);
  EXPECT_FALSE(v.penalty);
  EXPECT_EQ(parse_variant_spec("explorative").variant, Variant::explorative);
  EXPECT_THROW(parse_variant_spec("fast"), ConfigError);
}

TEST(Compare, NeedsTwoVariants) {
  EXPECT_THROW(compare(tiny(), {parse_variant_spec("full")}), ConfigError);
}

TEST(Compare, ProducesOneRowPerVariant) {
  const auto rows = compare(tiny(), {parse_variant_spec("full"), parse_variant_spec("exhaustive")});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].seeds, 2u);
  EXPECT_EQ(rows[1].seeds, 1u);
  const auto csv = compare_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "case,variant,m,seeds,found,median_tau,median_rmse,mean_plan_seconds");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Sweep, RequiresAscendingList) {
  EXPECT_THROW(sweep(tiny(), {3, 2}), ConfigError);
  const auto rows = sweep(tiny(), {1, 2});
  ASSERT_EQ(rows.size(), 2u);
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m,seeds,found,median_tau,median_rmse,mean_plan_seconds");
}

TEST(Artifacts, RecordIsByteIdenticalAcrossRuns) {
  const fs::path out = fs::temp_directory_path() / "bswarm_artifacts_test";
  fs::remove_all(out);
  auto c = tiny();
  c.output_dir = out / "a";
  c.snapshot_times = {4.0};
  const auto r = resolve(c);
  const auto dir_a = write_run_artifacts(c, r, run_seeds(r, c.seeds), 0.0);
  c.output_dir = out / "b";
  const auto dir_b = write_run_artifacts(c, r, run_seeds(r, c.seeds), 0.0);
  EXPECT_EQ(dir_a.filename(), dir_b.filename());
  for (const char* f : {"record.json", "seed-0.events.jsonl", "seed-1.trajectory.csv",
                        "seed-0.grid-4.mean.csv"}) {
    ASSERT_TRUE(fs::exists(dir_a / f)) << f;
    EXPECT_EQ(slurp(dir_a / f), slurp(dir_b / f)) << f;
  }
  const auto rec = nlohmann::json::parse(slurp(dir_a / "record.json"));
  EXPECT_EQ(rec["schema_version"], kRunRecordSchema);
  EXPECT_EQ(rec["runs"].size(), 2u);
  EXPECT_TRUE(fs::exists(dir_a / "record.meta.json"));
  fs::remove_all(out);
}

TEST(ParallelFor, RethrowsWorkerErrors) {
  EXPECT_THROW(parallel_for(4, [](std::size_t i) {
                 if (i == 2) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  std::vector<int> hit(16, 0);
  parallel_for(hit.size(), [&](std::size_t i) { hit[i] = 1; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 16);
}

}  // namespace
