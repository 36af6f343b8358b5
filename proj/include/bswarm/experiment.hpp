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

#ifndef BSWARM_EXPERIMENT_HPP
#define BSWARM_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bswarm/config_file.hpp"
#include "bswarm/field.hpp"
#include "bswarm/swarm.hpp"

namespace bswarm {

inline constexpr int kRunRecordSchema = 1;

struct ExperimentConfig {
  /// "case1", "case2" or a case file path.
  std::string case_name = "case1";
  int robots = 5;
  Variant variant = Variant::full;
  bool penalty_enabled = true;
  std::vector<std::uint64_t> seeds{0};

  std::optional<double> beta;
  std::optional<double> delta_theta;
  std::optional<std::size_t> n_max;
  std::optional<int> quadrature_nodes;
  std::optional<std::size_t> broadcast_cap;
  std::optional<double> noise_std;
  std::optional<bool> arc_length;
  std::optional<double> alpha;

  /// Hyperparameters are fit on at most this many records; 0 means all.
  std::size_t hyper_fit_cap = 200;
  bool freeze_hyper = false;
  double planning_latency = 0.0;

  std::vector<double> snapshot_times;
  int snapshot_grid = 50;
  int final_grid = 0;
  bool per_robot_rmse = true;

  std::filesystem::path output_dir = "runs";

  /// Keys mirror the field names. A file that defines `arena` carries its
  /// own case definition.
  static ExperimentConfig from_key_values(const KeyValueFile& kv);
  static ExperimentConfig load(const std::filesystem::path& path);
  [[nodiscard]] KeyValueFile to_key_values() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Inline case definition, if the config file carried one.
  std::optional<CasePreset> inline_case;
};

/// Seeds as "3", "0,1,5" or "0-4".
std::vector<std::uint64_t> parse_seeds(const std::string& text);

struct ResolvedExperiment {
  CasePreset preset;
  SwarmConfig swarm;  ///< seed left at 0
  SimOptions options;
};

/// Loads the case and applies every override. Throws ConfigError.
ResolvedExperiment resolve(const ExperimentConfig& cfg);

/// Deterministic text covering every behaviour-affecting setting, including
/// the resolved field.
std::string canonical_config(const ExperimentConfig& cfg, const ResolvedExperiment& r);
std::uint64_t fnv1a64(std::string_view text);
std::string config_hash(const ExperimentConfig& cfg, const ResolvedExperiment& r);

SimResult run_single(const ResolvedExperiment& r, std::uint64_t seed);

/// Worker count from BSWARM_WORKERS, else the hardware concurrency.
unsigned worker_count();

/// Calls fn(i) for i in [0, n) on the worker pool.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Runs every seed of \p cfg; results are in seed order.
std::vector<SimResult> run_seeds(const ResolvedExperiment& r, const std::vector<std::uint64_t>& seeds);

/// Deterministic run record; wall-clock data belongs in run_metadata.
nlohmann::json run_record(const ExperimentConfig& cfg, const ResolvedExperiment& r,
                          const std::vector<SimResult>& results);
nlohmann::json run_metadata(const std::vector<SimResult>& results, double wall_seconds);

/// Writes record.json, record.meta.json and per-seed event, trajectory and
/// grid files under output_dir/<config hash>. Returns that directory.
std::filesystem::path write_run_artifacts(const ExperimentConfig& cfg, const ResolvedExperiment& r,
                                          const std::vector<SimResult>& results,
                                          double wall_seconds);

/// Median of the finite entries; NaN when none.
double median(std::vector<double> v);

/// One entry of a comparison: a variant, or the exhaustive sweep, with or
/// without the peer penalty. Tokens: full, sync, explorative, exhaustive,
/// optionally suffixed with ":nopenalty".
struct VariantSpec {
  std::string label;
  bool exhaustive = false;
  Variant variant = Variant::full;
  bool penalty = true;
};

VariantSpec parse_variant_spec(const std::string& token);

struct CompareRow {
  std::string case_name;
  std::string label;
  int robots = 0;
  std::size_t seeds = 0;
  std::size_t found = 0;
  double median_tau = 0.0;
  double median_rmse = 0.0;
  double mean_plan_seconds = 0.0;
};

CompareRow summarize(const std::string& case_name, const std::string& label, int robots,
                     const std::vector<SimResult>& results);

/// Throws ConfigError when fewer than two variants are listed.
std::vector<CompareRow> compare(const ExperimentConfig& base, const std::vector<VariantSpec>& variants);

struct SweepRow {
  int robots = 0;
  std::size_t seeds = 0;
  std::size_t found = 0;
  double median_tau = 0.0;
  double median_rmse = 0.0;
  double mean_plan_seconds = 0.0;
};

std::vector<SweepRow> sweep(const ExperimentConfig& base, const std::vector<int>& m_list);

std::string compare_csv(const std::vector<CompareRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace bswarm

#endif  // BSWARM_EXPERIMENT_HPP
