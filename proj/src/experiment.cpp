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

#include "bswarm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "bswarm/planner.hpp"

namespace bswarm {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

template <class T>
void set_if(KeyValueFile& kv, const char* key, const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_same_v<T, bool>) {
    kv.set(key, *v ? "true" : "false");
  } else if constexpr (std::is_floating_point_v<T>) {
    kv.set(key, format_double(*v));
  } else {
    kv.set(key, std::to_string(*v));
  }
}

long long checked_int(const KeyValueFile& kv, const char* key, long long fallback, long long lo) {
  const long long v = kv.get_int(key, fallback);
  if (v < lo) {
    throw ConfigError(std::string("config field '") + key + "' must be >= " + std::to_string(lo));
  }
  return v;
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  auto parse_one = [&](const std::string& s) -> std::uint64_t {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config field 'seeds' has a bad entry '" + s + "'");
    }
  };
  while (std::getline(ss, part, ',')) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (part.empty()) continue;
    const auto dash = part.find('-');
    if (dash != std::string::npos && dash > 0) {
      const auto a = parse_one(part.substr(0, dash));
      const auto b = parse_one(part.substr(dash + 1));
      if (b < a) throw ConfigError("config field 'seeds' has a descending range '" + part + "'");
      for (auto s = a; s <= b; ++s) out.push_back(s);
    } else {
      out.push_back(parse_one(part));
    }
  }
  if (out.empty()) throw ConfigError("config field 'seeds' is empty");
  return out;
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValueFile& kv) {
  ExperimentConfig c;
  if (kv.has("arena")) {
    c.inline_case = case_from_key_values(kv);
    c.case_name = c.inline_case->config.name;
  }
  if (auto v = kv.get("case")) c.case_name = *v;
  c.robots = static_cast<int>(checked_int(kv, "robots", c.robots, 1));
  if (auto v = kv.get("variant")) {
    try {
      c.variant = parse_variant(*v);
    } catch (const std::invalid_argument&) {
      throw ConfigError("config field 'variant' has unknown value '" + *v + "'");
    }
  }
  c.penalty_enabled = kv.get_bool("penalty", c.penalty_enabled);
  if (auto v = kv.get("seeds")) c.seeds = parse_seeds(*v);
  if (kv.has("beta")) c.beta = kv.get_double("beta");
  if (kv.has("delta_theta")) c.delta_theta = kv.get_double("delta_theta");
  if (kv.has("n_max")) c.n_max = static_cast<std::size_t>(checked_int(kv, "n_max", 1000, 1));
  if (kv.has("quadrature_nodes")) {
    c.quadrature_nodes = static_cast<int>(checked_int(kv, "quadrature_nodes", 11, 2));
  }
  if (kv.has("broadcast_cap")) {
    c.broadcast_cap = static_cast<std::size_t>(checked_int(kv, "broadcast_cap", 100, 1));
  }
  if (kv.has("noise_std")) c.noise_std = kv.get_double("noise_std");
  if (kv.has("arc_length")) c.arc_length = kv.get_bool("arc_length", false);
  if (kv.has("alpha")) c.alpha = kv.get_double("alpha");
  c.hyper_fit_cap = static_cast<std::size_t>(checked_int(kv, "hyper_fit_cap", 200, 0));
  c.freeze_hyper = kv.get_bool("freeze_hyper", c.freeze_hyper);
  c.planning_latency = kv.get_double("planning_latency", c.planning_latency);
  if (kv.has("snapshot_times")) c.snapshot_times = kv.get_doubles("snapshot_times");
  c.snapshot_grid = static_cast<int>(checked_int(kv, "snapshot_grid", c.snapshot_grid, 2));
  c.final_grid = static_cast<int>(checked_int(kv, "final_grid", c.final_grid, 0));
  c.per_robot_rmse = kv.get_bool("per_robot_rmse", c.per_robot_rmse);
  if (auto v = kv.get("output")) c.output_dir = *v;
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  if (!fs::exists(path)) {
    throw ConfigError("config file '" + path.string() + "' does not exist");
  }
  return from_key_values(KeyValueFile::load(path));
}

KeyValueFile ExperimentConfig::to_key_values() const {
  KeyValueFile kv;
  kv.set("case", case_name);
  kv.set("robots", std::to_string(robots));
  kv.set("variant", to_string(variant));
  kv.set("penalty", penalty_enabled ? "true" : "false");
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(seeds[i]);
  }
  kv.set("seeds", s);
  set_if(kv, "beta", beta);
  set_if(kv, "delta_theta", delta_theta);
  set_if(kv, "n_max", n_max);
  set_if(kv, "quadrature_nodes", quadrature_nodes);
  set_if(kv, "broadcast_cap", broadcast_cap);
  set_if(kv, "noise_std", noise_std);
  set_if(kv, "arc_length", arc_length);
  set_if(kv, "alpha", alpha);
  kv.set("hyper_fit_cap", std::to_string(hyper_fit_cap));
  kv.set("freeze_hyper", freeze_hyper ? "true" : "false");
  kv.set("planning_latency", format_double(planning_latency));
  if (!snapshot_times.empty()) kv.set("snapshot_times", join_doubles(snapshot_times));
  kv.set("snapshot_grid", std::to_string(snapshot_grid));
  kv.set("final_grid", std::to_string(final_grid));
  kv.set("per_robot_rmse", per_robot_rmse ? "true" : "false");
  kv.set("output", output_dir.string());
  return kv;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "' " + why);
  };
  if (case_name.empty()) fail("case", "is empty");
  if (robots < 1) fail("robots", "must be >= 1");
  if (seeds.empty()) fail("seeds", "is empty");
  if (beta && !(*beta > 0.0 && std::isfinite(*beta))) fail("beta", "must be > 0");
  if (delta_theta && !(*delta_theta > 0.0 && *delta_theta <= 360.0)) {
    fail("delta_theta", "must lie in (0, 360]");
  }
  if (n_max && *n_max < 1) fail("n_max", "must be >= 1");
  if (quadrature_nodes && *quadrature_nodes < 2) fail("quadrature_nodes", "must be >= 2");
  if (broadcast_cap && *broadcast_cap < 1) fail("broadcast_cap", "must be >= 1");
  if (noise_std && !(*noise_std >= 0.0 && std::isfinite(*noise_std))) {
    fail("noise_std", "must be >= 0");
  }
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0)) fail("alpha", "must lie in [0, 1]");
  if (!(planning_latency >= 0.0)) fail("planning_latency", "must be >= 0");
  for (const double t : snapshot_times) {
    if (!(t >= 0.0)) fail("snapshot_times", "must be >= 0");
  }
  if (snapshot_grid < 2) fail("snapshot_grid", "must be >= 2");
  if (final_grid < 0 || final_grid == 1) fail("final_grid", "must be 0 or >= 2");
}

ResolvedExperiment resolve(const ExperimentConfig& cfg) {
  cfg.validate();
  ResolvedExperiment r{cfg.inline_case ? *cfg.inline_case : load_case(cfg.case_name), {}, {}};
  if (cfg.noise_std) r.preset.field = r.preset.field.with_noise(*cfg.noise_std);
  if (cfg.delta_theta) r.preset.config.delta_theta = *cfg.delta_theta;
  validate_case(r.preset);

  r.swarm.robots = cfg.robots;
  r.swarm.variant = cfg.variant;
  r.swarm.penalty_enabled = cfg.penalty_enabled;
  r.swarm.planning_latency = cfg.planning_latency;
  if (cfg.broadcast_cap) r.swarm.broadcast_cap = *cfg.broadcast_cap;
  r.swarm.snapshot_times = cfg.snapshot_times;
  r.swarm.snapshot_grid = cfg.snapshot_grid;
  r.swarm.final_grid = cfg.final_grid;
  r.swarm.per_robot_rmse = cfg.per_robot_rmse;

  auto& p = r.options.planner;
  if (cfg.n_max) p.n_max = *cfg.n_max;
  p.alpha_override = cfg.alpha;
  auto& a = r.options.acquisition;
  if (cfg.beta) a.beta = *cfg.beta;
  if (cfg.quadrature_nodes) a.quadrature_nodes = *cfg.quadrature_nodes;
  if (cfg.arc_length) a.arc_length = *cfg.arc_length;
  r.options.fit.hyper_fit_cap = cfg.hyper_fit_cap;
  r.options.fit.freeze = cfg.freeze_hyper;
  return r;
}

std::string canonical_config(const ExperimentConfig& /*cfg*/, const ResolvedExperiment& r) {
  KeyValueFile kv = to_key_values(r.preset);
  const auto& s = r.swarm;
  const auto& p = r.options.planner;
  const auto& a = r.options.acquisition;
  const auto& f = r.options.fit;
  kv.set("robots", std::to_string(s.robots));
  kv.set("variant", to_string(s.variant));
  kv.set("penalty", s.penalty_enabled ? "true" : "false");
  kv.set("planning_latency", format_double(s.planning_latency));
  kv.set("broadcast_cap", std::to_string(s.broadcast_cap));
  kv.set("sample_period", format_double(s.sample_period));
  kv.set("n_max", std::to_string(p.n_max));
  kv.set("alpha", p.alpha_override ? format_double(*p.alpha_override) : "schedule");
  kv.set("planner_random_starts", std::to_string(p.random_starts));
  kv.set("planner_max_iterations", std::to_string(p.max_iterations));
  kv.set("planner_step_tolerance", format_double(p.step_tolerance));
  kv.set("x_star_random_starts", std::to_string(p.x_star_random_starts));
  kv.set("planner_scan", std::to_string(p.scan_radii) + "x" + std::to_string(p.scan_angles) + "/" +
                             std::to_string(p.scan_starts));
  kv.set("beta", format_double(a.beta));
  kv.set("quadrature_nodes", std::to_string(a.quadrature_nodes));
  kv.set("arc_length", a.arc_length ? "true" : "false");
  kv.set("sigma_floor", format_double(a.sigma_floor));
  kv.set("hyper_fit_cap", std::to_string(f.hyper_fit_cap));
  kv.set("freeze_hyper", f.freeze ? "true" : "false");
  kv.set("initial_hyper", join_doubles({r.options.initial_hyper.length_scale,
                                        r.options.initial_hyper.signal_std,
                                        r.options.initial_hyper.noise_std}));
  kv.set("snapshot_times", join_doubles(s.snapshot_times));
  kv.set("snapshot_grid", std::to_string(s.snapshot_grid));
  kv.set("final_grid", std::to_string(s.final_grid));
  kv.set("rmse_grid", std::to_string(s.rmse_grid));
  kv.set("per_robot_rmse", s.per_robot_rmse ? "true" : "false");
  kv.set("schema", std::to_string(kRunRecordSchema));
  return kv.serialize();
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg, const ResolvedExperiment& r) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config(cfg, r))));
  return buf;
}

SimResult run_single(const ResolvedExperiment& r, std::uint64_t seed) {
  SwarmConfig s = r.swarm;
  s.seed = seed;
  return run_experiment(r.preset.field, r.preset.config, s, r.options);
}

unsigned worker_count() {
  if (const char* env = std::getenv("BSWARM_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<SimResult> run_seeds(const ResolvedExperiment& r,
                                 const std::vector<std::uint64_t>& seeds) {
  std::vector<SimResult> out(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { out[i] = run_single(r, seeds[i]); });
  return out;
}

json run_record(const ExperimentConfig& cfg, const ResolvedExperiment& r,
                const std::vector<SimResult>& results) {
  json runs = json::array();
  std::vector<double> taus;
  std::vector<double> rmses;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    std::size_t fallbacks = 0;
    std::size_t clipped = 0;
    for (const auto& p : res.plans) {
      fallbacks += p.fallback ? 1 : 0;
      clipped += p.clipped ? 1 : 0;
    }
    json robot_rmse = json::array();
    for (const double v : res.robot_rmse) robot_rmse.push_back(num(v));
    runs.push_back({{"seed", cfg.seeds[i]},
                    {"termination", to_string(res.termination)},
                    {"finder", res.finder},
                    {"t_achieved", res.t_achieved},
                    {"tau", num(res.tau)},
                    {"mapping_rmse", num(res.mapping_rmse)},
                    {"robot_rmse", robot_rmse},
                    {"observations", res.observations},
                    {"plans", res.plans.size()},
                    {"fallbacks", fallbacks},
                    {"clipped_steps", clipped},
                    {"hyper",
                     {{"length_scale", res.final_hyper.length_scale},
                      {"signal_std", res.final_hyper.signal_std},
                      {"noise_std", res.final_hyper.noise_std}}}});
    taus.push_back(res.tau);
    rmses.push_back(res.mapping_rmse);
  }
  json config = json::object();
  const KeyValueFile kv = cfg.to_key_values();
  for (const auto& [k, v] : kv.entries()) {
    if (k != "output") config[k] = v;
  }
  const auto& c = r.preset.config;
  return {{"schema_version", kRunRecordSchema},
          {"config_hash", config_hash(cfg, r)},
          {"config", config},
          {"case",
           {{"name", c.name},
            {"t_max", c.t_max},
            {"t_idealized", c.t_idealized},
            {"horizon", c.horizon},
            {"speed", c.speed},
            {"epsilon", c.epsilon},
            {"source", {r.preset.field.source().x(), r.preset.field.source().y()}}}},
          {"check_interval", r.swarm.sample_period},
          {"runs", runs},
          {"summary", {{"median_tau", num(median(taus))}, {"median_rmse", num(median(rmses))}}}};
}

json run_metadata(const std::vector<SimResult>& results, double wall_seconds) {
  json per = json::array();
  for (const auto& r : results) per.push_back(r.mean_plan_seconds());
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"created", stamp},
          {"wall_seconds", wall_seconds},
          {"workers", worker_count()},
          {"mean_plan_seconds", per}};
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

namespace {

std::string trajectory_csv(const SimResult& r) {
  std::string out = "t,robot,x,y,value\n";
  for (const auto& row : r.trajectory) {
    out += format_double(row.t) + ',' + std::to_string(row.robot) + ',' +
           format_double(row.position.x()) + ',' + format_double(row.position.y()) + ',' +
           (std::isfinite(row.value) ? format_double(row.value) : "") + '\n';
  }
  return out;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

fs::path write_run_artifacts(const ExperimentConfig& cfg, const ResolvedExperiment& r,
                             const std::vector<SimResult>& results, double wall_seconds) {
  const fs::path dir = cfg.output_dir / config_hash(cfg, r);
  fs::create_directories(dir);
  write_file_atomic(dir / "record.json", run_record(cfg, r, results).dump(2) + "\n");
  write_file_atomic(dir / "record.meta.json", run_metadata(results, wall_seconds).dump(2) + "\n");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const std::string stem = "seed-" + std::to_string(cfg.seeds[i]);
    const auto& res = results[i];
    write_file_atomic(dir / (stem + ".events.jsonl"), res.event_log());
    write_file_atomic(dir / (stem + ".trajectory.csv"), trajectory_csv(res));
    for (const auto& s : res.snapshots) {
      const std::string t = format_double(s.t);
      write_file_atomic(dir / (stem + ".grid-" + t + ".mean.csv"), matrix_csv(s.mean));
      write_file_atomic(dir / (stem + ".grid-" + t + ".std.csv"), matrix_csv(s.stddev));
    }
  }
  return dir;
}

double median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return !std::isfinite(x); });
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

VariantSpec parse_variant_spec(const std::string& token) {
  VariantSpec s;
  s.label = token;
  std::string base = token;
  if (const auto colon = token.find(':'); colon != std::string::npos) {
    const std::string mod = token.substr(colon + 1);
    if (mod != "nopenalty") throw ConfigError("unknown variant modifier '" + mod + "'");
    s.penalty = false;
    base = token.substr(0, colon);
  }
  if (base == "exhaustive") {
    s.exhaustive = true;
    return s;
  }
  try {
    s.variant = parse_variant(base);
  } catch (const std::invalid_argument&) {
    throw ConfigError("unknown variant '" + base + "'");
  }
  return s;
}

CompareRow summarize(const std::string& case_name, const std::string& label, int robots,
                     const std::vector<SimResult>& results) {
  CompareRow row;
  row.case_name = case_name;
  row.label = label;
  row.robots = robots;
  row.seeds = results.size();
  std::vector<double> taus;
  std::vector<double> rmses;
  double plan_sum = 0.0;
  for (const auto& r : results) {
    row.found += r.found() ? 1 : 0;
    taus.push_back(r.tau);
    rmses.push_back(r.mapping_rmse);
    plan_sum += r.mean_plan_seconds();
  }
  row.median_tau = median(taus);
  row.median_rmse = median(rmses);
  row.mean_plan_seconds = results.empty() ? 0.0 : plan_sum / static_cast<double>(results.size());
  return row;
}

std::vector<CompareRow> compare(const ExperimentConfig& base,
                                const std::vector<VariantSpec>& variants) {
  if (variants.size() < 2) throw ConfigError("compare needs at least two variants");
  std::vector<CompareRow> rows;
  for (const auto& v : variants) {
    ExperimentConfig cfg = base;
    cfg.variant = v.variant;
    cfg.penalty_enabled = v.penalty;
    const auto r = resolve(cfg);
    std::vector<SimResult> results;
    if (v.exhaustive) {
      results.push_back(run_exhaustive_baseline(r.preset.field, r.preset.config, cfg.robots));
    } else {
      results = run_seeds(r, cfg.seeds);
    }
    rows.push_back(summarize(r.preset.config.name, v.label, cfg.robots, results));
  }
  return rows;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base, const std::vector<int>& m_list) {
  if (m_list.empty()) throw ConfigError("sweep needs a non-empty m list");
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    if (m_list[i] < 1 || (i > 0 && m_list[i] <= m_list[i - 1])) {
      throw ConfigError("sweep m list must be ascending and >= 1");
    }
  }
  std::vector<SweepRow> rows;
  for (const int m : m_list) {
    ExperimentConfig cfg = base;
    cfg.robots = m;
    const auto r = resolve(cfg);
    const auto row = summarize(r.preset.config.name, to_string(cfg.variant), m, run_seeds(r, cfg.seeds));
    rows.push_back({m, row.seeds, row.found, row.median_tau, row.median_rmse, row.mean_plan_seconds});
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out = "case,variant,m,seeds,found,median_tau,median_rmse,mean_plan_seconds\n";
  for (const auto& r : rows) {
    out += r.case_name + ',' + r.label + ',' + std::to_string(r.robots) + ',' +
           std::to_string(r.seeds) + ',' + std::to_string(r.found) + ',' + csv_number(r.median_tau) +
           ',' + csv_number(r.median_rmse) + ',' + csv_number(r.mean_plan_seconds) + '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "m,seeds,found,median_tau,median_rmse,mean_plan_seconds\n";
  for (const auto& r : rows) {
    out += std::to_string(r.robots) + ',' + std::to_string(r.seeds) + ',' +
           std::to_string(r.found) + ',' + csv_number(r.median_tau) + ',' +
           csv_number(r.median_rmse) + ',' + csv_number(r.mean_plan_seconds) + '\n';
  }
  return out;
}

}  // namespace bswarm
