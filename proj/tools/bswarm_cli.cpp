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

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bswarm/experiment.hpp"

namespace {

using namespace bswarm;

struct CommonFlags {
  std::string config;
  std::string case_name;
  int robots = 0;
  std::string variant;
  bool no_penalty = false;
  std::string seeds;
  double beta = 0.0;
  double delta_theta = 0.0;
  std::size_t n_max = 0;
  int quadrature_nodes = 0;
  std::size_t broadcast_cap = 0;
  double noise_std = 0.0;
  bool arc_length = false;
  double alpha = 0.0;
  std::size_t hyper_fit_cap = 0;
  bool freeze_hyper = false;
  double latency = 0.0;
  std::vector<double> snapshot_times;
  int final_grid = 0;
  std::string out;
};

struct Registered {
  CLI::App* app;
  CommonFlags flags;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "Key-value experiment file");
  app->add_option("--case", f.case_name, "case1, case2 or a case file");
  app->add_option("-m,--robots", f.robots, "Swarm size")->check(CLI::PositiveNumber);
  app->add_option("--variant", f.variant, "full, sync or explorative");
  app->add_flag("--no-penalty", f.no_penalty, "Disable the peer penalty");
  app->add_option("--seeds", f.seeds, "Seeds: 7, 0,1,2 or 0-4");
  app->add_option("--beta", f.beta, "Explore-term scaling");
  app->add_option("--delta-theta", f.delta_theta, "Initial heading range, degrees");
  app->add_option("--n-max", f.n_max, "Observation cap per GP fit");
  app->add_option("--quadrature-nodes", f.quadrature_nodes, "Quadrature nodes along a path");
  app->add_option("--broadcast-cap", f.broadcast_cap, "Observations per broadcast");
  app->add_option("--noise-std", f.noise_std, "Observation noise std");
  app->add_flag("--arc-length", f.arc_length, "Scale the explore term by path length");
  app->add_option("--alpha", f.alpha, "Fixed exploit weight instead of the schedule");
  app->add_option("--hyper-fit-cap", f.hyper_fit_cap, "Records used for hyperparameter fits, 0 = all");
  app->add_flag("--freeze-hyper", f.freeze_hyper, "Keep the initial hyperparameters");
  app->add_option("--latency", f.latency, "Planning latency, s");
  app->add_option("--snapshot-times", f.snapshot_times, "Times for mean/std grid dumps")
      ->delimiter(',');
  app->add_option("--final-grid", f.final_grid, "Side of the final mean/std grid");
  app->add_option("-o,--out", f.out, "Output directory");
}

ExperimentConfig build_config(const CLI::App* app, const CommonFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(f.config);
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--case")) {
    c.case_name = f.case_name;
    c.inline_case.reset();
  }
  if (given("--robots")) c.robots = f.robots;
  if (given("--variant")) {
    try {
      c.variant = parse_variant(f.variant);
    } catch (const std::invalid_argument&) {
      throw ConfigError("config field 'variant' has unknown value '" + f.variant + "'");
    }
  }
  if (f.no_penalty) c.penalty_enabled = false;
  if (given("--seeds")) c.seeds = parse_seeds(f.seeds);
  if (given("--beta")) c.beta = f.beta;
  if (given("--delta-theta")) c.delta_theta = f.delta_theta;
  if (given("--n-max")) c.n_max = f.n_max;
  if (given("--quadrature-nodes")) c.quadrature_nodes = f.quadrature_nodes;
  if (given("--broadcast-cap")) c.broadcast_cap = f.broadcast_cap;
  if (given("--noise-std")) c.noise_std = f.noise_std;
  if (f.arc_length) c.arc_length = true;
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--hyper-fit-cap")) c.hyper_fit_cap = f.hyper_fit_cap;
  if (f.freeze_hyper) c.freeze_hyper = true;
  if (given("--latency")) c.planning_latency = f.latency;
  if (given("--snapshot-times")) c.snapshot_times = f.snapshot_times;
  if (given("--final-grid")) c.final_grid = f.final_grid;
  if (given("--out")) c.output_dir = f.out;
  c.validate();
  return c;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
    std::cerr << "wrote " << path << "\n";
  }
}

int cmd_run(const CLI::App* app, const CommonFlags& f) {
  const ExperimentConfig cfg = build_config(app, f);
  const auto r = resolve(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = run_seeds(r, cfg.seeds);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto dir = write_run_artifacts(cfg, r, results, wall);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& res = results[i];
    std::printf("seed %llu: %s t=%.3f tau=%.4f rmse=%.5f\n",
                static_cast<unsigned long long>(cfg.seeds[i]), to_string(res.termination).c_str(),
                res.t_achieved, res.tau, res.mapping_rmse);
  }
  std::printf("record: %s\n", (dir / "record.json").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized asynchronous swarm search simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one configuration over its seeds");
  add_common(run, run_flags);

  CommonFlags cmp_flags;
  std::string variants;
  std::string cmp_csv;
  auto* cmp = app.add_subcommand("compare", "Median tau and RMSE per variant");
  add_common(cmp, cmp_flags);
  cmp->add_option("--variants", variants,
                  "Comma list of full, sync, explorative, exhaustive; ':nopenalty' suffix allowed")
      ->required();
  cmp->add_option("--csv", cmp_csv, "Write the table here instead of stdout");

  CommonFlags sw_flags;
  std::vector<int> m_list{2, 5, 10, 20};
  std::string sw_csv;
  auto* sw = app.add_subcommand("sweep", "Median metrics across swarm sizes");
  add_common(sw, sw_flags);
  sw->add_option("--m-list", m_list, "Ascending swarm sizes")->delimiter(',');
  sw->add_option("--csv", sw_csv, "Write the table here instead of stdout");

  CommonFlags bl_flags;
  auto* bl = app.add_subcommand("baseline", "Exhaustive lawnmower search");
  add_common(bl, bl_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(run, run_flags);
    if (*cmp) {
      std::vector<VariantSpec> specs;
      for (const auto& t : split(variants)) specs.push_back(parse_variant_spec(t));
      const auto cfg = build_config(cmp, cmp_flags);
      emit(compare_csv(compare(cfg, specs)), cmp_csv);
      return 0;
    }
    if (*sw) {
      const auto cfg = build_config(sw, sw_flags);
      emit(sweep_csv(sweep(cfg, m_list)), sw_csv);
      return 0;
    }
    if (*bl) {
      const auto cfg = build_config(bl, bl_flags);
      const auto r = resolve(cfg);
      const auto res = run_exhaustive_baseline(r.preset.field, r.preset.config, cfg.robots);
      nlohmann::json j{{"case", r.preset.config.name},
                       {"robots", cfg.robots},
                       {"termination", to_string(res.termination)},
                       {"finder", res.finder},
                       {"t_achieved", res.t_achieved},
                       {"tau", res.tau}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
