// Copyright 2026 The ptnm Authors
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


// ptnm: process-tensor non-Markovianity experiments.
//
//   ptnm fig2a --out results/
//   ptnm fig3 --paper-scale --gamma 0.5,1,2
//   ptnm reconstruct --config target.json --seed 7
//
// Exit codes: 0 ok, 1 unexpected failure, 2 configuration error,
// 3 file error, 4 refused dense materialization.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "ptnm/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kFile = 3, kGuard = 4 };

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
  std::optional<int> k;
  std::vector<double> gamma;
  std::optional<double> n;
  std::optional<double> delta;
  std::optional<int> env_dim;
  std::optional<int> kraus_rank;
  std::optional<std::string> model;
  std::optional<std::string> channel;
  std::vector<int> k_schedule;
  std::optional<int> restarts;
  std::optional<int> max_iter;
  std::optional<double> penalty;
  std::optional<int> j_max;
  std::optional<int> grid_points;
  std::optional<std::string> rho0_system;
  bool dense = false;
  std::optional<int> dense_limit;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON experiment config; flags override it");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--format", f.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--seed", f.seed, "Random seed");
  app->add_flag("--paper-scale", f.paper_scale, "k=51, N=5000, 5 restarts, 10000 iterations");
  app->add_option("--k", f.k, "Number of steps");
  app->add_option("--gamma", f.gamma, "Rate(s): Gamma for fig2, gamma for fig3/ruqdm")
      ->delimiter(',');
  app->add_option("--n", f.n, "Environment excitation fraction");
  app->add_option("--delta", f.delta, "Time step");
  app->add_option("--env-dim", f.env_dim, "Fitted environment dimension D");
  app->add_option("--kraus-rank", f.kraus_rank, "Fitted Kraus rank R");
  app->add_option("--model", f.model, "Model: xx, ruqdm, uqdm, random, file")
      ->check(CLI::IsMember({"xx", "ruqdm", "uqdm", "random", "file"}));
  app->add_option("--channel", f.channel, "Channel file (implies --model file)");
  app->add_option("--k-schedule", f.k_schedule, "Fit k schedule, e.g. 2,3,4")->delimiter(',');
  app->add_option("--restarts", f.restarts, "Fit restarts");
  app->add_option("--max-iter", f.max_iter, "Optimizer iterations per stage");
  app->add_option("--penalty", f.penalty, "Trace-preservation penalty weight");
  app->add_option("--j-max", f.j_max, "Largest step of the memory-complexity series");
  app->add_option("--grid-points", f.grid_points, "Position grid size N");
  app->add_option("--rho0-system", f.rho0_system, "Initial system state")
      ->check(CLI::IsMember({"pure", "mixed"}));
  app->add_flag("--dense", f.dense, "build: also write the dense process tensor");
  app->add_option("--dense-limit", f.dense_limit,
                  "Largest k written densely (default 4; larger values opt in)");
}

ptnm::ExperimentConfig make_config(const std::string& experiment, const Flags& f) {
  auto cfg = ptnm::ExperimentConfig::defaults();
  if (f.paper_scale) cfg.apply_paper_scale();
  if (!f.config.empty()) cfg = ptnm::merge_config(cfg, ptnm::io::read_json(f.config));
  cfg.experiment = experiment;
  if (f.out) cfg.output_dir = *f.out;
  if (f.format) cfg.output_format = *f.format;
  if (f.seed) cfg.seed = *f.seed;
  if (f.k) cfg.k = *f.k;
  if (!f.gamma.empty()) cfg.gammas = f.gamma;
  if (f.n) cfg.model.n = *f.n;
  if (f.delta) cfg.model.Delta = *f.delta;
  if (f.env_dim) cfg.fit.env_dim = *f.env_dim;
  if (f.kraus_rank) cfg.fit.rank = *f.kraus_rank;
  if (f.model) cfg.model.type = *f.model;
  if (f.channel) {
    cfg.model.type = "file";
    cfg.model.channel_file = *f.channel;
  }
  if (!f.k_schedule.empty()) cfg.fit.k_schedule = f.k_schedule;
  if (f.restarts) cfg.fit.restarts = *f.restarts;
  if (f.max_iter) cfg.fit.max_iter = *f.max_iter;
  if (f.penalty) cfg.penalty = *f.penalty;
  if (f.j_max) cfg.j_max = *f.j_max;
  if (f.grid_points) cfg.model.grid_points = *f.grid_points;
  if (f.rho0_system) cfg.model.rho0_system = *f.rho0_system;
  if (f.dense) cfg.dense = true;
  if (f.dense_limit) cfg.dense_limit = *f.dense_limit;
  return cfg;
}

int run(const std::string& experiment, const Flags& flags) {
  const auto cfg = make_config(experiment, flags);
  const auto t0 = std::chrono::steady_clock::now();
  const auto bundle = ptnm::run_experiment(cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& p : ptnm::write_bundle(bundle, cfg, wall)) std::cout << p.string() << '\n';
  for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
  // The fits allocate and free many small matrices; keep freed memory
  // instead of trimming the heap after every iteration.
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
  mallopt(M_TOP_PAD, 64 << 20);
#endif
  CLI::App app{"Process-tensor non-Markovianity measures and model reconstruction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ptnm::version());
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"fig2a", "Dissipative XX chain, n = 0: fitted and direct measures"},
      {"fig2b", "Dissipative XX chain, n = 0.5: fitted and direct measures"},
      {"fig3", "Memory complexity of the position-dephasing model"},
      {"reconstruct", "Fit a hidden Markovian model to a target process tensor"},
      {"measure", "Both measures directly on a model"},
      {"build", "Serialize a model channel with its diagnostics"}};
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    return run(experiment, flags);
  } catch (const ptnm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ptnm::FormatError& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return kFile;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return kFile;
  } catch (const ptnm::ResourceGuardError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
