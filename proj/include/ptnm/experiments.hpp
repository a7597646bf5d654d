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


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ptnm/io.hpp"
#include "ptnm/measures.hpp"
#include "ptnm/process_tensor.hpp"
#include "ptnm/reconstruct.hpp"

namespace ptnm {

/// Library version string, "<semver>[+g<commit>]".
std::string version();

/// Which physical model an experiment uses.
struct ModelSpec {
  /// xx | ruqdm | uqdm | random | file
  std::string type = "xx";
  double J = 1.0;
  double Gamma = 0.0;  // XX-chain pumping rate
  /// Environment excitation; 0 except for fig2b (0.5) when unset.
  std::optional<double> n;
  /// Time step; 0.3 for the XX chain and 0.1 for the position model when unset.
  std::optional<double> Delta;
  double gamma = 1.0;  // dephasing rate (ruqdm, uqdm)
  double g = 1.0;
  int grid_points = 500;
  double grid_halfwidth = 100.0;
  /// "pure" (|0><0|) or "mixed" (I/2); experiment-dependent default.
  std::optional<std::string> rho0_system;
  /// Serialized channel with its initial state ("rho0"), for type = file.
  std::string channel_file;
  /// Shape of a random model (type = random).
  int env_dim = 2;
  int rank = 4;
};

struct ExperimentConfig {
  /// fig2a | fig2b | fig3 | reconstruct | measure | build
  std::string experiment;
  ModelSpec model;
  /// Swept rates: Gamma for fig2, gamma for fig3; the first entry sets the
  /// model rate of single-model experiments.
  std::vector<double> gammas;
  int k = 20;
  int j_max = 200;
  std::uint64_t seed = 1;
  FitConfig fit;
  /// Experiment-dependent default (fig2b uses a small trace penalty).
  std::optional<double> penalty;
  /// build: also write the dense process tensor (k <= 4).
  bool dense = false;
  /// Largest k materialized densely; raising it is an explicit opt-in.
  int dense_limit = kMaxMaterializeSteps;
  bool paper_scale = false;
  std::string output_dir = "out";
  std::string output_format = "csv";

  /// Desk-scale defaults (k = 20, N = 500, 2 restarts).
  static ExperimentConfig defaults();
  /// k = 51, N = 5000, 5 restarts, 10000 iterations.
  void apply_paper_scale();
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Overlays a JSON config onto `base`. Unknown keys and wrong types raise
/// ConfigError naming the field.
ExperimentConfig merge_config(ExperimentConfig base, const io::json& j);
io::json config_to_json(const ExperimentConfig& cfg);

/// A table emitted as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<io::json>> rows;

  std::string to_csv() const;
  io::json to_json() const;
};

struct ResultBundle {
  std::string experiment;
  std::vector<std::pair<std::string, Table>> tables;  // (stem, table)
  std::vector<std::pair<std::string, io::json>> documents;  // (stem, json)
  std::vector<std::string> warnings;
  io::json summary = io::json::object();
};

ResultBundle run_fig2(const ExperimentConfig& cfg);
ResultBundle run_fig3(const ExperimentConfig& cfg);
ResultBundle run_reconstruct(const ExperimentConfig& cfg);
ResultBundle run_measure(const ExperimentConfig& cfg);
ResultBundle run_build(const ExperimentConfig& cfg);
ResultBundle run_experiment(const ExperimentConfig& cfg);

/// Writes every table (with a metadata sidecar) and document into
/// cfg.output_dir, plus <experiment>_run.json with the config echo,
/// warnings and wall time. Returns the written paths.
std::vector<std::filesystem::path> write_bundle(const ResultBundle& bundle,
                                                const ExperimentConfig& cfg,
                                                double wall_seconds);

/// Series table of both measures: j, osee, ee, boundary_flag (osee is
/// empty at j = k).
Table measure_table(const ProcessTensorMPDO& pt, const EnvStateOptions& env = {});

}  // namespace ptnm
