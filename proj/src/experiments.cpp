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


#include "ptnm/experiments.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "ptnm/measures.hpp"
#include "ptnm/models.hpp"

#ifndef PTNM_VERSION
#define PTNM_VERSION "0.0.0"
#endif

namespace ptnm {

using io::json;

std::string version() { return PTNM_VERSION; }

//------------------------------------------------------------------------------
// configuration
//------------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.fit.restarts = 2;
  return c;
}

void ExperimentConfig::apply_paper_scale() {
  paper_scale = true;
  k = 51;
  model.grid_points = 5000;
  fit.restarts = 5;
  fit.max_iter = 10000;
}

namespace {

const std::set<std::string> kExperiments = {"fig2a", "fig2b", "fig3",
                                            "reconstruct", "measure", "build"};
const std::set<std::string> kModelTypes = {"xx", "ruqdm", "uqdm", "random", "file"};

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

bool is_fig2(const ExperimentConfig& c) {
  return c.experiment == "fig2a" || c.experiment == "fig2b";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!kExperiments.contains(experiment)) {
    config_error("experiment", "unknown experiment '" + experiment + "'");
  }
  if (!kModelTypes.contains(model.type)) {
    config_error("model.type", "unknown model type '" + model.type + "'");
  }
  if (output_format != "csv" && output_format != "json") {
    config_error("format", "must be csv or json");
  }
  if (k < 1) config_error("k", "must be >= 1");
  if (is_fig2(*this) && k < 10) config_error("k", "fig2 needs k >= 10");
  if (j_max < 1) config_error("j_max", "must be >= 1");
  if (dense_limit < 1) config_error("dense_limit", "must be >= 1");
  if (model.Delta && !(*model.Delta > 0.0)) config_error("model.Delta", "must be > 0");
  if (model.n && !(*model.n >= 0.0 && *model.n <= 1.0)) {
    config_error("model.n", "must lie in [0, 1]");
  }
  if (!(model.Gamma >= 0.0)) config_error("model.Gamma", "must be >= 0");
  if (!(model.gamma >= 0.0)) config_error("model.gamma", "must be >= 0");
  if (model.grid_points < 2) config_error("model.grid_points", "must be >= 2");
  if (!(model.grid_halfwidth > 0.0)) config_error("model.grid_halfwidth", "must be > 0");
  if (model.rho0_system && *model.rho0_system != "pure" && *model.rho0_system != "mixed") {
    config_error("model.rho0_system", "must be pure or mixed");
  }
  if (model.type == "file" && model.channel_file.empty() &&
      experiment != "fig2a" && experiment != "fig2b" && experiment != "fig3") {
    config_error("model.channel_file", "required for model type file");
  }
  if (model.env_dim < 1) config_error("model.env_dim", "must be >= 1");
  if (model.rank < 1) config_error("model.rank", "must be >= 1");
  for (double g : gammas) {
    if (!(g >= 0.0)) config_error("gamma", "rates must be >= 0");
  }
  if (experiment == "fig3" && !gammas.empty()) {
    for (double g : gammas) {
      if (!(g > 0.0)) config_error("gamma", "fig3 rates must be > 0");
    }
  }
  if (fit.env_dim < 1) config_error("fit.env_dim", "must be >= 1");
  if (fit.rank < 1) config_error("fit.kraus_rank", "must be >= 1");
  if (fit.restarts < 1) config_error("fit.restarts", "must be >= 1");
  if (fit.max_iter < 1) config_error("fit.max_iter", "must be >= 1");
  if (penalty && !(*penalty >= 0.0)) config_error("fit.penalty", "must be >= 0");
  const bool fits = is_fig2(*this) || experiment == "reconstruct";
  if (fits) {
    if (fit.k_schedule.empty()) config_error("fit.k_schedule", "must not be empty");
    for (std::size_t i = 0; i < fit.k_schedule.size(); ++i) {
      if (fit.k_schedule[i] < 1 || (i > 0 && fit.k_schedule[i] <= fit.k_schedule[i - 1])) {
        config_error("fit.k_schedule", "must be positive and strictly increasing");
      }
    }
    if (fit.k_schedule.back() > k) config_error("fit.k_schedule", "exceeds k");
  }
}

namespace {

double get_double(const json& v, const std::string& field) {
  if (!v.is_number()) config_error(field, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) config_error(field, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) config_error(field, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) config_error(field, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_doubles(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) config_error(field, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_double(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void merge_model(ModelSpec& m, const json& j) {
  if (!j.is_object()) config_error("model", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string f = "model." + key;
    if (key == "type") m.type = get_string(v, f);
    else if (key == "J") m.J = get_double(v, f);
    else if (key == "Gamma") m.Gamma = get_double(v, f);
    else if (key == "n") m.n = get_double(v, f);
    else if (key == "Delta") m.Delta = get_double(v, f);
    else if (key == "gamma") m.gamma = get_double(v, f);
    else if (key == "g") m.g = get_double(v, f);
    else if (key == "grid_points") m.grid_points = get_int(v, f);
    else if (key == "grid_halfwidth") m.grid_halfwidth = get_double(v, f);
    else if (key == "rho0_system") m.rho0_system = get_string(v, f);
    else if (key == "channel_file") m.channel_file = get_string(v, f);
    else if (key == "env_dim") m.env_dim = get_int(v, f);
    else if (key == "rank") m.rank = get_int(v, f);
    else config_error(f, "unknown field");
  }
}

void merge_fit(ExperimentConfig& c, const json& j) {
  if (!j.is_object()) config_error("fit", "expected an object");
  for (const auto& [key, v] : j.items()) {
    const std::string f = "fit." + key;
    if (key == "env_dim") c.fit.env_dim = get_int(v, f);
    else if (key == "kraus_rank") c.fit.rank = get_int(v, f);
    else if (key == "k_schedule") {
      if (!v.is_array()) config_error(f, "expected an array of integers");
      c.fit.k_schedule.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        c.fit.k_schedule.push_back(get_int(v[i], f + "[" + std::to_string(i) + "]"));
      }
    } else if (key == "restarts") c.fit.restarts = get_int(v, f);
    else if (key == "max_iter") c.fit.max_iter = get_int(v, f);
    else if (key == "gtol") c.fit.gtol = get_double(v, f);
    else if (key == "ftol") c.fit.ftol = get_double(v, f);
    else if (key == "stall_window") c.fit.stall_window = get_int(v, f);
    else if (key == "stall_tol") c.fit.stall_tol = get_double(v, f);
    else if (key == "first_stage_attempts") c.fit.first_stage_attempts = get_int(v, f);
    else if (key == "penalty") c.penalty = get_double(v, f);
    else config_error(f, "unknown field");
  }
}

}  // namespace

ExperimentConfig merge_config(ExperimentConfig c, const json& j) {
  if (!j.is_object()) config_error("<root>", "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "experiment") c.experiment = get_string(v, key);
    else if (key == "model") merge_model(c.model, v);
    else if (key == "fit") merge_fit(c, v);
    else if (key == "gamma") c.gammas = get_doubles(v, key);
    else if (key == "k") c.k = get_int(v, key);
    else if (key == "j_max") c.j_max = get_int(v, key);
    else if (key == "seed") {
      if (!v.is_number_unsigned()) config_error(key, "expected a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "dense") c.dense = get_bool(v, key);
    else if (key == "dense_limit") c.dense_limit = get_int(v, key);
    else if (key == "paper_scale") {
      if (get_bool(v, key) && !c.paper_scale) c.apply_paper_scale();
    } else if (key == "output_dir") c.output_dir = get_string(v, key);
    else if (key == "format") c.output_format = get_string(v, key);
    else config_error(key, "unknown field");
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json model = {{"type", c.model.type},
                {"J", c.model.J},
                {"Gamma", c.model.Gamma},
                {"gamma", c.model.gamma},
                {"g", c.model.g},
                {"grid_points", c.model.grid_points},
                {"grid_halfwidth", c.model.grid_halfwidth},
                {"env_dim", c.model.env_dim},
                {"rank", c.model.rank}};
  if (c.model.n) model["n"] = *c.model.n;
  if (c.model.Delta) model["Delta"] = *c.model.Delta;
  if (c.model.rho0_system) model["rho0_system"] = *c.model.rho0_system;
  if (!c.model.channel_file.empty()) model["channel_file"] = c.model.channel_file;
  json fit = {{"env_dim", c.fit.env_dim},
              {"kraus_rank", c.fit.rank},
              {"k_schedule", c.fit.k_schedule},
              {"restarts", c.fit.restarts},
              {"max_iter", c.fit.max_iter},
              {"gtol", c.fit.gtol},
              {"ftol", c.fit.ftol},
              {"stall_window", c.fit.stall_window},
              {"stall_tol", c.fit.stall_tol},
              {"first_stage_attempts", c.fit.first_stage_attempts}};
  if (c.penalty) fit["penalty"] = *c.penalty;
  json out = {{"experiment", c.experiment},
              {"model", std::move(model)},
              {"fit", std::move(fit)},
              {"k", c.k},
              {"j_max", c.j_max},
              {"seed", c.seed},
              {"dense", c.dense},
              {"dense_limit", c.dense_limit},
              {"paper_scale", c.paper_scale},
              {"output_dir", c.output_dir},
              {"format", c.output_format}};
  if (!c.gammas.empty()) out["gamma"] = c.gammas;
  return out;
}

//------------------------------------------------------------------------------
// tables
//------------------------------------------------------------------------------

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      const json& v = row[c];
      if (v.is_null()) continue;
      if (v.is_boolean()) out << (v.get<bool>() ? 1 : 0);
      else if (v.is_number_integer()) out << v.dump();
      else if (v.is_number()) out << io::format_number(v.get<double>());
      else out << v.get<std::string>();
    }
    out << '\n';
  }
  return out.str();
}

json Table::to_json() const { return {{"columns", columns}, {"rows", rows}}; }

namespace {

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return io::round_sig(x);
}

std::string tag(double x) { return io::format_number(x); }

double delta_for(const ExperimentConfig& c) {
  if (c.model.Delta) return *c.model.Delta;
  return (c.experiment == "fig3" || c.model.type == "uqdm") ? 0.1 : 0.3;
}

CMatrix system_state(const ExperimentConfig& c) {
  const std::string kind = c.model.rho0_system.value_or(is_fig2(c) ? "pure" : "mixed");
  if (kind == "mixed") return 0.5 * CMatrix::Identity(2, 2);
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  return p;
}

XXChainParams xx_params(const ExperimentConfig& c, double Gamma, double n) {
  XXChainParams p;
  p.J = c.model.J;
  p.Gamma = Gamma;
  p.n = n;
  p.Delta = delta_for(c);
  p.rho0_system = system_state(c);
  return p;
}

struct BuiltModel {
  KrausChannel kraus;
  ChannelTensor channel;
  CMatrix rho0;
  json params = json::object();
};

BuiltModel build_model(const ExperimentConfig& c) {
  const double rate_xx = c.gammas.empty() ? c.model.Gamma : c.gammas.front();
  const double rate_dp = c.gammas.empty() ? c.model.gamma : c.gammas.front();
  BuiltModel m;
  const auto& type = c.model.type;
  if (type == "xx") {
    const auto p = xx_params(c, rate_xx, c.model.n.value_or(0.0));
    auto model = xx_chain_model(p);
    m.kraus = std::move(model.kraus);
    m.channel = std::move(model.channel);
    m.rho0 = std::move(model.rho0);
    m.params = {{"type", "xx"}, {"J", p.J}, {"Gamma", p.Gamma}, {"n", p.n}, {"Delta", p.Delta}};
  } else if (type == "ruqdm") {
    const double dt = delta_for(c);
    m.channel = ruqdm_channel(rate_dp, dt);
    m.kraus = superop_to_kraus(m.channel.superoperator(), 2, 1);
    m.rho0 = system_state(c);
    m.params = {{"type", "ruqdm"}, {"gamma", rate_dp}, {"Delta", dt}};
  } else if (type == "random") {
    // Separate stream from the fit's starting points, which also use seed.
    std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto a = random_valid_ansatz(2, c.model.env_dim, c.model.rank, rng);
    m.kraus = KrausChannel{a.kraus_operators(), 2, c.model.env_dim};
    m.channel = ansatz_channel(a);
    m.rho0 = a.psi0 * a.psi0.adjoint();
    m.params = {{"type", "random"}, {"env_dim", c.model.env_dim},
                {"rank", c.model.rank}, {"seed", c.seed}};
  } else if (type == "file") {
    const auto& path = c.model.channel_file;
    const json j = io::read_json(path);
    try {
      m.kraus = io::channel_from_json(j);
      if (!j.contains("rho0")) throw FormatError("rho0: missing field");
      m.rho0 = io::matrix_from_json(j["rho0"], "rho0");
      const auto n = static_cast<Eigen::Index>(m.kraus.d * m.kraus.env_dim);
      if (m.rho0.rows() != n || m.rho0.cols() != n) {
        throw FormatError("rho0: expected a (d env_dim) x (d env_dim) matrix");
      }
      try {
        m.kraus.validate();
      } catch (const InvariantError& e) {
        throw FormatError(std::string("kraus: ") + e.what());
      }
    } catch (const FormatError& e) {
      throw FormatError(path + ": " + e.what());
    }
    m.channel = kraus_to_w(m.kraus);
    m.params = {{"type", "file"}, {"channel_file", path}};
  } else {
    config_error("model.type", "'" + type +
                                   "' has no finite-dimensional process tensor; use fig3");
  }
  return m;
}

EnvStateOptions fitted_env_options() {
  // Fitted channels are trace preserving only up to their normalization
  // residual, which the fit report records; the state is renormalized.
  EnvStateOptions o;
  o.trace_tol = std::numeric_limits<double>::infinity();
  return o;
}

FitConfig fit_config(const ExperimentConfig& c, double default_penalty) {
  FitConfig f = c.fit;
  f.seed = c.seed;
  f.penalty = c.penalty.value_or(default_penalty);
  return f;
}

json fit_document(const FitResult& r, json params) {
  return {{"model", std::move(params)},
          {"report", io::report_to_json(r.report)},
          {"ansatz", io::ansatz_to_json(r.ansatz)}};
}

std::string fit_warning(const std::string& what, const FitReport& r, double ftol) {
  return what + ": fit did not reach loss " + io::format_number(ftol) +
         " (final loss " + io::format_number(r.final_loss) + ")";
}

}  // namespace

Table measure_table(const ProcessTensorMPDO& pt, const EnvStateOptions& env) {
  SeriesOptions opts;
  opts.env = env;
  const auto o = measure_series(pt, MeasureKind::kOsee, opts);
  const auto e = measure_series(pt, MeasureKind::kEe, opts);
  const int k = pt.k();
  const int margin = k / 5;
  Table t;
  t.columns = {"j", "osee", "ee", "boundary_flag"};
  for (std::size_t i = 0; i < e.steps.size(); ++i) {
    const int j = e.steps[i];
    t.rows.push_back({j, j < k ? num(o.values[i]) : json(nullptr), num(e.values[i]),
                      j < k ? json(static_cast<bool>(o.boundary_flagged[i]))
                            : json(j > k - margin)});
  }
  return t;
}

//------------------------------------------------------------------------------
// experiments
//------------------------------------------------------------------------------

ResultBundle run_fig2(const ExperimentConfig& c) {
  const bool b = c.experiment == "fig2b";
  const std::vector<double> rates =
      !c.gammas.empty() ? c.gammas
                        : (b ? std::vector<double>{5.0, 10.0, 20.0}
                             : std::vector<double>{0.0, 1.0, 5.0});
  const double n = c.model.n.value_or(b ? 0.5 : 0.0);
  const FitConfig fc = fit_config(c, b ? 1e-2 : 0.0);
  ResultBundle out;
  out.experiment = c.experiment;
  out.summary["curves"] = json::array();
  for (double Gamma : rates) {
    const auto p = xx_params(c, Gamma, n);
    const auto model = xx_chain_model(p);
    const auto target = ProcessTensorMPDO::build(model.channel, model.rho0, c.k);
    const auto result = fit(target, fc);
    const auto fitted = predict(result.ansatz, c.k);

    Table t = measure_table(fitted, fitted_env_options());
    const Table direct = measure_table(target);
    t.columns.insert(t.columns.end(), {"osee_direct", "ee_direct"});
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      t.rows[i].push_back(direct.rows[i][1]);
      t.rows[i].push_back(direct.rows[i][2]);
    }
    const std::string stem = c.experiment + "_Gamma" + tag(Gamma);
    out.tables.emplace_back(stem, std::move(t));
    json params = {{"type", "xx"}, {"J", p.J}, {"Gamma", Gamma}, {"n", n}, {"Delta", p.Delta}};
    out.documents.emplace_back(stem + "_fit", fit_document(result, params));
    out.summary["curves"].push_back(
        {{"Gamma", Gamma},
         {"n", n},
         {"final_loss", num(result.report.final_loss)},
         {"converged", result.report.converged},
         {"normalization_residual", num(result.report.normalization_residual)}});
    if (!result.report.converged) {
      out.warnings.push_back(fit_warning(stem, result.report, fc.ftol));
    }
  }
  out.summary["penalty"] = fc.penalty;
  return out;
}

ResultBundle run_fig3(const ExperimentConfig& c) {
  const bool chosen = c.gammas.empty();
  const std::vector<double> rates = chosen ? std::vector<double>{0.5, 1.0, 2.0} : c.gammas;
  ResultBundle out;
  out.experiment = "fig3";
  Table t;
  t.columns = {"gamma", "j", "C_j"};
  for (double gamma : rates) {
    UQDMParams p;
    p.gamma = gamma;
    p.g = c.model.g;
    p.Delta = delta_for(c);
    p.grid_points = c.model.grid_points;
    p.grid_halfwidth = c.model.grid_halfwidth;
    const auto series = uqdm_memory_series(p, c.j_max);
    for (std::size_t i = 0; i < series.steps.size(); ++i) {
      t.rows.push_back({num(gamma), series.steps[i], num(series.values[i])});
    }
  }
  out.tables.emplace_back("fig3", std::move(t));
  // The swept rates are not values taken from any reference run.
  out.summary["gamma_values_implementation_chosen"] = chosen;
  out.summary["gamma"] = rates;
  return out;
}

ResultBundle run_measure(const ExperimentConfig& c) {
  const auto m = build_model(c);
  const auto pt = ProcessTensorMPDO::build(m.channel, m.rho0, c.k);
  ResultBundle out;
  out.experiment = "measure";
  out.tables.emplace_back("measure", measure_table(pt));
  out.summary["model"] = m.params;
  return out;
}

ResultBundle run_reconstruct(const ExperimentConfig& c) {
  const auto m = build_model(c);
  const auto target = ProcessTensorMPDO::build(m.channel, m.rho0, c.k);
  const FitConfig fc = fit_config(c, 0.0);
  const auto result = fit(target, fc);
  ResultBundle out;
  out.experiment = "reconstruct";
  out.documents.emplace_back("reconstruct_ansatz", io::ansatz_to_json(result.ansatz));
  out.documents.emplace_back("reconstruct_report", io::report_to_json(result.report));
  out.tables.emplace_back("reconstruct_series",
                          measure_table(predict(result.ansatz, c.k), fitted_env_options()));
  out.summary["model"] = m.params;
  out.summary["final_loss"] = num(result.report.final_loss);
  out.summary["converged"] = result.report.converged;
  if (!result.report.converged) {
    out.warnings.push_back(fit_warning("reconstruct", result.report, fc.ftol));
  }
  return out;
}

ResultBundle run_build(const ExperimentConfig& c) {
  const auto m = build_model(c);
  const auto pt = ProcessTensorMPDO::build(m.channel, m.rho0, c.k);
  ResultBundle out;
  out.experiment = "build";
  json channel = io::channel_to_json(m.kraus);
  channel["rho0"] = io::matrix_to_json(m.rho0);
  out.documents.emplace_back("build_channel", std::move(channel));

  const auto cptp = check_cptp(m.channel);
  json diag = {{"model", m.params},
               {"k", c.k},
               {"tp_residual", num(cptp.tp_residual)},
               {"cp_min_eigenvalue", num(cptp.cp_min_eigenvalue)},
               {"cptp", cptp.pass}};
  const int kc = std::min(c.k, kMaxMaterializeSteps);
  if (kc >= 2) {
    const auto cont = check_containment(pt.prefix(kc));
    diag["containment_k"] = kc;
    diag["containment_residual"] = num(cont.residual);
    diag["containment"] = cont.pass;
  }
  out.documents.emplace_back("build_diagnostics", std::move(diag));
  if (c.dense) {
    const auto choi = materialize(pt, c.dense_limit);
    std::vector<std::string> rows;
    for (int s = 0; s <= c.k; ++s) {
      rows.push_back(choi_label('o', s, false));
      if (s < c.k) rows.push_back(choi_label('i', s, false));
    }
    out.documents.emplace_back("build_choi",
                               json{{"row_labels", rows}, {"matrix", io::matrix_to_json(choi.matrix())}});
  }
  return out;
}

ResultBundle run_experiment(const ExperimentConfig& c) {
  c.validate();
  if (is_fig2(c)) return run_fig2(c);
  if (c.experiment == "fig3") return run_fig3(c);
  if (c.experiment == "reconstruct") return run_reconstruct(c);
  if (c.experiment == "measure") return run_measure(c);
  return run_build(c);
}

std::vector<std::filesystem::path> write_bundle(const ResultBundle& bundle,
                                                const ExperimentConfig& c,
                                                double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  const json cfg = config_to_json(c);
  // Where and how results are written does not change the numbers.
  json hashed = cfg;
  hashed.erase("output_dir");
  hashed.erase("format");
  const std::string hash = io::hex64(io::fnv1a(hashed.dump()));
  std::vector<fs::path> written;
  json files = json::array();
  const bool as_json = c.output_format == "json";
  for (const auto& [stem, table] : bundle.tables) {
    const fs::path path = dir / (stem + (as_json ? ".json" : ".csv"));
    io::write_atomic(path, as_json ? table.to_json().dump(2) + "\n" : table.to_csv());
    const json meta = {{"library", "ptnm"},
                       {"version", version()},
                       {"experiment", bundle.experiment},
                       {"config_hash", hash},
                       {"seed", c.seed},
                       {"file", path.filename().string()},
                       {"columns", table.columns},
                       {"rows", table.rows.size()}};
    const fs::path meta_path = dir / (stem + ".meta.json");
    io::write_atomic(meta_path, meta.dump(2) + "\n");
    written.push_back(path);
    written.push_back(meta_path);
    files.push_back(path.filename().string());
  }
  for (const auto& [stem, doc] : bundle.documents) {
    const fs::path path = dir / (stem + ".json");
    io::write_atomic(path, doc.dump(2) + "\n");
    written.push_back(path);
    files.push_back(path.filename().string());
  }
  const json run = {{"library", "ptnm"},
                    {"version", version()},
                    {"experiment", bundle.experiment},
                    {"config", cfg},
                    {"config_hash", hash},
                    {"files", files},
                    {"warnings", bundle.warnings},
                    {"summary", bundle.summary},
                    {"wall_time_seconds", io::round_sig(wall_seconds)}};
  const fs::path run_path = dir / (bundle.experiment + "_run.json");
  io::write_atomic(run_path, run.dump(2) + "\n");
  written.push_back(run_path);
  return written;
}

}  // namespace ptnm
