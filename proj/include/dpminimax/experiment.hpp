// Copyright 2026 The dpminimax Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPMINIMAX_EXPERIMENT_HPP_
#define DPMINIMAX_EXPERIMENT_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpminimax/optimizers.hpp"
#include "dpminimax/problem.hpp"
#include "dpminimax/types.hpp"

namespace dpmm {

enum class ProblemKind { kQuadratic, kAuc, kWorstGroup, kTd };
enum class AlgorithmKind { kDpSgda, kPrivateDiff, kGdaReference };

struct QuadraticParams {
  int n = 100;
  int d1 = 4;
  int d2 = 2;
  double sin_weight = 1.0;
  double ridge = 0.5;
  double mu = 1.0;
  double diameter_y = 2.0;
  double x_box = 2.0;
  double coupling_spread = 0.25;
  std::uint64_t data_seed = 0;
  double x0_radius = 1.0;  // initial iterate: x0_radius * (1,...,1)/sqrt(d1)
};

struct AucParams {
  std::string csv_path;  // when set, overrides the synthetic generator
  int n = 1000;
  int dim = 10;
  double imbalance = 0.1;
  double separation = 3.0;
  std::uint64_t data_seed = 0;
  double lambda_alpha = 2.0;
  double x_box = 2.0;
};

struct WorstGroupParams {
  int groups = 2;
  int per_group = 100;
  int dim = 5;
  double shift = 1.0;
  std::uint64_t data_seed = 0;
  double x_box = 2.0;
};

struct TdParams {
  int states = 2;
  double discount = 0.9;
  int n = 200;
  double omega_radius = 10.0;
  std::uint64_t data_seed = 0;
};

struct SgdaParams {
  std::optional<int> iterations;
  std::optional<int> batch_size;
  std::optional<double> step_x, step_y, clip_x, clip_y;
};

struct PrivateDiffParams {
  std::optional<int> rounds, restart_interval, inner_iterations, batch_size;
  std::optional<double> step_x, clip_sga, clip_restart, clip_diff_slope,
      clip_diff_const;
};

struct GdaParams {
  std::optional<int> iterations;
  std::optional<double> step_x, step_y;
};

// Parsed experiment configuration. Exactly one of `budget` (noise calibrated
// from the closed forms) or `noise` (explicit scales) must be provided for
// private algorithms. `report` optionally names an (epsilon, delta) target
// for the accountant check when running with explicit noise.
struct ExperimentConfig {
  std::string name = "experiment";
  ProblemKind problem = ProblemKind::kQuadratic;
  AlgorithmKind algorithm = AlgorithmKind::kDpSgda;

  QuadraticParams quadratic;
  AucParams auc;
  WorstGroupParams worst_group;
  TdParams td;

  std::optional<PrivacyBudget> budget;
  std::optional<NoiseScalesSgda> noise_sgda;
  std::optional<NoiseScalesPrivateDiff> noise_privatediff;
  std::optional<PrivacyBudget> report;  // check-only target

  bool theory_schedule = false;
  SgdaParams sgda;
  PrivateDiffParams privatediff;
  GdaParams gda;

  std::vector<std::uint64_t> seeds = {0};
  std::string out_dir = ".";
  int metrics_stride = 1;
  bool store_iterates = true;
  bool wallclock = false;  // keeps trace CSVs byte-identical when off
  int lambda_max = kDefaultLambdaMax;
  int workers = 1;

  void validate() const;
};

// Strict key=value config parser ('#' comments). Unknown keys, duplicate
// keys, and malformed values raise ConfigError with the offending line.
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& source_name = "<config>");
ExperimentConfig load_config(const std::string& path);

struct SeedResult {
  std::uint64_t seed = 0;
  int selected_round = 0;
  double grad_phi_norm = std::numeric_limits<double>::quiet_NaN();
  double loss = std::numeric_limits<double>::quiet_NaN();
  double auc = std::numeric_limits<double>::quiet_NaN();
  double mspbe = std::numeric_limits<double>::quiet_NaN();
  double achieved_delta = std::numeric_limits<double>::quiet_NaN();
  bool budget_satisfied = false;
  double wallclock_ms = 0.0;
};

struct ResolvedRun {
  std::shared_ptr<const MinimaxProblem> problem;
  SgdaConfig sgda;                // populated for kDpSgda
  PrivateDiffConfig privatediff;  // populated for kPrivateDiff
  int gda_iterations = 0;
  double gda_step_x = 0.0, gda_step_y = 0.0;
  std::optional<PrivacyBudget> check_budget;  // budget or report target
  std::vector<std::string> warnings;
};

// Builds the problem and resolves the full hyperparameter set (theory
// schedule plus overrides, calibrated or explicit noise) without running.
ResolvedRun resolve_run(const ExperimentConfig& config);

struct ExperimentResult {
  std::vector<SeedResult> seeds;
  nlohmann::json summary;
  std::vector<std::string> trace_paths;
  std::string summary_path;
};

// Runs every seed, writes one trace CSV per seed plus a merged summary JSON
// under config.out_dir, and returns the in-memory results. seed_offset shifts
// every configured seed.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::uint64_t seed_offset = 0,
                                bool write_files = true);

// Per-seed metric value used for comparisons/sweeps: grad_phi_norm where an
// oracle exists, auc for AUC problems, mspbe for TD.
double primary_metric(const ExperimentConfig& config, const SeedResult& r);
std::string primary_metric_name(const ExperimentConfig& config);

struct CompareReport {
  std::vector<double> deltas;  // metric(A) - metric(B), one per seed
  double mean_delta = 0.0;
  int wins_a = 0, wins_b = 0, ties = 0;
  double p_two_sided = 1.0;
  double p_a_less = 1.0;     // one-sided: metric(A) < metric(B)
  double p_a_greater = 1.0;
  nlohmann::json to_json() const;
};

// Paired comparison across the shared seed list. Both configs must name the
// same problem family and seed list (and the same budget when both are in
// budget mode).
CompareReport compare_experiments(const ExperimentConfig& a,
                                  const ExperimentConfig& b,
                                  const std::string& metric,
                                  std::uint64_t seed_offset = 0);

enum class SweepAxis { kEpsilon, kN, kD };

struct SweepRow {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double metric = 0.0;
};

struct SweepResult {
  std::string axis;
  std::string metric_name;
  std::string algorithm;
  std::vector<SweepRow> rows;  // |values| x |seeds| rows
  std::string csv_path;
};

SweepResult emit_sweep(const ExperimentConfig& base, SweepAxis axis,
                       const std::vector<double>& values,
                       std::uint64_t seed_offset = 0, bool write_files = true);

// Minimal line chart (gradient norm vs round) for a completed run.
void write_svg_chart(const std::string& path, const OptimizerTrace& trace);

// 17-significant-digit formatting used for all CSV floats.
std::string format_csv_double(double v);

}  // namespace dpmm

#endif  // DPMINIMAX_EXPERIMENT_HPP_
