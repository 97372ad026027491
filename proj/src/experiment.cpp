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

#include "dpminimax/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "dpminimax/accountant.hpp"
#include "dpminimax/calibration.hpp"
#include "dpminimax/problems/auc.hpp"
#include "dpminimax/problems/quadratic.hpp"
#include "dpminimax/problems/td.hpp"
#include "dpminimax/problems/worst_group.hpp"
#include "dpminimax/schedule.hpp"

namespace dpmm {

namespace fs = std::filesystem;

std::string format_csv_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::shared_ptr<const MinimaxProblem> build_problem(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::kQuadratic: {
      const auto& q = cfg.quadratic;
      Rng rng(Rng::mix(q.data_seed, 0xda7aULL));
      return make_quadratic(random_quadratic_spec(
          q.n, q.d1, q.d2, q.sin_weight, q.ridge, q.mu, q.diameter_y, q.x_box,
          q.coupling_spread, rng));
    }
    case ProblemKind::kAuc: {
      const auto& a = cfg.auc;
      AucDataset data;
      if (!a.csv_path.empty()) {
        data = load_auc_csv(a.csv_path);
      } else {
        Rng rng(Rng::mix(a.data_seed, 0xda7aULL));
        data = synthetic_auc(a.n, a.dim, a.imbalance, a.separation, rng);
      }
      return make_auc(std::move(data), a.lambda_alpha, a.x_box);
    }
    case ProblemKind::kWorstGroup: {
      const auto& w = cfg.worst_group;
      Rng rng(Rng::mix(w.data_seed, 0xda7aULL));
      return make_worst_group(
          synthetic_worst_group(w.groups, w.per_group, w.dim, w.shift, rng));
    }
    case ProblemKind::kTd: {
      const auto& t = cfg.td;
      TabularMdpSpec spec;
      spec.num_states = t.states;
      spec.num_actions = 1;
      spec.discount = t.discount;
      spec.omega_radius = t.omega_radius;
      // Aperiodic random-walk chain with one-hot features.
      Matrix p = Matrix::Zero(t.states, t.states);
      for (int s = 0; s < t.states; ++s) {
        p(s, s) = 0.5;
        p(s, (s + 1) % t.states) = 0.3;
        p(s, (s + t.states - 1) % t.states) = 0.2;
      }
      spec.transition = {p};
      spec.policy = Matrix::Ones(t.states, 1);
      spec.reward = Matrix::Zero(t.states, 1);
      for (int s = 0; s < t.states; ++s) {
        spec.reward(s, 0) = std::sin(1.0 + s);
      }
      spec.features = Matrix::Identity(t.states, t.states);
      Rng rng(Rng::mix(t.data_seed, 0xda7aULL));
      return make_td(std::move(spec), t.n, rng);
    }
  }
  throw ConfigError("unknown problem kind");
}

Vector initial_x(const ExperimentConfig& cfg, const MinimaxProblem& problem) {
  Vector x0 = Vector::Zero(problem.dim_x());
  if (cfg.problem == ProblemKind::kQuadratic) {
    x0.setConstant(cfg.quadratic.x0_radius /
                   std::sqrt(static_cast<double>(problem.dim_x())));
  }
  return x0;
}

int require_int(const std::optional<int>& v, const std::string& cfg_name,
                const char* key) {
  if (!v) {
    throw ConfigError(cfg_name + ": explicit schedule needs " + key);
  }
  return *v;
}

double require_double(const std::optional<double>& v, const std::string& cfg_name,
                      const char* key) {
  if (!v) {
    throw ConfigError(cfg_name + ": explicit schedule needs " + key);
  }
  return *v;
}

}  // namespace

ResolvedRun resolve_run(const ExperimentConfig& cfg) {
  cfg.validate();
  ResolvedRun run;
  run.problem = build_problem(cfg);
  const MinimaxProblem& problem = *run.problem;
  const int n = problem.sample_count();
  const int d = std::max(problem.dim_x(), problem.dim_y());
  const Vector x0 = initial_x(cfg, problem);
  const Vector y0 = problem.project_y(Vector::Zero(problem.dim_y()));

  if (cfg.budget) {
    run.check_budget = cfg.budget;
  } else if (cfg.report) {
    run.check_budget = cfg.report;
  }

  switch (cfg.algorithm) {
    case AlgorithmKind::kGdaReference: {
      run.gda_iterations = cfg.gda.iterations.value_or(100);
      const double l = problem.constants().smoothness();
      run.gda_step_x = cfg.gda.step_x.value_or(
          1.0 / (16.0 * std::pow(problem.constants().condition_number() + 1.0, 2) * l));
      run.gda_step_y = cfg.gda.step_y.value_or(1.0 / l);
      break;
    }
    case AlgorithmKind::kDpSgda: {
      SgdaConfig c;
      if (cfg.theory_schedule) {
        const SgdaSchedule s = suggest_sgda_schedule(
            problem.constants(), n, d, *cfg.budget, cfg.sgda.iterations);
        c.iterations = s.iterations;
        c.batch_size = cfg.sgda.batch_size.value_or(s.batch_size);
        c.step_x = cfg.sgda.step_x.value_or(s.step_x);
        c.step_y = cfg.sgda.step_y.value_or(s.step_y);
        c.clip_x = cfg.sgda.clip_x.value_or(s.clip_x);
        c.clip_y = cfg.sgda.clip_y.value_or(s.clip_y);
      } else {
        c.iterations = require_int(cfg.sgda.iterations, cfg.name, "sgda.T");
        c.batch_size = require_int(cfg.sgda.batch_size, cfg.name, "sgda.m");
        c.step_x = require_double(cfg.sgda.step_x, cfg.name, "sgda.eta_x");
        c.step_y = require_double(cfg.sgda.step_y, cfg.name, "sgda.eta_y");
        c.clip_x = require_double(cfg.sgda.clip_x, cfg.name, "sgda.C1");
        c.clip_y = require_double(cfg.sgda.clip_y, cfg.name, "sgda.C2");
      }
      if (cfg.budget) {
        const auto scales = calibrate_sgda(*cfg.budget, n, c.iterations, c.clip_x,
                                           c.clip_y, &run.warnings);
        c.sigma_x = scales.sigma_x;
        c.sigma_y = scales.sigma_y;
      } else {
        c.sigma_x = cfg.noise_sgda->sigma_x;
        c.sigma_y = cfg.noise_sgda->sigma_y;
      }
      c.batch_size = std::min(c.batch_size, n);
      c.x0 = x0;
      c.y0 = y0;
      c.metrics_stride = cfg.metrics_stride;
      c.store_iterates = cfg.store_iterates;
      c.validate();
      run.sgda = std::move(c);
      break;
    }
    case AlgorithmKind::kPrivateDiff: {
      PrivateDiffConfig c;
      if (cfg.theory_schedule) {
        const PrivateDiffSchedule s = suggest_privatediff_schedule(
            problem.constants(), n, d, *cfg.budget, cfg.privatediff.rounds,
            cfg.privatediff.inner_iterations);
        c.rounds = s.rounds;
        c.restart_interval =
            cfg.privatediff.restart_interval.value_or(s.restart_interval);
        c.inner_iterations = s.inner_iterations;
        c.batch_size = cfg.privatediff.batch_size.value_or(s.batch_size);
        c.step_x = cfg.privatediff.step_x.value_or(s.step_x);
        c.clip_sga = cfg.privatediff.clip_sga.value_or(s.clip_sga);
        c.clip_restart = cfg.privatediff.clip_restart.value_or(s.clip_restart);
        c.clip_diff_slope =
            cfg.privatediff.clip_diff_slope.value_or(s.clip_diff_slope);
        c.clip_diff_const =
            cfg.privatediff.clip_diff_const.value_or(s.clip_diff_const);
      } else {
        c.rounds = require_int(cfg.privatediff.rounds, cfg.name, "pd.R");
        c.restart_interval =
            require_int(cfg.privatediff.restart_interval, cfg.name, "pd.T");
        c.inner_iterations =
            require_int(cfg.privatediff.inner_iterations, cfg.name, "pd.T2");
        c.batch_size = require_int(cfg.privatediff.batch_size, cfg.name, "pd.m");
        c.step_x = require_double(cfg.privatediff.step_x, cfg.name, "pd.eta_x");
        c.clip_sga = require_double(cfg.privatediff.clip_sga, cfg.name, "pd.C0");
        c.clip_restart =
            require_double(cfg.privatediff.clip_restart, cfg.name, "pd.C1");
        c.clip_diff_slope =
            require_double(cfg.privatediff.clip_diff_slope, cfg.name, "pd.C2");
        c.clip_diff_const =
            require_double(cfg.privatediff.clip_diff_const, cfg.name, "pd.C3");
      }
      if (cfg.budget) {
        const auto& pc = problem.constants();
        const auto scales = calibrate_privatediff(
            *cfg.budget, n, c.rounds, c.restart_interval, c.clip_sga,
            pc.strong_concavity, pc.smooth_y, pc.loss_bound, &run.warnings);
        c.sigma_x1 = scales.sigma_x1;
        c.sigma_x2 = scales.sigma_x2;
        c.sigma_y = scales.sigma_y;
      } else {
        c.sigma_x1 = cfg.noise_privatediff->sigma_x1;
        c.sigma_x2 = cfg.noise_privatediff->sigma_x2;
        c.sigma_y = cfg.noise_privatediff->sigma_y;
      }
      c.batch_size = std::min(c.batch_size, n);
      c.x0 = x0;
      c.y0 = y0;
      c.metrics_stride = cfg.metrics_stride;
      c.store_iterates = cfg.store_iterates;
      c.validate();
      run.privatediff = std::move(c);
      break;
    }
  }
  return run;
}

namespace {

OptimizerOutput execute(const ExperimentConfig& cfg, const ResolvedRun& run,
                        std::uint64_t seed) {
  switch (cfg.algorithm) {
    case AlgorithmKind::kDpSgda: {
      SgdaConfig c = run.sgda;
      c.seed = seed;
      return dp_sgda(*run.problem, c);
    }
    case AlgorithmKind::kPrivateDiff: {
      PrivateDiffConfig c = run.privatediff;
      c.seed = seed;
      return privatediff_minimax(*run.problem, c);
    }
    case AlgorithmKind::kGdaReference:
      return gda_reference(*run.problem, run.gda_iterations, run.gda_step_x,
                           run.gda_step_y, initial_x(cfg, *run.problem),
                           run.problem->project_y(Vector::Zero(run.problem->dim_y())),
                           cfg.metrics_stride);
  }
  throw ConfigError("unknown algorithm kind");
}

SeedResult evaluate_seed(const ExperimentConfig& cfg, const ResolvedRun& run,
                         std::uint64_t seed, const OptimizerOutput& out) {
  SeedResult r;
  r.seed = seed;
  r.selected_round = out.selected_round;
  const MinimaxProblem& problem = *run.problem;
  if (problem.has_phi_oracle()) {
    try {
      r.grad_phi_norm = problem.phi(out.x_priv).grad.norm();
    } catch (const std::exception&) {
      // no closed form at this point
    }
  }
  r.loss = problem.averaged_loss(out.x_priv, out.y_priv);
  if (cfg.problem == ProblemKind::kAuc) {
    const auto* auc = dynamic_cast<const AucProblem*>(&problem);
    const auto scores = auc->scores(out.x_priv);
    r.auc = auc_score(scores, auc->data().labels);
  }
  if (cfg.problem == ProblemKind::kTd) {
    const auto* td = dynamic_cast<const TdProblem*>(&problem);
    r.mspbe = td->empirical_mspbe(out.x_priv);
  }
  return r;
}

void write_trace_csv(const std::string& path, const OptimizerTrace& trace,
                     bool wallclock) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot write trace file " + path);
  }
  file << "round,grad_phi_norm,loss,noise_x_norm,c2r,wallclock_ms\n";
  for (const auto& rec : trace.records) {
    file << rec.round << ',' << format_csv_double(rec.grad_phi_norm) << ','
         << format_csv_double(rec.loss) << ','
         << format_csv_double(rec.noise_x_norm) << ','
         << format_csv_double(rec.c2r) << ','
         << format_csv_double(wallclock ? rec.wallclock_ms : 0.0) << '\n';
  }
}

const char* problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kQuadratic: return "quadratic";
    case ProblemKind::kAuc: return "auc";
    case ProblemKind::kWorstGroup: return "worst_group";
    case ProblemKind::kTd: return "td";
  }
  return "?";
}

const char* algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kDpSgda: return "dp_sgda";
    case AlgorithmKind::kPrivateDiff: return "privatediff";
    case AlgorithmKind::kGdaReference: return "gda_reference";
  }
  return "?";
}

nlohmann::json schedule_json(const ExperimentConfig& cfg, const ResolvedRun& run) {
  nlohmann::json j;
  switch (cfg.algorithm) {
    case AlgorithmKind::kDpSgda:
      j = {{"T", run.sgda.iterations},       {"m", run.sgda.batch_size},
           {"eta_x", run.sgda.step_x},       {"eta_y", run.sgda.step_y},
           {"C1", run.sgda.clip_x},          {"C2", run.sgda.clip_y},
           {"sigma_x", run.sgda.sigma_x},    {"sigma_y", run.sgda.sigma_y}};
      break;
    case AlgorithmKind::kPrivateDiff:
      j = {{"R", run.privatediff.rounds},
           {"T", run.privatediff.restart_interval},
           {"T2", run.privatediff.inner_iterations},
           {"m", run.privatediff.batch_size},
           {"eta_x", run.privatediff.step_x},
           {"C0", run.privatediff.clip_sga},
           {"C1", run.privatediff.clip_restart},
           {"C2", run.privatediff.clip_diff_slope},
           {"C3", run.privatediff.clip_diff_const},
           {"sigma_x1", run.privatediff.sigma_x1},
           {"sigma_x2", run.privatediff.sigma_x2},
           {"sigma_y", run.privatediff.sigma_y}};
      break;
    case AlgorithmKind::kGdaReference:
      j = {{"T", run.gda_iterations},
           {"eta_x", run.gda_step_x},
           {"eta_y", run.gda_step_y}};
      break;
  }
  return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                std::uint64_t seed_offset, bool write_files) {
  const auto started = std::chrono::steady_clock::now();
  const ResolvedRun run = resolve_run(cfg);

  std::vector<std::uint64_t> seeds = cfg.seeds;
  for (auto& s : seeds) s += seed_offset;

  std::vector<OptimizerOutput> outputs(seeds.size());
  std::vector<SeedResult> results(seeds.size());
  std::vector<double> seed_ms(seeds.size(), 0.0);

  const int workers =
      std::max(1, std::min<int>(cfg.workers, static_cast<int>(seeds.size())));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      outputs[i] = execute(cfg, run, seeds[i]);
      results[i] = evaluate_seed(cfg, run, seeds[i], outputs[i]);
      seed_ms[i] = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    }
  };
  if (workers == 1) {
    work(0, seeds.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (seeds.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(seeds.size(), begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // One accountant evaluation covers all seeds: the mechanism schedule is a
  // function of the resolved configuration only.
  BudgetReport budget_report;
  AccountantLedger ledger(cfg.lambda_max);
  if (run.check_budget && !outputs.empty()) {
    budget_report =
        verify_budget(outputs[0].mechanisms, *run.check_budget, cfg.lambda_max);
    bool has_zero = false;
    for (const auto& mech : outputs[0].mechanisms) {
      const double mult =
          std::holds_alternative<SubsampledMechanismSpec>(mech)
              ? std::get<SubsampledMechanismSpec>(mech).noise_multiplier
              : std::get<GaussianMechanismSpec>(mech).noise_multiplier;
      if (!(mult > 0.0)) has_zero = true;
    }
    if (!has_zero) {
      for (const auto& mech : outputs[0].mechanisms) ledger.accumulate(mech);
    }
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].wallclock_ms = cfg.wallclock ? seed_ms[i] : 0.0;
    if (run.check_budget) {
      results[i].achieved_delta = budget_report.achieved_delta;
      results[i].budget_satisfied = budget_report.satisfied;
    }
  }

  // Deterministic merge order.
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return results[a].seed < results[b].seed;
  });

  ExperimentResult result;
  nlohmann::json seeds_json = nlohmann::json::array();
  for (const std::size_t i : order) {
    const auto& r = results[i];
    result.seeds.push_back(r);
    nlohmann::json rec = {{"seed", r.seed},
                          {"selected_round", r.selected_round},
                          {"grad_phi_norm", r.grad_phi_norm},
                          {"loss", r.loss},
                          {"wallclock_ms", r.wallclock_ms}};
    if (cfg.problem == ProblemKind::kAuc) rec["auc"] = r.auc;
    if (cfg.problem == ProblemKind::kTd) rec["mspbe"] = r.mspbe;
    if (run.check_budget) {
      rec["achieved_delta"] = r.achieved_delta;
      rec["budget_satisfied"] = r.budget_satisfied;
    }
    seeds_json.push_back(std::move(rec));
  }

  nlohmann::json summary = {
      {"name", cfg.name},
      {"problem", problem_name(cfg.problem)},
      {"algorithm", algorithm_name(cfg.algorithm)},
      {"n", run.problem->sample_count()},
      {"d1", run.problem->dim_x()},
      {"d2", run.problem->dim_y()},
      {"schedule", schedule_json(cfg, run)},
      {"seeds", std::move(seeds_json)},
  };
  if (!run.warnings.empty()) summary["warnings"] = run.warnings;
  if (cfg.budget) {
    summary["budget"] = {{"epsilon", cfg.budget->epsilon},
                         {"delta", cfg.budget->delta}};
  }
  if (run.check_budget) {
    summary["accountant"] = {
        {"target_epsilon", run.check_budget->epsilon},
        {"target_delta", run.check_budget->delta},
        {"achieved_delta", budget_report.achieved_delta},
        {"lambda_star", budget_report.lambda_star},
        {"pass", budget_report.satisfied},
        {"lambda_max", cfg.lambda_max},
        {"ledger", ledger.to_json()},
    };
  }
  summary["total_wallclock_ms"] =
      cfg.wallclock ? std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count()
                    : 0.0;
  result.summary = std::move(summary);

  if (write_files) {
    fs::create_directories(cfg.out_dir);
    for (const std::size_t i : order) {
      const std::string path =
          (fs::path(cfg.out_dir) /
           (cfg.name + "_seed" + std::to_string(results[i].seed) + "_trace.csv"))
              .string();
      write_trace_csv(path, outputs[i].trace, cfg.wallclock);
      result.trace_paths.push_back(path);
    }
    result.summary_path =
        (fs::path(cfg.out_dir) / (cfg.name + "_summary.json")).string();
    std::ofstream file(result.summary_path, std::ios::binary);
    file << result.summary.dump(2) << '\n';
  }
  return result;
}

std::string primary_metric_name(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::kAuc: return "auc";
    case ProblemKind::kTd: return "mspbe";
    default: return "grad_phi_norm";
  }
}

double primary_metric(const ExperimentConfig& cfg, const SeedResult& r) {
  switch (cfg.problem) {
    case ProblemKind::kAuc: return r.auc;
    case ProblemKind::kTd: return r.mspbe;
    default: return r.grad_phi_norm;
  }
}

namespace {

double metric_by_name(const std::string& metric, const SeedResult& r) {
  if (metric == "grad_phi_norm") return r.grad_phi_norm;
  if (metric == "loss") return r.loss;
  if (metric == "auc") return r.auc;
  if (metric == "mspbe") return r.mspbe;
  throw ConfigError("unknown metric '" + metric + "'");
}

double binom_tail_ge(int k, int n) {
  // P(X >= k) for X ~ Bin(n, 1/2), exact.
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  long double total = 0.0L;
  long double coeff = 1.0L;  // C(n, 0)
  for (int i = 0; i <= n; ++i) {
    if (i >= k) total += coeff;
    coeff = coeff * (n - i) / (i + 1);
  }
  return static_cast<double>(total * std::pow(0.5L, n));
}

}  // namespace

nlohmann::json CompareReport::to_json() const {
  return {{"deltas", deltas},   {"mean_delta", mean_delta},
          {"wins_a", wins_a},   {"wins_b", wins_b},
          {"ties", ties},       {"p_two_sided", p_two_sided},
          {"p_a_less", p_a_less}, {"p_a_greater", p_a_greater}};
}

CompareReport compare_experiments(const ExperimentConfig& a,
                                  const ExperimentConfig& b,
                                  const std::string& metric,
                                  std::uint64_t seed_offset) {
  if (a.problem != b.problem) {
    throw ConfigError("compare: configs must share the problem family");
  }
  if (a.seeds != b.seeds) {
    throw ConfigError("compare: configs must share the seed list");
  }
  if (a.budget && b.budget &&
      (a.budget->epsilon != b.budget->epsilon ||
       a.budget->delta != b.budget->delta)) {
    throw ConfigError("compare: configs must share the privacy budget");
  }
  const ExperimentResult ra = run_experiment(a, seed_offset, false);
  const ExperimentResult rb = run_experiment(b, seed_offset, false);

  CompareReport report;
  double sum = 0.0;
  for (std::size_t i = 0; i < ra.seeds.size(); ++i) {
    const double delta =
        metric_by_name(metric, ra.seeds[i]) - metric_by_name(metric, rb.seeds[i]);
    report.deltas.push_back(delta);
    sum += delta;
    if (delta < 0.0) ++report.wins_a;
    else if (delta > 0.0) ++report.wins_b;
    else ++report.ties;
  }
  report.mean_delta = sum / static_cast<double>(report.deltas.size());
  const int n_eff = report.wins_a + report.wins_b;
  report.p_a_less = binom_tail_ge(report.wins_a, n_eff);
  report.p_a_greater = binom_tail_ge(report.wins_b, n_eff);
  report.p_two_sided = std::min(1.0, 2.0 * std::min(report.p_a_less, report.p_a_greater));
  return report;
}

SweepResult emit_sweep(const ExperimentConfig& base, SweepAxis axis,
                       const std::vector<double>& values,
                       std::uint64_t seed_offset, bool write_files) {
  if (values.empty()) {
    throw ConfigError("sweep: values must be non-empty");
  }
  SweepResult result;
  result.metric_name = primary_metric_name(base);
  result.algorithm = algorithm_name(base.algorithm);
  switch (axis) {
    case SweepAxis::kEpsilon: result.axis = "epsilon"; break;
    case SweepAxis::kN: result.axis = "n"; break;
    case SweepAxis::kD: result.axis = "d"; break;
  }

  for (const double value : values) {
    ExperimentConfig cfg = base;
    switch (axis) {
      case SweepAxis::kEpsilon: {
        if (!cfg.budget) {
          throw ConfigError("sweep over epsilon requires budget mode");
        }
        cfg.budget->epsilon = value;
        break;
      }
      case SweepAxis::kN: {
        const int n = static_cast<int>(std::llround(value));
        if (n < 1) throw ConfigError("sweep: n must be positive");
        switch (cfg.problem) {
          case ProblemKind::kQuadratic: cfg.quadratic.n = n; break;
          case ProblemKind::kAuc: cfg.auc.n = n; break;
          case ProblemKind::kWorstGroup:
            cfg.worst_group.per_group =
                std::max(1, n / std::max(1, cfg.worst_group.groups));
            break;
          case ProblemKind::kTd: cfg.td.n = n; break;
        }
        break;
      }
      case SweepAxis::kD: {
        const int d = static_cast<int>(std::llround(value));
        if (d < 1) throw ConfigError("sweep: d must be positive");
        switch (cfg.problem) {
          case ProblemKind::kQuadratic: cfg.quadratic.d1 = d; break;
          case ProblemKind::kAuc: cfg.auc.dim = d; break;
          case ProblemKind::kWorstGroup: cfg.worst_group.dim = d; break;
          case ProblemKind::kTd: cfg.td.states = d; break;
        }
        break;
      }
    }
    const ExperimentResult res = run_experiment(cfg, seed_offset, false);
    for (const auto& seed_result : res.seeds) {
      result.rows.push_back(
          SweepRow{value, seed_result.seed, primary_metric(cfg, seed_result)});
    }
  }

  if (write_files) {
    fs::create_directories(base.out_dir);
    result.csv_path =
        (fs::path(base.out_dir) / (base.name + "_sweep_" + result.axis + ".csv"))
            .string();
    std::ofstream file(result.csv_path, std::ios::binary);
    file << "axis_value,seed,metric,algorithm\n";
    for (const auto& row : result.rows) {
      file << format_csv_double(row.axis_value) << ',' << row.seed << ','
           << format_csv_double(row.metric) << ',' << result.algorithm << '\n';
    }
  }
  return result;
}

void write_svg_chart(const std::string& path, const OptimizerTrace& trace) {
  std::vector<std::pair<double, double>> points;
  for (const auto& rec : trace.records) {
    if (!std::isnan(rec.grad_phi_norm)) {
      points.emplace_back(rec.round, rec.grad_phi_norm);
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot write svg file " + path);
  }
  const int width = 640, height = 400, margin = 50;
  file << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\">\n";
  file << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (points.size() >= 2) {
    double xmin = points.front().first, xmax = points.back().first;
    double ymin = points[0].second, ymax = points[0].second;
    for (const auto& [px, py] : points) {
      ymin = std::min(ymin, py);
      ymax = std::max(ymax, py);
    }
    if (ymax == ymin) ymax = ymin + 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    auto sx = [&](double v) {
      return margin + (v - xmin) / (xmax - xmin) * (width - 2 * margin);
    };
    auto sy = [&](double v) {
      return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    file << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (const auto& [px, py] : points) {
      file << sx(px) << ',' << sy(py) << ' ';
    }
    file << "\"/>\n";
    file << "<line x1=\"" << margin << "\" y1=\"" << height - margin
         << "\" x2=\"" << width - margin << "\" y2=\"" << height - margin
         << "\" stroke=\"black\"/>\n";
    file << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\""
         << margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    file << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
         << "\" text-anchor=\"middle\" font-size=\"12\">round</text>\n";
    file << "<text x=\"14\" y=\"" << height / 2
         << "\" font-size=\"12\" transform=\"rotate(-90 14 " << height / 2
         << ")\" text-anchor=\"middle\">gradient norm</text>\n";
    file << "<text x=\"" << width - margin << "\" y=\"" << margin - 8
         << "\" text-anchor=\"end\" font-size=\"11\">max "
         << format_csv_double(ymax) << ", min " << format_csv_double(ymin)
         << "</text>\n";
  }
  file << "</svg>\n";
}

}  // namespace dpmm
