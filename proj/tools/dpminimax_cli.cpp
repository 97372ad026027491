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

// Experiment runner: run / compare / sweep over config documents.
// Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpminimax/dpminimax.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) {
    std::cerr << "warning: " << w << "\n";
  }
}

void print_resolved(const dpmm::ExperimentConfig& cfg,
                    const dpmm::ResolvedRun& run) {
  using dpmm::AlgorithmKind;
  std::cout << "config '" << cfg.name << "' resolved:\n";
  std::cout << "  problem: n=" << run.problem->sample_count()
            << " d1=" << run.problem->dim_x() << " d2=" << run.problem->dim_y()
            << "\n";
  switch (cfg.algorithm) {
    case AlgorithmKind::kDpSgda: {
      const auto& c = run.sgda;
      std::printf(
          "  dp_sgda: T=%d m=%d eta_x=%g eta_y=%g C1=%g C2=%g sigma_x=%g "
          "sigma_y=%g\n",
          c.iterations, c.batch_size, c.step_x, c.step_y, c.clip_x, c.clip_y,
          c.sigma_x, c.sigma_y);
      break;
    }
    case AlgorithmKind::kPrivateDiff: {
      const auto& c = run.privatediff;
      std::printf(
          "  privatediff: R=%d T=%d T2=%d m=%d eta_x=%g C0=%g C1=%g C2=%g "
          "C3=%g sigma_x1=%g sigma_x2=%g sigma_y=%g\n",
          c.rounds, c.restart_interval, c.inner_iterations, c.batch_size,
          c.step_x, c.clip_sga, c.clip_restart, c.clip_diff_slope,
          c.clip_diff_const, c.sigma_x1, c.sigma_x2, c.sigma_y);
      break;
    }
    case AlgorithmKind::kGdaReference:
      std::printf("  gda_reference: T=%d eta_x=%g eta_y=%g\n",
                  run.gda_iterations, run.gda_step_x, run.gda_step_y);
      break;
  }
  print_warnings(run.warnings);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private minimax optimization experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t seed_offset = 0;
  bool dry_run = false;
  std::string out_override;
  app.add_option("--seed-offset", seed_offset, "Offset added to every seed");
  app.add_flag("--dry-run", dry_run, "Validate and print the resolved schedule");
  app.add_option("--out", out_override, "Override the output directory");

  auto* run_cmd = app.add_subcommand("run", "Run one experiment config");
  std::string run_config;
  bool svg = false;
  run_cmd->add_option("config", run_config, "Config file")->required();
  run_cmd->add_flag("--svg", svg, "Also render a gradient-norm SVG chart");

  auto* compare_cmd =
      app.add_subcommand("compare", "Paired comparison of two configs");
  std::string config_a, config_b, metric = "grad_phi_norm";
  compare_cmd->add_option("configA", config_a, "First config")->required();
  compare_cmd->add_option("configB", config_b, "Second config")->required();
  compare_cmd->add_option("--metric", metric,
                          "grad_phi_norm | loss | auc | mspbe");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one axis of a config");
  std::string sweep_config, axis;
  std::vector<double> values;
  sweep_cmd->add_option("config", sweep_config, "Base config")->required();
  sweep_cmd->add_option("--axis", axis, "epsilon | n | d")->required();
  sweep_cmd->add_option("--values", values, "Axis values")
      ->required()
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      dpmm::ExperimentConfig cfg = dpmm::load_config(run_config);
      if (!out_override.empty()) cfg.out_dir = out_override;
      if (dry_run) {
        const dpmm::ResolvedRun run = dpmm::resolve_run(cfg);
        print_resolved(cfg, run);
        return kExitOk;
      }
      const dpmm::ExperimentResult result = dpmm::run_experiment(cfg, seed_offset);
      if (result.summary.contains("warnings")) {
        print_warnings(result.summary["warnings"].get<std::vector<std::string>>());
      }
      std::cout << "wrote " << result.summary_path << "\n";
      for (const auto& path : result.trace_paths) {
        std::cout << "wrote " << path << "\n";
      }
      if (svg && !result.trace_paths.empty()) {
        // Re-run the first seed to rebuild its trace for plotting.
        dpmm::ExperimentConfig one = cfg;
        one.seeds = {cfg.seeds.front()};
        dpmm::ResolvedRun run = dpmm::resolve_run(one);
        dpmm::OptimizerOutput out;
        switch (cfg.algorithm) {
          case dpmm::AlgorithmKind::kDpSgda: {
            auto c = run.sgda;
            c.seed = cfg.seeds.front() + seed_offset;
            out = dpmm::dp_sgda(*run.problem, c);
            break;
          }
          case dpmm::AlgorithmKind::kPrivateDiff: {
            auto c = run.privatediff;
            c.seed = cfg.seeds.front() + seed_offset;
            out = dpmm::privatediff_minimax(*run.problem, c);
            break;
          }
          case dpmm::AlgorithmKind::kGdaReference:
            out = dpmm::gda_reference(*run.problem, run.gda_iterations,
                                      run.gda_step_x, run.gda_step_y);
            break;
        }
        const std::string svg_path =
            (std::filesystem::path(cfg.out_dir) / (cfg.name + "_grad_norm.svg"))
                .string();
        dpmm::write_svg_chart(svg_path, out.trace);
        std::cout << "wrote " << svg_path << "\n";
      }
      bool pass = true;
      if (result.summary.contains("accountant")) {
        pass = result.summary["accountant"]["pass"].get<bool>();
        std::cout << "accountant: achieved delta = "
                  << result.summary["accountant"]["achieved_delta"]
                  << " (target " << result.summary["accountant"]["target_delta"]
                  << ") -> " << (pass ? "pass" : "FAIL") << "\n";
      }
      return kExitOk;
    }

    if (compare_cmd->parsed()) {
      dpmm::ExperimentConfig a = dpmm::load_config(config_a);
      dpmm::ExperimentConfig b = dpmm::load_config(config_b);
      if (!out_override.empty()) {
        a.out_dir = out_override;
        b.out_dir = out_override;
      }
      if (dry_run) {
        print_resolved(a, dpmm::resolve_run(a));
        print_resolved(b, dpmm::resolve_run(b));
        return kExitOk;
      }
      const dpmm::CompareReport report =
          dpmm::compare_experiments(a, b, metric, seed_offset);
      const std::string path =
          (std::filesystem::path(a.out_dir) /
           (a.name + "_vs_" + b.name + "_" + metric + ".json"))
              .string();
      std::filesystem::create_directories(a.out_dir);
      std::ofstream file(path, std::ios::binary);
      file << report.to_json().dump(2) << '\n';
      std::printf(
          "%s: mean delta=%.6g wins A=%d B=%d ties=%d p(two-sided)=%.4g "
          "p(A<B)=%.4g\n",
          metric.c_str(), report.mean_delta, report.wins_a, report.wins_b,
          report.ties, report.p_two_sided, report.p_a_less);
      std::cout << "wrote " << path << "\n";
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      dpmm::ExperimentConfig cfg = dpmm::load_config(sweep_config);
      if (!out_override.empty()) cfg.out_dir = out_override;
      dpmm::SweepAxis sweep_axis;
      if (axis == "epsilon") sweep_axis = dpmm::SweepAxis::kEpsilon;
      else if (axis == "n") sweep_axis = dpmm::SweepAxis::kN;
      else if (axis == "d") sweep_axis = dpmm::SweepAxis::kD;
      else throw dpmm::ConfigError("unknown sweep axis '" + axis + "'");
      if (dry_run) {
        print_resolved(cfg, dpmm::resolve_run(cfg));
        return kExitOk;
      }
      const dpmm::SweepResult result =
          dpmm::emit_sweep(cfg, sweep_axis, values, seed_offset);
      std::cout << "wrote " << result.csv_path << " (" << result.rows.size()
                << " rows)\n";
      return kExitOk;
    }
  } catch (const dpmm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dpmm::DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
