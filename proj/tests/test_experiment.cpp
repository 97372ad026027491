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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "dpminimax/experiment.hpp"

using namespace dpmm;

namespace {

namespace fs = std::filesystem;

const char* kSgdaConfig = R"(
# small quadratic run
problem = quadratic
algorithm = dp_sgda
quadratic.n = 40
quadratic.d1 = 3
quadratic.d2 = 2
quadratic.s = 0.6
quadratic.rho = 0.4
quadratic.mu = 1.2
quadratic.data_seed = 7
budget.epsilon = 1.0
budget.delta = 1e-6
sgda.T = 10
sgda.m = 8
sgda.eta_x = 0.05
sgda.eta_y = 0.1
sgda.C1 = 1.0
sgda.C2 = 1.0
seeds = 1,2
)";

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

fs::path temp_dir(const char* tag) {
  const fs::path dir = fs::temp_directory_path() / (std::string("dpmm_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parser reports the offending line for unknown keys") {
  const std::string text = "problem = quadratic\nfrobnicate = 1\n";
  try {
    parse_config_text(text, "test.conf");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("test.conf:2") != std::string::npos);
    CHECK(what.find("frobnicate") != std::string::npos);
  }
}

TEST_CASE("config parser rejects duplicates, bad values, and bad shapes") {
  CHECK_THROWS_AS(parse_config_text("problem = quadratic\nproblem = auc\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("sgda.T = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("just a line without equals\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("seeds = \n"), ConfigError);
}

TEST_CASE("config requires exactly one of budget and noise") {
  const char* base =
      "problem = quadratic\nalgorithm = dp_sgda\nsgda.T = 5\nsgda.m = 4\n"
      "sgda.eta_x = 0.1\nsgda.eta_y = 0.1\nsgda.C1 = 1\nsgda.C2 = 1\n";
  // Neither given.
  CHECK_THROWS_AS(parse_config_text(base), ConfigError);
  // Both given.
  const std::string both = std::string(base) +
                           "budget.epsilon = 1\nbudget.delta = 1e-6\n"
                           "noise.sigma_x = 0.1\nnoise.sigma_y = 0.1\n";
  CHECK_THROWS_AS(parse_config_text(both), ConfigError);
  // Exactly one.
  const std::string noise_only = std::string(base) +
                                 "noise.sigma_x = 0.1\nnoise.sigma_y = 0.1\n";
  CHECK_NOTHROW(parse_config_text(noise_only));
  // gda_reference takes neither.
  CHECK_THROWS_AS(
      parse_config_text("problem = quadratic\nalgorithm = gda_reference\n"
                        "budget.epsilon = 1\nbudget.delta = 1e-6\n"),
      ConfigError);
  CHECK_NOTHROW(
      parse_config_text("problem = quadratic\nalgorithm = gda_reference\n"));
}

TEST_CASE("run_experiment writes the pinned trace shape") {
  const fs::path dir = temp_dir("run");
  ExperimentConfig cfg = parse_config_text(kSgdaConfig, "sgda_small.conf");
  cfg.out_dir = dir.string();
  const auto result = run_experiment(cfg);

  // T = 10 -> 11 data rows (rounds 0..10).
  REQUIRE(result.trace_paths.size() == 2);
  const std::string trace = read_file(result.trace_paths[0]);
  CHECK(trace.rfind("round,grad_phi_norm,loss,noise_x_norm,c2r,wallclock_ms\n",
                    0) == 0);
  int rows = 0;
  for (const char ch : trace) rows += ch == '\n' ? 1 : 0;
  CHECK(rows == 12);  // header + 11 data rows

  // Summary JSON carries the documented per-seed fields.
  REQUIRE(result.seeds.size() == 2);
  const auto& summary = result.summary;
  CHECK(summary["problem"] == "quadratic");
  CHECK(summary["algorithm"] == "dp_sgda");
  REQUIRE(summary["seeds"].size() == 2);
  for (const auto& rec : summary["seeds"]) {
    CHECK(rec.contains("seed"));
    CHECK(rec.contains("grad_phi_norm"));
    CHECK(rec.contains("loss"));
    CHECK(rec.contains("achieved_delta"));
    CHECK(rec.contains("budget_satisfied"));
    CHECK(rec.contains("wallclock_ms"));
    CHECK(rec.contains("selected_round"));
  }
  CHECK(summary["accountant"]["ledger"].size() == kDefaultLambdaMax);
  fs::remove_all(dir);
}

TEST_CASE("trace CSVs are byte-identical across repeated runs") {
  const fs::path dir_a = temp_dir("rep_a");
  const fs::path dir_b = temp_dir("rep_b");
  ExperimentConfig cfg = parse_config_text(kSgdaConfig, "sgda_small.conf");
  cfg.out_dir = dir_a.string();
  const auto ra = run_experiment(cfg);
  cfg.out_dir = dir_b.string();
  const auto rb = run_experiment(cfg);
  REQUIRE(ra.trace_paths.size() == rb.trace_paths.size());
  for (std::size_t i = 0; i < ra.trace_paths.size(); ++i) {
    CHECK(read_file(ra.trace_paths[i]) == read_file(rb.trace_paths[i]));
  }
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("seed-parallel execution matches sequential execution") {
  ExperimentConfig cfg = parse_config_text(kSgdaConfig, "sgda_small.conf");
  cfg.seeds = {1, 2, 3, 4};
  const auto seq = run_experiment(cfg, 0, false);
  cfg.workers = 4;
  const auto par = run_experiment(cfg, 0, false);
  REQUIRE(seq.seeds.size() == par.seeds.size());
  for (std::size_t i = 0; i < seq.seeds.size(); ++i) {
    CHECK(seq.seeds[i].seed == par.seeds[i].seed);
    CHECK(seq.seeds[i].grad_phi_norm == par.seeds[i].grad_phi_norm);
    CHECK(seq.seeds[i].loss == par.seeds[i].loss);
  }
}

TEST_CASE("seed offset shifts every seed") {
  ExperimentConfig cfg = parse_config_text(kSgdaConfig, "sgda_small.conf");
  const auto base = run_experiment(cfg, 0, false);
  const auto shifted = run_experiment(cfg, 100, false);
  CHECK(shifted.seeds[0].seed == base.seeds[0].seed + 100);
  CHECK(shifted.seeds[0].grad_phi_norm != base.seeds[0].grad_phi_norm);
}

TEST_CASE("theory schedule resolves and calibrates") {
  const char* text = R"(
problem = quadratic
algorithm = dp_sgda
quadratic.n = 400
quadratic.d1 = 3
quadratic.d2 = 2
budget.epsilon = 1.0
budget.delta = 1e-6
schedule = theory
seeds = 1
)";
  const ExperimentConfig cfg = parse_config_text(text, "theory.conf");
  const ResolvedRun run = resolve_run(cfg);
  CHECK(run.sgda.iterations >= 1);
  CHECK(run.sgda.sigma_x > 0.0);
  CHECK(run.sgda.clip_x == run.problem->constants().lipschitz_x);

  // Explicit overrides win over the theory draft.
  const std::string with_override = std::string(text) + "sgda.T = 7\n";
  const ResolvedRun run2 = resolve_run(parse_config_text(with_override));
  CHECK(run2.sgda.iterations == 7);
}

TEST_CASE("privatediff explicit-noise mode with a report target") {
  const char* text = R"(
problem = quadratic
algorithm = privatediff
quadratic.n = 60
quadratic.d1 = 3
quadratic.d2 = 2
noise.sigma_x1 = 0.05
noise.sigma_x2 = 0.08
noise.sigma_y = 0.02
report.epsilon = 1.0
report.delta = 0.5
pd.R = 6
pd.T = 2
pd.T2 = 3
pd.m = 10
pd.eta_x = 0.05
pd.C0 = 1.0
pd.C1 = 1.0
pd.C2 = 1.0
pd.C3 = 0.05
seeds = 3
)";
  const ExperimentConfig cfg = parse_config_text(text, "pd_explicit.conf");
  const auto result = run_experiment(cfg, 0, false);
  REQUIRE(result.seeds.size() == 1);
  CHECK(result.summary.contains("accountant"));
  CHECK(result.seeds[0].achieved_delta > 0.0);
  CHECK(result.seeds[0].achieved_delta <= 1.0);
}

TEST_CASE("compare: identical configs give zero deltas and p = 1") {
  ExperimentConfig cfg = parse_config_text(kSgdaConfig, "sgda_small.conf");
  const auto report = compare_experiments(cfg, cfg, "grad_phi_norm");
  for (const double d : report.deltas) CHECK(d == 0.0);
  CHECK(report.mean_delta == 0.0);
  CHECK(report.ties == 2);
  CHECK(report.p_two_sided == 1.0);
  CHECK(report.p_a_less == 1.0);
}

TEST_CASE("compare rejects mismatched seed lists and problems") {
  ExperimentConfig a = parse_config_text(kSgdaConfig, "sgda_small.conf");
  ExperimentConfig b = a;
  b.seeds = {1, 2, 3};
  CHECK_THROWS_AS(compare_experiments(a, b, "grad_phi_norm"), ConfigError);
  ExperimentConfig c = a;
  c.problem = ProblemKind::kAuc;
  CHECK_THROWS_AS(compare_experiments(a, c, "grad_phi_norm"), ConfigError);
  CHECK_THROWS_AS(compare_experiments(a, a, "no_such_metric"), ConfigError);
}

TEST_CASE("sweep writes one row per value and seed") {
  const fs::path dir = temp_dir("sweep");
  ExperimentConfig cfg = parse_config_text(kSgdaConfig, "sgda_small.conf");
  cfg.out_dir = dir.string();
  const auto result = emit_sweep(cfg, SweepAxis::kEpsilon, {0.5, 1.0, 2.0});
  CHECK(result.rows.size() == 3 * 2);  // |values| x |seeds|
  const std::string csv = read_file(result.csv_path);
  CHECK(csv.rfind("axis_value,seed,metric,algorithm\n", 0) == 0);
  int rows = 0;
  for (const char ch : csv) rows += ch == '\n' ? 1 : 0;
  CHECK(rows == 7);

  // Single-value sweep equals one run_experiment.
  const auto single = emit_sweep(cfg, SweepAxis::kEpsilon, {1.0}, 0, false);
  const auto direct = run_experiment(cfg, 0, false);
  REQUIRE(single.rows.size() == 2);
  CHECK(single.rows[0].metric == direct.seeds[0].grad_phi_norm);
  CHECK(single.rows[1].metric == direct.seeds[1].grad_phi_norm);

  CHECK_THROWS_AS(emit_sweep(cfg, SweepAxis::kEpsilon, {}), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("svg chart renders a polyline") {
  ExperimentConfig cfg = parse_config_text(kSgdaConfig, "sgda_small.conf");
  const ResolvedRun run = resolve_run(cfg);
  auto c = run.sgda;
  c.seed = 1;
  const auto out = dp_sgda(*run.problem, c);
  const fs::path path = fs::temp_directory_path() / "dpmm_chart.svg";
  write_svg_chart(path.string(), out.trace);
  const std::string svg = read_file(path.string());
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  fs::remove(path);
}

TEST_CASE("divergent configs raise DivergenceError for exit code 3") {
  const char* text = R"(
problem = quadratic
algorithm = dp_sgda
quadratic.n = 20
quadratic.d1 = 3
quadratic.d2 = 2
noise.sigma_x = 0.0
noise.sigma_y = 0.0
sgda.T = 500
sgda.m = 20
sgda.eta_x = 1e6
sgda.eta_y = 0.1
sgda.C1 = 1e9
sgda.C2 = 1e9
seeds = 1
)";
  const ExperimentConfig cfg = parse_config_text(text, "diverge.conf");
  CHECK_THROWS_AS(run_experiment(cfg, 0, false), DivergenceError);
}

TEST_CASE("all four problem families run end to end") {
  auto run_family = [](const std::string& extra) {
    const std::string text =
        extra +
        "algorithm = dp_sgda\n"
        "noise.sigma_x = 0.05\nnoise.sigma_y = 0.05\n"
        "sgda.T = 5\nsgda.m = 10\nsgda.eta_x = 0.05\nsgda.eta_y = 0.05\n"
        "sgda.C1 = 1\nsgda.C2 = 1\nseeds = 1\n";
    const ExperimentConfig cfg = parse_config_text(text);
    return run_experiment(cfg, 0, false);
  };
  const auto quad = run_family("problem = quadratic\nquadratic.n = 30\n");
  CHECK(std::isfinite(quad.seeds[0].grad_phi_norm));
  const auto auc = run_family("problem = auc\nauc.n = 40\nauc.d = 4\n");
  CHECK(auc.seeds[0].auc >= 0.0);
  CHECK(auc.seeds[0].auc <= 1.0);
  const auto wg = run_family(
      "problem = worst_group\nworst_group.groups = 2\nworst_group.per_group = 15\n");
  CHECK(std::isfinite(wg.seeds[0].grad_phi_norm));
  const auto td = run_family("problem = td\ntd.states = 3\ntd.n = 50\n");
  CHECK(td.seeds[0].mspbe >= 0.0);
}
