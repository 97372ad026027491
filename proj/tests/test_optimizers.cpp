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

#include <cmath>
#include <memory>
#include <vector>

#include <doctest.h>

#include "dpminimax/mechanisms.hpp"
#include "dpminimax/optimizers.hpp"
#include "dpminimax/problems/quadratic.hpp"
#include "dpminimax/schedule.hpp"

using namespace dpmm;

namespace {

std::unique_ptr<QuadraticProblem> test_problem(std::uint64_t seed = 9,
                                               int n = 16, int d1 = 4,
                                               int d2 = 3) {
  Rng rng(seed);
  return make_quadratic(random_quadratic_spec(
      n, d1, d2, /*sin_weight=*/0.8, /*ridge=*/0.4, /*mu=*/1.2,
      /*diameter_y=*/2.0, /*x_box=*/3.0, /*coupling_spread=*/0.3, rng));
}

SgdaConfig zero_noise_full_batch(const MinimaxProblem& problem, int rounds,
                                 double eta_x, double eta_y) {
  SgdaConfig c;
  c.iterations = rounds;
  c.batch_size = problem.sample_count();
  c.step_x = eta_x;
  c.step_y = eta_y;
  c.clip_x = kNoClipping;
  c.clip_y = kNoClipping;
  c.sigma_x = 0.0;
  c.sigma_y = 0.0;
  c.seed = 1;
  c.x0 = Vector::Constant(problem.dim_x(), 0.5);
  return c;
}

}  // namespace

TEST_CASE("dp_sgda with T = 0 returns the initial point") {
  const auto problem = test_problem();
  SgdaConfig c = zero_noise_full_batch(*problem, 0, 0.1, 0.1);
  const auto out = dp_sgda(*problem, c);
  CHECK(out.selected_round == 0);
  CHECK((out.x_priv - c.x0).norm() == 0.0);
  CHECK(out.trace.records.size() == 1);
}

TEST_CASE("dp_sgda matches the deterministic GDA reference exactly") {
  const auto problem = test_problem();
  const double eta_x = 0.05, eta_y = 0.2;
  SgdaConfig c = zero_noise_full_batch(*problem, 50, eta_x, eta_y);
  const auto sgda = dp_sgda(*problem, c);
  const auto gda = gda_reference(*problem, 50, eta_x, eta_y, c.x0, Vector{});
  REQUIRE(sgda.trace.records.size() == 51);
  REQUIRE(gda.trace.records.size() == 51);
  for (int t = 0; t <= 50; ++t) {
    const auto& a = sgda.trace.records[static_cast<std::size_t>(t)];
    const auto& b = gda.trace.records[static_cast<std::size_t>(t)];
    CHECK((a.x - b.x).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK((a.y - b.y).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("dp_sgda is deterministic given the seed") {
  const auto problem = test_problem();
  SgdaConfig c;
  c.iterations = 30;
  c.batch_size = 4;
  c.step_x = 0.05;
  c.step_y = 0.1;
  c.clip_x = 1.0;
  c.clip_y = 1.0;
  c.sigma_x = 0.3;
  c.sigma_y = 0.3;
  c.seed = 77;
  const auto a = dp_sgda(*problem, c);
  const auto b = dp_sgda(*problem, c);
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t t = 0; t < a.trace.records.size(); ++t) {
    CHECK(a.trace.records[t].x == b.trace.records[t].x);
    CHECK(a.trace.records[t].y == b.trace.records[t].y);
    CHECK(a.trace.records[t].noise_x_norm == b.trace.records[t].noise_x_norm);
  }
  CHECK(a.selected_round == b.selected_round);
  CHECK(a.x_priv == b.x_priv);

  SgdaConfig other = c;
  other.seed = 78;
  const auto d = dp_sgda(*problem, other);
  CHECK((a.trace.records[5].x - d.trace.records[5].x).norm() > 0.0);
}

TEST_CASE("dp_sgda reservoir mode matches uniform selection in distribution") {
  const auto problem = test_problem();
  SgdaConfig c = zero_noise_full_batch(*problem, 9, 0.02, 0.05);
  c.store_iterates = false;
  // Zero-noise run: iterates are deterministic, only the selection varies.
  std::vector<int> counts(10, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    c.seed = seed;
    const auto out = dp_sgda(*problem, c);
    ++counts[static_cast<std::size_t>(out.selected_round)];
  }
  for (const int count : counts) {
    CHECK(count > 400 - 4 * 19);  // 4 sigma around 400
    CHECK(count < 400 + 4 * 19);
  }
}

TEST_CASE("dp_sgda emits the executed mechanism schedule") {
  const auto problem = test_problem();
  SgdaConfig c;
  c.iterations = 12;
  c.batch_size = 4;
  c.step_x = 0.05;
  c.step_y = 0.1;
  c.clip_x = 1.5;
  c.clip_y = 2.0;
  c.sigma_x = 0.3;
  c.sigma_y = 0.4;
  const auto out = dp_sgda(*problem, c);
  REQUIRE(out.mechanisms.size() == 2);
  const auto& mx = std::get<SubsampledMechanismSpec>(out.mechanisms[0]);
  CHECK(mx.invocations == 12);
  CHECK(mx.batch_size == 4);
  CHECK(mx.dataset_size == 16);
  CHECK(mx.noise_multiplier ==
        doctest::Approx(4.0 * 0.3 / (2.0 * 1.5)).epsilon(1e-15));
  const auto& my = std::get<SubsampledMechanismSpec>(out.mechanisms[1]);
  CHECK(my.noise_multiplier ==
        doctest::Approx(4.0 * 0.4 / (2.0 * 2.0)).epsilon(1e-15));
}

TEST_CASE("dp_sgda diverges with an explicit round index") {
  const auto problem = test_problem();
  SgdaConfig c = zero_noise_full_batch(*problem, 400, 1e4, 0.1);
  try {
    dp_sgda(*problem, c);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.round() >= 1);
  }
}

TEST_CASE("minibatch_sga stays at the interior maximizer with a full batch") {
  const auto problem = test_problem(10, 12, 3, 2);
  const Vector x = Vector::Constant(3, 0.3);
  const Vector ys = problem->y_star(x);
  REQUIRE(ys.norm() < problem->y_radius() - 1e-6);  // interior
  Rng rng(3);
  const Vector out = minibatch_sga(*problem, x, ys, 50, kNoClipping,
                                   problem->sample_count(), rng);
  CHECK((out - ys).norm() < 1e-12);
}

TEST_CASE("minibatch_sga converges with the 1/(mu i) schedule on a full batch") {
  const auto problem = test_problem(11, 12, 3, 2);
  const Vector x = Vector::Constant(3, 0.4);
  const Vector ys = problem->y_star(x);
  Rng rng(4);
  const Vector y0 = problem->project_y(Vector::Constant(2, -0.9));
  const Vector out = minibatch_sga(*problem, x, y0, 3000, kNoClipping,
                                   problem->sample_count(), rng);
  CHECK((out - ys).norm() < 1e-3);
}

TEST_CASE("minibatch_sga single step has size 1/mu") {
  const auto problem = test_problem(12, 8, 3, 2);
  const double mu = problem->constants().strong_concavity;
  const Vector x = Vector::Constant(3, 0.2);
  const Vector y0 = Vector::Zero(2);
  Rng rng(5);
  const Vector out =
      minibatch_sga(*problem, x, y0, 1, kNoClipping, problem->sample_count(), rng);
  const Vector expected =
      problem->project_y(y0 + (1.0 / mu) * problem->averaged_grad_y(x, y0));
  CHECK((out - expected).norm() < 1e-15);
  CHECK_THROWS_AS(minibatch_sga(*problem, x, y0, 0, 1.0, 4, rng),
                  std::invalid_argument);
}

TEST_CASE("minibatch_sga error contracts at the 1/t rate") {
  const auto problem = test_problem(13, 40, 3, 2);
  const Vector x = Vector::Constant(3, 0.3);
  const Vector ys = problem->y_star(x);
  const double g = problem->constants().lipschitz_y;
  const double mu = problem->constants().strong_concavity;
  const Vector y0 = problem->project_y(Vector::Constant(2, 0.9));
  int hold = 0;
  const int trials = 20;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    bool ok = true;
    for (const int t : {10, 100, 1000}) {
      Rng rng_t(seed);
      const Vector y = minibatch_sga(*problem, x, y0, t, g, 4, rng_t);
      const double bound = 3.0 *
                           (624.0 * std::log(std::log(1000.0) / 0.01) + 1.0) *
                           g * g / (mu * mu * t);
      if ((y - ys).squaredNorm() > bound) ok = false;
    }
    hold += ok ? 1 : 0;
  }
  CHECK(hold >= trials - 1);
}

TEST_CASE("privatediff telescopes to the exact gradient under zero noise") {
  const auto problem = test_problem(14, 10, 4, 3);
  PrivateDiffConfig c;
  c.rounds = 32;
  c.restart_interval = 8;
  c.inner_iterations = 5;
  c.batch_size = problem->sample_count();
  c.step_x = 0.05;
  c.clip_sga = kNoClipping;
  c.clip_restart = kNoClipping;
  c.clip_diff_slope = kNoClipping;
  c.clip_diff_const = 0.0;
  c.sigma_x1 = c.sigma_x2 = c.sigma_y = 0.0;
  c.seed = 8;
  c.x0 = Vector::Constant(4, 0.4);

  const auto out = privatediff_minimax(*problem, c);
  REQUIRE(out.trace.records.size() == 32);
  // The estimator is recoverable from consecutive iterates:
  // v~_{r+1} = (x_r - x_{r+1}) / eta, and must equal the full-batch gradient
  // at (x_r, y_{r+1}) within every restart window.
  for (std::size_t r = 1; r < out.trace.records.size(); ++r) {
    const auto& prev = out.trace.records[r - 1];
    const auto& cur = out.trace.records[r];
    const Vector v_tilde = (prev.x - cur.x) / c.step_x;
    const Vector exact = problem->averaged_grad_x(prev.x, cur.y_inner);
    CHECK((v_tilde - exact).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
  const Vector v1 = (c.x0 - out.trace.records[0].x) / c.step_x;
  const Vector exact1 =
      problem->averaged_grad_x(c.x0, out.trace.records[0].y_inner);
  CHECK((v1 - exact1).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("privatediff with T = 1 matches a restart-only reference pathwise") {
  const auto problem = test_problem(15, 12, 3, 2);
  PrivateDiffConfig c;
  c.rounds = 20;
  c.restart_interval = 1;
  c.inner_iterations = 4;
  c.batch_size = 5;
  c.step_x = 0.04;
  c.clip_sga = 1.0;
  c.clip_restart = 1.2;
  c.clip_diff_slope = 2.0;
  c.clip_diff_const = 0.1;
  c.sigma_x1 = 0.2;
  c.sigma_x2 = 0.4;
  c.sigma_y = 0.15;
  c.seed = 99;
  const auto out = privatediff_minimax(*problem, c);

  // Reference: every round re-anchors (SGDA-with-inner-SGA update law),
  // reproduced with the same RNG consumption pattern and shared seed.
  Rng rng(c.seed);
  Vector x = Vector::Zero(3);
  Vector y_tilde = problem->project_y(Vector::Zero(2));
  for (int r = 0; r < c.rounds; ++r) {
    const auto batch = sample_batch(problem->sample_count(), c.batch_size, rng);
    const Vector y_next = minibatch_sga(*problem, x, y_tilde,
                                        c.inner_iterations, c.clip_sga,
                                        c.batch_size, rng);
    const Vector d = problem->batch_grad_x_clipped(x, y_next, batch, c.clip_restart);
    Vector noise(3);
    for (int i = 0; i < 3; ++i) noise[i] = c.sigma_x1 * c.clip_restart * rng.normal();
    const Vector v_tilde = d + noise;
    x -= c.step_x * v_tilde;
    Vector zeta(2);
    for (int i = 0; i < 2; ++i) zeta[i] = c.sigma_y * rng.normal();
    y_tilde = y_next + zeta;

    const auto& rec = out.trace.records[static_cast<std::size_t>(r)];
    CHECK((rec.x - x).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK((rec.y - y_tilde).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK(std::isnan(rec.c2r));  // every round is a restart round
  }
}

TEST_CASE("privatediff noise bookkeeping records the exact stddevs") {
  const auto problem = test_problem(16, 12, 3, 2);
  PrivateDiffConfig c;
  c.rounds = 12;
  c.restart_interval = 4;
  c.inner_iterations = 3;
  c.batch_size = 6;
  c.step_x = 0.05;
  c.clip_sga = 1.0;
  c.clip_restart = 1.5;
  c.clip_diff_slope = 2.0;
  c.clip_diff_const = 0.05;
  c.sigma_x1 = 0.3;
  c.sigma_x2 = 0.7;
  c.sigma_y = 0.1;
  c.seed = 5;
  const auto out = privatediff_minimax(*problem, c);
  REQUIRE(out.trace.records.size() == 12);
  for (std::size_t r = 0; r < out.trace.records.size(); ++r) {
    const auto& rec = out.trace.records[r];
    if (r % 4 == 0) {  // rounds r = 0, 4, 8 are restarts; records are 1-based
      CHECK(rec.noise_x_stddev ==
            doctest::Approx(c.sigma_x1 * c.clip_restart).epsilon(1e-15));
      CHECK(std::isnan(rec.c2r));
    } else {
      CHECK(rec.noise_x_stddev ==
            doctest::Approx(c.sigma_x2 * rec.c2r).epsilon(1e-15));
      CHECK(rec.c2r > 0.0);
    }
  }
}

TEST_CASE("privatediff dual iterates stay feasible before perturbation") {
  const auto problem = test_problem(17, 12, 3, 2);
  PrivateDiffConfig c;
  c.rounds = 10;
  c.restart_interval = 2;
  c.inner_iterations = 4;
  c.batch_size = 4;
  c.step_x = 0.05;
  c.clip_sga = 1.0;
  c.clip_restart = 1.0;
  c.clip_diff_slope = 1.0;
  c.clip_diff_const = 0.1;
  c.sigma_x1 = 0.1;
  c.sigma_x2 = 0.1;
  c.sigma_y = 0.5;
  c.seed = 31;
  const auto out = privatediff_minimax(*problem, c);
  for (const auto& rec : out.trace.records) {
    CHECK((problem->project_y(rec.y_inner) - rec.y_inner).norm() <= 1e-12);
  }
}

TEST_CASE("privatediff mechanism schedule counts restarts correctly") {
  const auto problem = test_problem(18, 20, 3, 2);
  PrivateDiffConfig c;
  c.rounds = 10;
  c.restart_interval = 3;  // restarts at r = 0, 3, 6, 9
  c.inner_iterations = 2;
  c.batch_size = 5;
  c.step_x = 0.05;
  c.clip_sga = 1.0;
  c.clip_restart = 1.0;
  c.clip_diff_slope = 1.0;
  c.clip_diff_const = 0.1;
  c.sigma_x1 = 0.2;
  c.sigma_x2 = 0.3;
  c.sigma_y = 0.1;
  const auto out = privatediff_minimax(*problem, c);
  REQUIRE(out.mechanisms.size() == 3);
  const auto& restart = std::get<SubsampledMechanismSpec>(out.mechanisms[0]);
  CHECK(restart.invocations == 4);
  CHECK(restart.noise_multiplier == doctest::Approx(5.0 * 0.2 / 2.0).epsilon(1e-15));
  const auto& diff = std::get<SubsampledMechanismSpec>(out.mechanisms[1]);
  CHECK(diff.invocations == 6);
  CHECK(diff.noise_multiplier == doctest::Approx(5.0 * 0.3 / 2.0).epsilon(1e-15));
  const auto& dual = std::get<GaussianMechanismSpec>(out.mechanisms[2]);
  CHECK(dual.invocations == 10);
  const auto& pc = problem->constants();
  const double sens = (2.0 * 1.0 + pc.smooth_y * pc.loss_bound) /
                      (pc.strong_concavity * 20.0);
  CHECK(dual.noise_multiplier == doctest::Approx(0.1 / sens).epsilon(1e-12));
}

TEST_CASE("privatediff is deterministic and rejects T > R") {
  const auto problem = test_problem(19, 10, 3, 2);
  PrivateDiffConfig c;
  c.rounds = 8;
  c.restart_interval = 2;
  c.inner_iterations = 3;
  c.batch_size = 4;
  c.step_x = 0.05;
  c.clip_sga = 1.0;
  c.clip_restart = 1.0;
  c.clip_diff_slope = 1.0;
  c.clip_diff_const = 0.1;
  c.sigma_x1 = 0.2;
  c.sigma_x2 = 0.2;
  c.sigma_y = 0.1;
  c.seed = 55;
  const auto a = privatediff_minimax(*problem, c);
  const auto b = privatediff_minimax(*problem, c);
  CHECK(a.x_priv == b.x_priv);
  CHECK(a.selected_round == b.selected_round);
  PrivateDiffConfig bad = c;
  bad.restart_interval = 9;  // T > R
  CHECK_THROWS_AS(privatediff_minimax(*problem, bad), std::invalid_argument);
}

TEST_CASE("select_uniform_iterate") {
  OptimizerTrace trace;
  for (int r = 0; r <= 9; ++r) {
    TraceRecord rec;
    rec.round = r;
    rec.x = Vector::Constant(2, r);
    rec.y = Vector::Constant(1, -r);
    trace.records.push_back(rec);
  }

  // Single eligible round.
  OptimizerTrace single;
  single.records.push_back(trace.records[3]);
  Rng rng(1);
  const auto pick = select_uniform_iterate(single, 0, rng);
  CHECK(pick.round == 3);

  // Uniformity over 10 rounds.
  std::vector<int> counts(10, 0);
  Rng rng2(2);
  for (int k = 0; k < 100000; ++k) {
    ++counts[static_cast<std::size_t>(select_uniform_iterate(trace, 0, rng2).round)];
  }
  for (const int count : counts) {
    CHECK(count > 10000 - 400);
    CHECK(count < 10000 + 400);
  }

  // Deterministic given the seed.
  Rng rng3(3), rng4(3);
  CHECK(select_uniform_iterate(trace, 1, rng3).round ==
        select_uniform_iterate(trace, 1, rng4).round);

  OptimizerTrace empty;
  Rng rng5(4);
  CHECK_THROWS_AS(select_uniform_iterate(empty, 0, rng5), std::invalid_argument);
}

TEST_CASE("suggest_sgda_schedule reproduces the closed-form iteration count") {
  ProblemConstants constants;
  constants.lipschitz_x = 1.0;
  constants.lipschitz_y = 1.0;
  constants.smooth_x = 2.0;
  constants.smooth_y = 1.0;
  constants.smooth_xy = 1.0;
  constants.strong_concavity = 1.0;
  constants.loss_bound = 1.0;
  constants.diameter_y = 2.0;
  const auto s = suggest_sgda_schedule(constants, 10000, 16,
                                       PrivacyBudget{1.0, 1e-8});
  // round(1e4 / sqrt(16 ln 1e8)) evaluated independently.
  CHECK(s.iterations == 582);
  CHECK(s.batch_size == 582);
  const double l = 2.0, kappa = 2.0;
  CHECK(s.step_x == doctest::Approx(1.0 / (16.0 * (kappa + 1.0) * (kappa + 1.0) * l))
                        .epsilon(1e-15));
  CHECK(s.step_y == doctest::Approx(1.0 / l).epsilon(1e-15));

  // Monotone in n eps.
  const auto s2 = suggest_sgda_schedule(constants, 20000, 16,
                                        PrivacyBudget{1.0, 1e-8});
  CHECK(s2.iterations > s.iterations);
}

TEST_CASE("suggest_privatediff_schedule restart ratio") {
  ProblemConstants constants;
  constants.lipschitz_x = 1.0;
  constants.lipschitz_y = 1.0;
  constants.smooth_x = 1.0;
  constants.smooth_y = 1.0;
  constants.smooth_xy = 1.0;
  constants.strong_concavity = 1.0;
  constants.loss_bound = 1.0;
  constants.diameter_y = 2.0;
  // d = 16, n eps = 1e4: ratio = (4e-4)^{2/3} ~ 5.43e-3; R = 100 -> T = 1.
  const auto s = suggest_privatediff_schedule(constants, 10000, 16,
                                              PrivacyBudget{1.0, 1e-6}, 100, 20);
  CHECK(s.rounds == 100);
  CHECK(s.restart_interval == 1);
  CHECK(s.inner_iterations == 20);
  CHECK(s.batch_size == privatediff_batch_size(10000, 1.0, 1));
  CHECK(s.noise.sigma_x1 > 0.0);

  // Larger R makes the theory ratio visible: T = round(5.43e-3 R).
  const auto s2 = suggest_privatediff_schedule(constants, 10000, 16,
                                               PrivacyBudget{1.0, 1e-6}, 2000, 20);
  CHECK(s2.restart_interval == 11);
}
