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

#include "dpminimax/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpmm {

namespace {

void check_inputs(const ProblemConstants& constants, int n, int d,
                  const PrivacyBudget& budget) {
  budget.validate();
  if (n < 1 || d < 1) {
    throw std::invalid_argument("suggest_schedule: n and d must be positive");
  }
  if (!(constants.smoothness() > 0.0) || !(constants.strong_concavity > 0.0)) {
    throw std::invalid_argument(
        "suggest_schedule: problem constants must be positive");
  }
}

}  // namespace

SgdaSchedule suggest_sgda_schedule(const ProblemConstants& constants, int n,
                                   int d, const PrivacyBudget& budget,
                                   std::optional<int> iterations_override) {
  check_inputs(constants, n, d, budget);
  const double n_eps = n * budget.epsilon;
  const double log_term = std::log(1.0 / budget.delta);
  const double raw = n_eps / std::sqrt(d * log_term);

  SgdaSchedule s;
  s.iterations = iterations_override.value_or(
      std::max(1, static_cast<int>(std::llround(raw))));
  s.batch_size = std::clamp(static_cast<int>(std::llround(raw)), 1, n);
  const double l = constants.smoothness();
  const double kappa = constants.condition_number();
  s.step_x = 1.0 / (16.0 * (kappa + 1.0) * (kappa + 1.0) * l);
  s.step_y = 1.0 / l;
  s.clip_x = constants.lipschitz_x;
  s.clip_y = constants.lipschitz_y;
  s.noise = calibrate_sgda(budget, n, s.iterations, s.clip_x, s.clip_y);
  return s;
}

PrivateDiffSchedule suggest_privatediff_schedule(
    const ProblemConstants& constants, int n, int d, const PrivacyBudget& budget,
    std::optional<int> rounds_override, std::optional<int> inner_override,
    double failure_prob) {
  check_inputs(constants, n, d, budget);
  if (!(failure_prob > 0.0) || !(failure_prob < 1.0)) {
    throw std::invalid_argument(
        "suggest_privatediff_schedule: failure_prob must lie in (0, 1)");
  }
  const double n_eps = n * budget.epsilon;
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  PrivateDiffSchedule s;
  if (rounds_override.has_value()) {
    s.rounds = std::max(1, *rounds_override);
  } else {
    // eps_opt = d^{2/3} / (n eps)^{4/3}; R = max(1/eps_opt, d/((n eps)^2 eps_opt^2)).
    const double eps_opt = std::pow(d, 2.0 / 3.0) / std::pow(n_eps, 4.0 / 3.0);
    const double r1 = 1.0 / eps_opt;
    const double r2 = d / (n_eps * n_eps * eps_opt * eps_opt);
    s.rounds = std::max(1, static_cast<int>(std::llround(std::max(r1, r2))));
  }
  const double ratio = std::pow(sqrt_d / n_eps, 2.0 / 3.0);
  s.restart_interval = std::clamp(
      static_cast<int>(std::llround(ratio * s.rounds)), 1, s.rounds);

  if (inner_override.has_value()) {
    s.inner_iterations = std::max(1, *inner_override);
  } else {
    const double t1 = std::pow(n_eps, 4.0 / 3.0) / std::pow(d, 2.0 / 3.0);
    const double t2 = static_cast<double>(s.restart_interval) * s.rounds *
                      std::pow(d, 1.0 / 3.0) / std::pow(n_eps, 2.0 / 3.0);
    s.inner_iterations =
        std::max(1, static_cast<int>(std::llround(std::max(t1, t2))));
  }
  s.batch_size = privatediff_batch_size(n, budget.epsilon, s.restart_interval);

  const double l = constants.smoothness();
  const double kappa = constants.condition_number();
  const double g = constants.lipschitz();
  s.clip_sga = constants.lipschitz_y;
  s.clip_restart = constants.lipschitz_x;
  s.clip_diff_slope = (1.0 + kappa) * l;
  const double t2d = std::max(3.0, static_cast<double>(s.inner_iterations));
  s.clip_diff_const = 50.0 * kappa * g *
                      std::sqrt((std::log(std::log(t2d) / failure_prob) + 1.0) / t2d);

  s.noise = calibrate_privatediff(budget, n, s.rounds, s.restart_interval,
                                  s.clip_sga, constants.strong_concavity,
                                  constants.smooth_y, constants.loss_bound);
  s.step_x = std::min(
      1.0 / ((1.0 + kappa) * l),
      1.0 / (std::sqrt(static_cast<double>(s.restart_interval)) * l *
             std::max(s.noise.sigma_x2, 1e-12) * sqrt_d));
  return s;
}

}  // namespace dpmm
