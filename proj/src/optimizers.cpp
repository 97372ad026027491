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

#include "dpminimax/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dpminimax/mechanisms.hpp"

namespace dpmm {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Vector resolve_initial(const Vector& given, int dim, const char* what) {
  if (given.size() == 0) {
    return Vector::Zero(dim);
  }
  if (given.size() != dim) {
    throw std::invalid_argument(std::string(what) +
                                ": initial iterate dimension mismatch");
  }
  return given;
}

void check_finite(const Vector& x, double initial_scale, int round) {
  const double limit = 1e6 * std::max(1.0, initial_scale);
  if (!x.allFinite() || x.norm() > limit) {
    throw DivergenceError(
        "iterate diverged at round " + std::to_string(round), round);
  }
}

// Sampled Gaussian noise with recorded norm; sigma == 0 adds nothing.
Vector draw_noise(int dim, double sigma, Rng& rng, double* norm_out) {
  Vector noise = Vector::Zero(dim);
  if (sigma > 0.0) {
    for (int i = 0; i < dim; ++i) {
      noise[i] = sigma * rng.normal();
    }
  }
  if (norm_out != nullptr) {
    *norm_out = noise.norm();
  }
  return noise;
}

void record_metrics(const MinimaxProblem& problem, const Vector& x,
                    const Vector& y, int round, int stride, int last_round,
                    TraceRecord& rec) {
  const bool due =
      (stride > 0 && round % stride == 0) || round == 0 || round == last_round;
  if (!due) {
    return;
  }
  if (problem.has_phi_oracle()) {
    try {
      rec.grad_phi_norm = problem.phi(x).grad.norm();
    } catch (const std::exception&) {
      // oracle undefined at this point (e.g. dual maximizer on the boundary)
    }
  }
  rec.loss = problem.averaged_loss(x, y);
}

void append_subsampled(MechanismSchedule& schedule, int m, int n,
                       double noise_std, double sensitivity, int invocations) {
  if (invocations <= 0) {
    return;
  }
  const double multiplier =
      sensitivity > 0.0 && noise_std > 0.0 ? noise_std / sensitivity : 0.0;
  if (m < n) {
    schedule.push_back(
        SubsampledMechanismSpec{m, n, multiplier, invocations});
  } else {
    schedule.push_back(GaussianMechanismSpec{multiplier, invocations});
  }
}

}  // namespace

void SgdaConfig::validate() const {
  if (iterations < 0) {
    throw std::invalid_argument("SgdaConfig: iterations must be nonnegative");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("SgdaConfig: batch_size must be positive");
  }
  if (!(step_x > 0.0) || !(step_y > 0.0)) {
    throw std::invalid_argument("SgdaConfig: step sizes must be positive");
  }
  if (!(clip_x > 0.0) || !(clip_y > 0.0)) {
    throw std::invalid_argument("SgdaConfig: clipping thresholds must be positive");
  }
  if (sigma_x < 0.0 || sigma_y < 0.0) {
    throw std::invalid_argument("SgdaConfig: noise scales must be nonnegative");
  }
  if (sigma_x > 0.0 && !std::isfinite(clip_x)) {
    throw std::invalid_argument(
        "SgdaConfig: private runs need a finite x clipping threshold");
  }
  if (sigma_y > 0.0 && !std::isfinite(clip_y)) {
    throw std::invalid_argument(
        "SgdaConfig: private runs need a finite y clipping threshold");
  }
}

OptimizerOutput dp_sgda(const MinimaxProblem& problem, const SgdaConfig& config) {
  config.validate();
  const int n = problem.sample_count();
  const int m = std::min(config.batch_size, n);
  const int T = config.iterations;

  Rng rng(config.seed);
  Rng selector(Rng::mix(config.seed, 1));

  Vector x = resolve_initial(config.x0, problem.dim_x(), "dp_sgda");
  Vector y = resolve_initial(config.y0, problem.dim_y(), "dp_sgda");
  const double initial_scale = x.norm();

  OptimizerOutput out;
  out.trace.records.reserve(static_cast<std::size_t>(T) + 1);

  // Reservoir over rounds 0..T when iterates are not stored.
  Vector res_x = x, res_y = y;
  int res_round = 0;

  auto push_record = [&](int round, const Vector& xi, const Vector& yi,
                         double est_norm, double noise_norm, double noise_std,
                         int clipped, Clock::time_point start) {
    TraceRecord rec;
    rec.round = round;
    if (config.store_iterates) {
      rec.x = xi;
      rec.y = yi;
    }
    rec.estimator_norm = est_norm;
    rec.noise_x_norm = noise_norm;
    rec.noise_x_stddev = noise_std;
    rec.clipped_count = clipped;
    record_metrics(problem, xi, yi, round, config.metrics_stride, T, rec);
    rec.wallclock_ms = elapsed_ms(start);
    out.trace.records.push_back(std::move(rec));
  };

  const auto start = Clock::now();
  push_record(0, x, y, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0,
              start);

  for (int t = 0; t < T; ++t) {
    const auto batch = sample_batch(n, m, rng);
    int clipped_x = 0;
    int clipped_y = 0;
    Vector gx = problem.batch_grad_x_clipped(x, y, batch, config.clip_x, &clipped_x);
    Vector gy = problem.batch_grad_y_clipped(x, y, batch, config.clip_y, &clipped_y);

    double noise_norm = 0.0;
    const Vector xi = draw_noise(problem.dim_x(), config.sigma_x, rng, &noise_norm);
    const Vector zeta = draw_noise(problem.dim_y(), config.sigma_y, rng, nullptr);

    const Vector estimator = gx + xi;
    x -= config.step_x * estimator;
    y = problem.project_y(y + config.step_y * (gy + zeta));
    check_finite(x, initial_scale, t + 1);

    if (!config.store_iterates) {
      // Reservoir over the T+1 candidate rounds.
      const int seen = t + 2;
      if (selector.uniform() < 1.0 / seen) {
        res_x = x;
        res_y = y;
        res_round = t + 1;
      }
    }
    push_record(t + 1, x, y, estimator.norm(), noise_norm, config.sigma_x,
                clipped_x + clipped_y, start);
  }

  if (config.store_iterates) {
    const SelectedIterate pick = select_uniform_iterate(out.trace, 0, selector);
    out.x_priv = pick.x;
    out.y_priv = pick.y;
    out.selected_round = pick.round;
  } else {
    out.x_priv = res_x;
    out.y_priv = res_y;
    out.selected_round = res_round;
  }

  append_subsampled(out.mechanisms, m, n, config.sigma_x, 2.0 * config.clip_x / m, T);
  append_subsampled(out.mechanisms, m, n, config.sigma_y, 2.0 * config.clip_y / m, T);
  return out;
}

Vector minibatch_sga(const MinimaxProblem& problem, const Vector& x,
                     const Vector& y0, int iterations, double clip_threshold,
                     int batch_size, Rng& rng) {
  if (iterations < 1) {
    throw std::invalid_argument("minibatch_sga: iterations must be >= 1");
  }
  if (!(clip_threshold > 0.0)) {
    throw std::invalid_argument("minibatch_sga: clip threshold must be positive");
  }
  const double mu = problem.constants().strong_concavity;
  if (!(mu > 0.0)) {
    throw std::invalid_argument("minibatch_sga: problem must declare mu > 0");
  }
  const int n = problem.sample_count();
  const int m = std::min(batch_size, n);
  Vector y = y0;
  // Step index starts at 1 so the 1/(mu i) schedule is defined everywhere.
  for (int i = 1; i <= iterations; ++i) {
    const auto batch = sample_batch(n, m, rng);
    const Vector g = problem.batch_grad_y_clipped(x, y, batch, clip_threshold);
    y = problem.project_y(y + (1.0 / (mu * i)) * g);
  }
  return y;
}

void PrivateDiffConfig::validate() const {
  if (rounds < 1) {
    throw std::invalid_argument("PrivateDiffConfig: rounds must be >= 1");
  }
  if (restart_interval < 1 || restart_interval > rounds) {
    throw std::invalid_argument(
        "PrivateDiffConfig: need 1 <= restart_interval <= rounds");
  }
  if (inner_iterations < 1) {
    throw std::invalid_argument("PrivateDiffConfig: inner_iterations must be >= 1");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("PrivateDiffConfig: batch_size must be positive");
  }
  if (!(step_x > 0.0)) {
    throw std::invalid_argument("PrivateDiffConfig: step_x must be positive");
  }
  if (!(clip_sga > 0.0) || !(clip_restart > 0.0) || clip_diff_slope < 0.0 ||
      clip_diff_const < 0.0) {
    throw std::invalid_argument("PrivateDiffConfig: bad clipping parameters");
  }
  if (sigma_x1 < 0.0 || sigma_x2 < 0.0 || sigma_y < 0.0) {
    throw std::invalid_argument("PrivateDiffConfig: noise scales must be nonnegative");
  }
  if (sigma_x1 > 0.0 && !std::isfinite(clip_restart)) {
    throw std::invalid_argument(
        "PrivateDiffConfig: private runs need a finite restart threshold");
  }
  if (sigma_x2 > 0.0 &&
      !(std::isfinite(clip_diff_slope) && std::isfinite(clip_diff_const))) {
    throw std::invalid_argument(
        "PrivateDiffConfig: private runs need finite difference thresholds");
  }
  if (sigma_y > 0.0 && !std::isfinite(clip_sga)) {
    throw std::invalid_argument(
        "PrivateDiffConfig: private runs need a finite SGA threshold");
  }
}

OptimizerOutput privatediff_minimax(const MinimaxProblem& problem,
                                    const PrivateDiffConfig& config) {
  config.validate();
  const int n = problem.sample_count();
  const int m = std::min(config.batch_size, n);
  const int R = config.rounds;
  const int T = config.restart_interval;

  Rng rng(config.seed);
  Rng selector(Rng::mix(config.seed, 1));

  Vector x = resolve_initial(config.x0, problem.dim_x(), "privatediff");
  Vector y_tilde = resolve_initial(config.y0, problem.dim_y(), "privatediff");
  const double initial_scale = x.norm();

  Vector v_tilde = Vector::Zero(problem.dim_x());
  Vector prev_x;
  std::vector<int> prev_batch;  // retained batch for the difference subtrahend

  OptimizerOutput out;
  out.trace.records.reserve(static_cast<std::size_t>(R));

  Vector res_x = x, res_y = y_tilde;
  int res_round = 0;
  int restarts = 0;

  const auto start = Clock::now();
  Vector diff(problem.dim_x());
  Vector g_cur(problem.dim_x());
  Vector g_prev(problem.dim_x());

  for (int r = 0; r < R; ++r) {
    const auto batch = sample_batch(n, m, rng);
    const Vector y_start = y_tilde;  // step 3: y_r = y~_r
    const Vector y_next = minibatch_sga(problem, x, y_start,
                                        config.inner_iterations,
                                        config.clip_sga, m, rng);

    double sigma = 0.0;
    double radius = 0.0;
    double c2r = std::numeric_limits<double>::quiet_NaN();
    int clipped = 0;
    Vector d_r;
    if (r % T == 0) {
      d_r = problem.batch_grad_x_clipped(x, y_next, batch, config.clip_restart,
                                         &clipped);
      sigma = config.sigma_x1;
      radius = config.clip_restart;
      v_tilde.setZero();
      ++restarts;
    } else {
      const double movement = (x - prev_x).norm();
      c2r = std::isfinite(config.clip_diff_slope)
                ? config.clip_diff_slope * movement + config.clip_diff_const
                : kNoClipping;
      // Paired difference: minuend on this round's batch at (x_r, y_{r+1}),
      // subtrahend on the retained batch of round r-1 at (x_{r-1}, y_r).
      // y_r is the value rebound at the top of this round, i.e. the
      // perturbed dual y_start.
      Vector sum = Vector::Zero(problem.dim_x());
      for (int j = 0; j < m; ++j) {
        problem.sample_grad_x(x, y_next, batch[static_cast<std::size_t>(j)], g_cur);
        problem.sample_grad_x(prev_x, y_start,
                              prev_batch[static_cast<std::size_t>(j)], g_prev);
        diff = g_cur - g_prev;
        const double norm = diff.norm();
        if (norm > c2r) {
          sum += diff * (c2r / norm);
          ++clipped;
        } else {
          sum += diff;
        }
      }
      d_r = sum / static_cast<double>(m);
      sigma = config.sigma_x2;
      radius = c2r;
    }

    const Vector v = d_r + v_tilde;
    double noise_norm = 0.0;
    const double noise_std = sigma > 0.0 ? sigma * radius : 0.0;
    const Vector xi = draw_noise(problem.dim_x(), noise_std, rng, &noise_norm);
    v_tilde = v + xi;

    prev_x = x;
    prev_batch = batch;

    x -= config.step_x * v_tilde;
    check_finite(x, initial_scale, r + 1);

    const Vector zeta = draw_noise(problem.dim_y(), config.sigma_y, rng, nullptr);
    y_tilde = y_next + zeta;

    if (!config.store_iterates) {
      const int seen = r + 1;
      if (selector.uniform() < 1.0 / seen) {
        res_x = x;
        res_y = y_tilde;
        res_round = r + 1;
      }
    }

    TraceRecord rec;
    rec.round = r + 1;
    if (config.store_iterates) {
      rec.x = x;
      rec.y = y_tilde;
      rec.y_inner = y_next;
    }
    rec.estimator_norm = v_tilde.norm();
    rec.noise_x_norm = noise_norm;
    rec.noise_x_stddev = noise_std;
    rec.c2r = c2r;
    rec.clipped_count = clipped;
    record_metrics(problem, x, y_tilde, r + 1, config.metrics_stride, R, rec);
    rec.wallclock_ms = elapsed_ms(start);
    out.trace.records.push_back(std::move(rec));
  }

  if (config.store_iterates) {
    const SelectedIterate pick = select_uniform_iterate(out.trace, 1, selector);
    out.x_priv = pick.x;
    out.y_priv = pick.y;
    out.selected_round = pick.round;
  } else {
    out.x_priv = res_x;
    out.y_priv = res_y;
    out.selected_round = res_round;
  }

  // The noise stddev is sigma times the active clipping radius while the
  // sensitivity is twice that radius over m, so both primal mechanisms have
  // multiplier m sigma / 2 regardless of the radius.
  append_subsampled(out.mechanisms, m, n, config.sigma_x1, 2.0 / m, restarts);
  append_subsampled(out.mechanisms, m, n, config.sigma_x2, 2.0 / m, R - restarts);
  // Dual output perturbation against the SGA stability sensitivity
  // (2 C0^2 + beta M) / (mu n).
  const auto& c = problem.constants();
  const double y_sensitivity =
      (2.0 * config.clip_sga * config.clip_sga + c.smooth_y * c.loss_bound) /
      (c.strong_concavity * n);
  const double y_multiplier =
      config.sigma_y > 0.0 && std::isfinite(y_sensitivity) && y_sensitivity > 0.0
          ? config.sigma_y / y_sensitivity
          : 0.0;
  out.mechanisms.push_back(GaussianMechanismSpec{y_multiplier, R});
  return out;
}

OptimizerOutput gda_reference(const MinimaxProblem& problem, int iterations,
                              double step_x, double step_y, Vector x0, Vector y0,
                              int metrics_stride) {
  if (iterations < 0) {
    throw std::invalid_argument("gda_reference: iterations must be nonnegative");
  }
  Vector x = resolve_initial(x0, problem.dim_x(), "gda_reference");
  Vector y = resolve_initial(y0, problem.dim_y(), "gda_reference");
  const double initial_scale = x.norm();

  OptimizerOutput out;
  const auto start = Clock::now();
  auto push = [&](int round) {
    TraceRecord rec;
    rec.round = round;
    rec.x = x;
    rec.y = y;
    record_metrics(problem, x, y, round, metrics_stride, iterations, rec);
    rec.wallclock_ms = elapsed_ms(start);
    out.trace.records.push_back(std::move(rec));
  };
  push(0);
  for (int t = 0; t < iterations; ++t) {
    const Vector gx = problem.averaged_grad_x(x, y);
    const Vector gy = problem.averaged_grad_y(x, y);
    x -= step_x * gx;
    y = problem.project_y(y + step_y * gy);
    check_finite(x, initial_scale, t + 1);
    push(t + 1);
  }
  out.x_priv = x;
  out.y_priv = y;
  out.selected_round = iterations;
  return out;
}

SelectedIterate select_uniform_iterate(const OptimizerTrace& trace,
                                       int first_round, Rng& rng) {
  std::vector<const TraceRecord*> eligible;
  for (const auto& rec : trace.records) {
    if (rec.round >= first_round) {
      eligible.push_back(&rec);
    }
  }
  if (eligible.empty()) {
    throw std::invalid_argument("select_uniform_iterate: empty trace range");
  }
  const TraceRecord* pick = eligible[static_cast<std::size_t>(
      rng.below(static_cast<int>(eligible.size())))];
  if (pick->x.size() == 0) {
    throw std::invalid_argument(
        "select_uniform_iterate: trace does not store iterates");
  }
  return SelectedIterate{pick->round, pick->x, pick->y};
}

}  // namespace dpmm
