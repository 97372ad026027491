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

#ifndef DPMINIMAX_OPTIMIZERS_HPP_
#define DPMINIMAX_OPTIMIZERS_HPP_

#include <cstdint>
#include <limits>
#include <vector>

#include "dpminimax/accountant.hpp"
#include "dpminimax/problem.hpp"
#include "dpminimax/rng.hpp"
#include "dpminimax/types.hpp"

namespace dpmm {

// Disables clipping when passed as a threshold. Only oracle-equivalence and
// reference runs may use it; private runs need finite thresholds.
inline constexpr double kNoClipping = std::numeric_limits<double>::infinity();

struct SgdaConfig {
  int iterations = 1;        // T; stored iterates are rounds 0..T
  int batch_size = 1;        // m
  double step_x = 0.1;       // eta_x
  double step_y = 0.1;       // eta_y
  double clip_x = 1.0;       // C1
  double clip_y = 1.0;       // C2
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  std::uint64_t seed = 0;
  Vector x0;                 // empty -> zeros
  Vector y0;
  int metrics_stride = 1;    // Phi/loss every k rounds; 0 records only round 0 and the last
  bool store_iterates = true;

  void validate() const;
};

struct PrivateDiffConfig {
  int rounds = 1;            // R; released iterates are rounds 1..R
  int restart_interval = 1;  // T
  int inner_iterations = 1;  // T2 for the inner SGA
  int batch_size = 1;        // m, both for d_r and the SGA steps
  double step_x = 0.1;       // eta_x
  double clip_sga = 1.0;     // C0
  double clip_restart = 1.0; // C1
  double clip_diff_slope = 1.0;  // C2 in C_{2,r} = C2 ||x_r - x_{r-1}|| + C3
  double clip_diff_const = 0.0;  // C3
  double sigma_x1 = 0.0;
  double sigma_x2 = 0.0;
  double sigma_y = 0.0;
  std::uint64_t seed = 0;
  Vector x0;
  Vector y0;
  int metrics_stride = 1;
  bool store_iterates = true;

  void validate() const;
};

struct TraceRecord {
  int round = 0;
  Vector x;                   // empty when iterate storage is off
  Vector y;                   // released dual iterate (perturbed for PrivateDiff)
  Vector y_inner;             // pre-perturbation dual iterate (PrivateDiff only)
  double grad_phi_norm = std::numeric_limits<double>::quiet_NaN();
  double loss = std::numeric_limits<double>::quiet_NaN();
  double estimator_norm = std::numeric_limits<double>::quiet_NaN();
  double noise_x_norm = 0.0;
  double noise_x_stddev = 0.0;
  double c2r = std::numeric_limits<double>::quiet_NaN();
  int clipped_count = 0;
  double wallclock_ms = 0.0;
};

struct OptimizerTrace {
  std::vector<TraceRecord> records;
};

struct OptimizerOutput {
  Vector x_priv;
  Vector y_priv;
  int selected_round = 0;
  OptimizerTrace trace;
  // Mechanism invocations actually executed, for the accountant.
  MechanismSchedule mechanisms;
};

// Algorithm: DP stochastic gradient descent ascent. Per round t = 0..T-1:
// draw a batch without replacement, then
//   x_{t+1} = x_t - eta_x (mean_j clip(grad_x f(x_t, y_t; z_j), C1) + xi_t)
//   y_{t+1} = proj_Y(y_t + eta_y (mean_j clip(grad_y f(x_t, y_t; z_j), C2) + zeta_t))
// The output tuple is sampled uniformly from the stored rounds 0..T.
OptimizerOutput dp_sgda(const MinimaxProblem& problem, const SgdaConfig& config);

// Projected clipped stochastic ascent on L(x, .) with step 1/(mu i) at step
// i = 1..iterations; returns the final iterate.
Vector minibatch_sga(const MinimaxProblem& problem, const Vector& x,
                     const Vector& y0, int iterations, double clip_threshold,
                     int batch_size, Rng& rng);

// Algorithm: PrivateDiff Minimax. Per round r = 0..R-1: inner SGA refreshes
// the dual from the previous (perturbed) iterate; on restart rounds
// (r % T == 0) the primal estimator re-anchors to a clipped batch gradient,
// otherwise it accumulates the clipped paired gradient difference with radius
// C_{2,r} = C2 ||x_r - x_{r-1}|| + C3 and reuses round r-1's batch for the
// subtrahend. Gaussian noise of stddev sigma C is added to the accumulated
// estimator; the dual is released with output perturbation sigma_y. The output
// tuple is uniform over rounds 1..R.
OptimizerOutput privatediff_minimax(const MinimaxProblem& problem,
                                    const PrivateDiffConfig& config);

// Deterministic full-batch gradient descent ascent; reference baseline.
OptimizerOutput gda_reference(const MinimaxProblem& problem, int iterations,
                              double step_x, double step_y, Vector x0 = {},
                              Vector y0 = {}, int metrics_stride = 1);

struct SelectedIterate {
  int round = 0;
  Vector x;
  Vector y;
};

// Uniform draw over the trace records with round >= first_round. Requires
// stored iterates.
SelectedIterate select_uniform_iterate(const OptimizerTrace& trace,
                                       int first_round, Rng& rng);

}  // namespace dpmm

#endif  // DPMINIMAX_OPTIMIZERS_HPP_
