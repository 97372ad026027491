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

#ifndef DPMINIMAX_SCHEDULE_HPP_
#define DPMINIMAX_SCHEDULE_HPP_

#include <optional>

#include "dpminimax/calibration.hpp"
#include "dpminimax/problem.hpp"
#include "dpminimax/types.hpp"

namespace dpmm {

// Theory-shaped hyperparameter drafts. Every Theta/O constant is taken as 1;
// overrides replace individual fields before the dependent quantities are
// derived.

struct SgdaSchedule {
  int iterations = 1;   // T = round(n eps / sqrt(d ln(1/delta)))
  int batch_size = 1;   // same formula, clamped to [1, n]
  double step_x = 0.0;  // 1 / (16 (kappa+1)^2 l)
  double step_y = 0.0;  // 1 / l
  double clip_x = 0.0;  // G_x
  double clip_y = 0.0;  // G_y
  NoiseScalesSgda noise;
};

SgdaSchedule suggest_sgda_schedule(const ProblemConstants& constants, int n,
                                   int d, const PrivacyBudget& budget,
                                   std::optional<int> iterations_override = {});

struct PrivateDiffSchedule {
  int rounds = 1;            // R
  int restart_interval = 1;  // T = clamp(round((sqrt(d)/(n eps))^{2/3} R), 1, R)
  int inner_iterations = 1;  // T2
  int batch_size = 1;        // max(1, floor(n sqrt(eps/(8T))))
  double step_x = 0.0;       // min{1/(l+kappa l), 1/(sqrt(T) l sigma_x2 sqrt(d))}
  double clip_sga = 0.0;     // C0 = G_y
  double clip_restart = 0.0; // C1 = G_x
  double clip_diff_slope = 0.0;  // C2 = (1+kappa) l
  double clip_diff_const = 0.0;  // C3 = 50 kappa G sqrt((ln(ln(T2)/theta)+1)/T2)
  NoiseScalesPrivateDiff noise;
};

PrivateDiffSchedule suggest_privatediff_schedule(
    const ProblemConstants& constants, int n, int d, const PrivacyBudget& budget,
    std::optional<int> rounds_override = {},
    std::optional<int> inner_override = {}, double failure_prob = 0.01);

}  // namespace dpmm

#endif  // DPMINIMAX_SCHEDULE_HPP_
