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

#ifndef DPMINIMAX_CALIBRATION_HPP_
#define DPMINIMAX_CALIBRATION_HPP_

#include <string>
#include <vector>

#include "dpminimax/types.hpp"

namespace dpmm {

// Closed-form DP-SGDA noise scales for T iterations on n samples:
//   sigma_x = 8 C1 sqrt(T ln(1/delta)) / (n epsilon)
//   sigma_y = 8 C2 sqrt(T ln(1/delta)) / (n epsilon)
// The stated regime is epsilon <= 1 and delta <= 1/n^2; outside it a warning
// is appended to `warnings` (experiments at larger epsilon are legitimate).
NoiseScalesSgda calibrate_sgda(const PrivacyBudget& budget, int n, int T,
                               double c1, double c2,
                               std::vector<std::string>* warnings = nullptr);

// Companion batch size for the DP-SGDA calibration:
// min(n, max(1, floor(n sqrt(epsilon / (4 T))))).
int sgda_batch_size(int n, double epsilon, int T);

// Closed-form PrivateDiff Minimax noise scales for R rounds with restart
// interval T:
//   sigma_x1 = 4 sqrt((R/T) ln(1/delta)) / (n epsilon)
//   sigma_x2 = 4 sqrt(R ln(1/delta)) / (n epsilon)
//   sigma_y  = 4 (2 c0^2 + beta M) sqrt(R ln(1/delta)) / (mu n epsilon)
// sigma_x1 and sigma_x2 are multiplied by the active clipping radius at use;
// sigma_y is the full standard deviation of the dual output perturbation.
NoiseScalesPrivateDiff calibrate_privatediff(
    const PrivacyBudget& budget, int n, int R, int T, double c0, double mu,
    double beta, double loss_bound, std::vector<std::string>* warnings = nullptr);

// Companion batch size: min(n, max(1, floor(n sqrt(epsilon / (8 T))))).
int privatediff_batch_size(int n, double epsilon, int T);

}  // namespace dpmm

#endif  // DPMINIMAX_CALIBRATION_HPP_
