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

#include "dpminimax/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpmm {

namespace {

void check_regime(const PrivacyBudget& budget, int n,
                  std::vector<std::string>* warnings) {
  if (warnings == nullptr) {
    return;
  }
  if (budget.epsilon > 1.0) {
    warnings->push_back(
        "calibration: epsilon > 1 is outside the stated regime of the "
        "closed-form noise scales");
  }
  const double n_sq = static_cast<double>(n) * static_cast<double>(n);
  if (budget.delta > 1.0 / n_sq) {
    warnings->push_back(
        "calibration: delta > 1/n^2 is outside the stated regime of the "
        "closed-form noise scales");
  }
}

}  // namespace

NoiseScalesSgda calibrate_sgda(const PrivacyBudget& budget, int n, int T,
                               double c1, double c2,
                               std::vector<std::string>* warnings) {
  budget.validate();
  if (n < 1) {
    throw std::invalid_argument("calibrate_sgda: n must be positive");
  }
  if (T < 1) {
    throw std::invalid_argument("calibrate_sgda: T must be positive");
  }
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw std::invalid_argument(
        "calibrate_sgda: clipping thresholds must be positive");
  }
  check_regime(budget, n, warnings);
  const double root = std::sqrt(T * std::log(1.0 / budget.delta));
  const double denom = n * budget.epsilon;
  return NoiseScalesSgda{8.0 * c1 * root / denom, 8.0 * c2 * root / denom};
}

int sgda_batch_size(int n, double epsilon, int T) {
  if (n < 1 || T < 1 || !(epsilon > 0.0)) {
    throw std::invalid_argument("sgda_batch_size: invalid arguments");
  }
  const double m = std::floor(n * std::sqrt(epsilon / (4.0 * T)));
  return std::clamp(static_cast<int>(m), 1, n);
}

NoiseScalesPrivateDiff calibrate_privatediff(const PrivacyBudget& budget, int n,
                                             int R, int T, double c0, double mu,
                                             double beta, double loss_bound,
                                             std::vector<std::string>* warnings) {
  budget.validate();
  if (n < 1) {
    throw std::invalid_argument("calibrate_privatediff: n must be positive");
  }
  if (T < 1 || T > R) {
    throw std::invalid_argument("calibrate_privatediff: need 1 <= T <= R");
  }
  if (!(mu > 0.0)) {
    throw std::invalid_argument("calibrate_privatediff: mu must be positive");
  }
  if (c0 < 0.0 || beta < 0.0 || loss_bound < 0.0) {
    throw std::invalid_argument(
        "calibrate_privatediff: c0, beta, and the loss bound must be "
        "nonnegative");
  }
  check_regime(budget, n, warnings);
  const double log_term = std::log(1.0 / budget.delta);
  const double denom = n * budget.epsilon;
  NoiseScalesPrivateDiff scales;
  scales.sigma_x1 =
      4.0 * std::sqrt(static_cast<double>(R) / T * log_term) / denom;
  scales.sigma_x2 = 4.0 * std::sqrt(R * log_term) / denom;
  scales.sigma_y = 4.0 * (2.0 * c0 * c0 + beta * loss_bound) *
                   std::sqrt(R * log_term) / (mu * denom);
  return scales;
}

int privatediff_batch_size(int n, double epsilon, int T) {
  if (n < 1 || T < 1 || !(epsilon > 0.0)) {
    throw std::invalid_argument("privatediff_batch_size: invalid arguments");
  }
  const double m = std::floor(n * std::sqrt(epsilon / (8.0 * T)));
  return std::clamp(static_cast<int>(m), 1, n);
}

}  // namespace dpmm
