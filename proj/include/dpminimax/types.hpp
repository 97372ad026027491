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

#ifndef DPMINIMAX_TYPES_HPP_
#define DPMINIMAX_TYPES_HPP_

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dpmm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown when an experiment configuration is malformed. The CLI maps this to
// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an optimizer iterate leaves the admissible region. Carries the
// round at which the blow-up was detected. The CLI maps this to exit code 3.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int round)
      : std::runtime_error(what), round_(round) {}
  int round() const { return round_; }

 private:
  int round_;
};

// Target (epsilon, delta) differential-privacy guarantee.
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 1e-6;

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw std::invalid_argument("PrivacyBudget: epsilon must be positive");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
      throw std::invalid_argument("PrivacyBudget: delta must lie in (0, 1)");
    }
  }
};

// Per-round Gaussian noise scales for DP-SGDA.
struct NoiseScalesSgda {
  double sigma_x = 0.0;
  double sigma_y = 0.0;
};

// Noise scales for PrivateDiff Minimax. sigma_x1 applies on restart rounds,
// sigma_x2 on gradient-difference rounds (both are multiplied by the active
// clipping radius), sigma_y is the output perturbation of the dual iterate.
struct NoiseScalesPrivateDiff {
  double sigma_x1 = 0.0;
  double sigma_x2 = 0.0;
  double sigma_y = 0.0;
};

}  // namespace dpmm

#endif  // DPMINIMAX_TYPES_HPP_
