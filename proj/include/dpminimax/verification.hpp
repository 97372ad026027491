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

#ifndef DPMINIMAX_VERIFICATION_HPP_
#define DPMINIMAX_VERIFICATION_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dpminimax/optimizers.hpp"
#include "dpminimax/problem.hpp"
#include "dpminimax/rng.hpp"
#include "dpminimax/types.hpp"

namespace dpmm {

struct SensitivityReport {
  double max_observed = 0.0;
  double bound = 0.0;
  int argmax_index = -1;  // dataset entry whose replacement attains the max
  int argmax_pool = -1;   // pool entry it was replaced with

  bool passes() const { return max_observed <= bound; }
  nlohmann::json to_json() const;
};

// Exhaustive neighboring-dataset sensitivity under the replacement model:
// max over all single-entry replacements (dataset entry i, pool entry k) of
// ||query(D) - query(D')||. Datasets beyond max_dataset_size are rejected.
template <typename Sample>
SensitivityReport sensitivity_bruteforce(
    const std::function<Vector(const std::vector<Sample>&)>& query,
    const std::vector<Sample>& dataset, const std::vector<Sample>& pool,
    double bound, int max_dataset_size = 8) {
  if (static_cast<int>(dataset.size()) > max_dataset_size) {
    throw std::invalid_argument(
        "sensitivity_bruteforce: dataset too large for exhaustive enumeration");
  }
  if (dataset.empty() || pool.empty()) {
    throw std::invalid_argument("sensitivity_bruteforce: empty dataset or pool");
  }
  const Vector base = query(dataset);
  SensitivityReport report;
  report.bound = bound;
  std::vector<Sample> neighbor = dataset;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (std::size_t k = 0; k < pool.size(); ++k) {
      neighbor[i] = pool[k];
      const double dist = (query(neighbor) - base).norm();
      if (dist > report.max_observed) {
        report.max_observed = dist;
        report.argmax_index = static_cast<int>(i);
        report.argmax_pool = static_cast<int>(k);
      }
    }
    neighbor[i] = dataset[i];
  }
  return report;
}

struct SgaStabilityOptions {
  int inner_iterations = 100;  // T2
  double clip_threshold = 1.0; // C0
  int batch_size = 1;
  std::vector<std::uint64_t> seeds;
};

// Coupled-run stability of the inner SGA: runs Mini-batch SGA on the base
// dataset and on each neighbor with identical sampling randomness (shared
// seed) and reports max ||y_T2(D) - y_T2(D')|| against the analytic bound
// (2 C0^2 + beta M) / (mu n) with beta = l_y and M from the base constants.
SensitivityReport sga_stability_check(
    const MinimaxProblem& base,
    std::span<const MinimaxProblem* const> neighbors, const Vector& x,
    const Vector& y0, const SgaStabilityOptions& options);

struct VarianceReport {
  // One entry per round: cross-seed variance of the private estimator norm,
  // of the analytic gradient norm, and the cross-seed mean gradient norm.
  std::vector<double> estimator_norm_variance;
  std::vector<double> grad_phi_norm_variance;
  std::vector<double> mean_grad_phi_norm;

  nlohmann::json to_json() const;
};

// Cross-seed per-round statistics over traces from identical configs.
// Traces must have equal lengths; at least two are required.
VarianceReport variance_stats(std::span<const OptimizerTrace* const> traces);

struct SmoothnessReport {
  double measured_x = 0.0;   // max ||hvp_xx||
  double measured_y = 0.0;
  double measured_xy = 0.0;  // spectral norm estimate of the coupling block

  bool within_declared(const ProblemConstants& c, double tol = 1.01) const {
    return measured_x <= c.smooth_x * tol && measured_y <= c.smooth_y * tol &&
           measured_xy <= c.smooth_xy * tol;
  }
};

// Empirical smoothness of the averaged loss via central-difference
// Hessian-vector products at random feasible points, with a short power
// iteration per point for the coupling block.
SmoothnessReport smoothness_probe(const MinimaxProblem& problem,
                                  int probe_points, double step, Rng& rng);

}  // namespace dpmm

#endif  // DPMINIMAX_VERIFICATION_HPP_
