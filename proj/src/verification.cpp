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

#include "dpminimax/verification.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpmm {

nlohmann::json SensitivityReport::to_json() const {
  return {{"max_observed", max_observed},
          {"bound", bound},
          {"argmax_pair", {{"index", argmax_index}, {"pool", argmax_pool}}},
          {"pass", passes()}};
}

SensitivityReport sga_stability_check(
    const MinimaxProblem& base, std::span<const MinimaxProblem* const> neighbors,
    const Vector& x, const Vector& y0, const SgaStabilityOptions& options) {
  if (neighbors.empty()) {
    throw std::invalid_argument("sga_stability_check: no neighbors given");
  }
  if (options.seeds.empty()) {
    throw std::invalid_argument("sga_stability_check: no seeds given");
  }
  const auto& c = base.constants();
  SensitivityReport report;
  report.bound = (2.0 * options.clip_threshold * options.clip_threshold +
                  c.smooth_y * c.loss_bound) /
                 (c.strong_concavity * base.sample_count());
  for (const auto seed : options.seeds) {
    Rng rng_base(seed);
    const Vector y_base =
        minibatch_sga(base, x, y0, options.inner_iterations,
                      options.clip_threshold, options.batch_size, rng_base);
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
      if (neighbors[k]->sample_count() != base.sample_count()) {
        throw std::invalid_argument(
            "sga_stability_check: neighbor size mismatch");
      }
      // Shared seed: identical batch index sequences on D and D'.
      Rng rng_neighbor(seed);
      const Vector y_neighbor = minibatch_sga(
          *neighbors[k], x, y0, options.inner_iterations,
          options.clip_threshold, options.batch_size, rng_neighbor);
      const double dist = (y_base - y_neighbor).norm();
      if (dist > report.max_observed) {
        report.max_observed = dist;
        report.argmax_index = static_cast<int>(k);
        report.argmax_pool = static_cast<int>(seed);
      }
    }
  }
  return report;
}

nlohmann::json VarianceReport::to_json() const {
  return {{"estimator_norm_variance", estimator_norm_variance},
          {"grad_phi_norm_variance", grad_phi_norm_variance},
          {"mean_grad_phi_norm", mean_grad_phi_norm}};
}

VarianceReport variance_stats(std::span<const OptimizerTrace* const> traces) {
  if (traces.size() < 2) {
    throw std::invalid_argument("variance_stats: need at least two traces");
  }
  const std::size_t rounds = traces[0]->records.size();
  for (const auto* trace : traces) {
    if (trace->records.size() != rounds) {
      throw std::invalid_argument("variance_stats: trace length mismatch");
    }
  }
  VarianceReport report;
  report.estimator_norm_variance.resize(rounds);
  report.grad_phi_norm_variance.resize(rounds);
  report.mean_grad_phi_norm.resize(rounds);
  // Rounds where a field was not recorded (NaN) are excluded from that
  // field's statistics; with no finite entries the variance is 0.
  auto stats = [&](std::size_t r, auto&& getter, double& mean_out) {
    double mean = 0.0;
    int count = 0;
    for (const auto* trace : traces) {
      const double v = getter(trace->records[r]);
      if (!std::isnan(v)) {
        mean += v;
        ++count;
      }
    }
    if (count == 0) {
      mean_out = std::numeric_limits<double>::quiet_NaN();
      return 0.0;
    }
    mean /= count;
    double var = 0.0;
    for (const auto* trace : traces) {
      const double v = getter(trace->records[r]);
      if (!std::isnan(v)) {
        var += (v - mean) * (v - mean);
      }
    }
    mean_out = mean;
    return var / count;
  };
  for (std::size_t r = 0; r < rounds; ++r) {
    double unused = 0.0;
    report.estimator_norm_variance[r] = stats(
        r, [](const TraceRecord& rec) { return rec.estimator_norm; }, unused);
    report.grad_phi_norm_variance[r] = stats(
        r, [](const TraceRecord& rec) { return rec.grad_phi_norm; },
        report.mean_grad_phi_norm[r]);
  }
  return report;
}

SmoothnessReport smoothness_probe(const MinimaxProblem& problem,
                                  int probe_points, double step, Rng& rng) {
  if (probe_points < 1 || !(step > 0.0)) {
    throw std::invalid_argument("smoothness_probe: bad arguments");
  }
  const int d1 = problem.dim_x();
  const int d2 = problem.dim_y();
  SmoothnessReport report;

  auto random_unit = [&rng](int dim) {
    Vector u(dim);
    for (int i = 0; i < dim; ++i) {
      u[i] = rng.normal();
    }
    const double norm = u.norm();
    return norm > 0.0 ? Vector(u / norm) : Vector(Vector::Unit(dim, 0));
  };

  for (int p = 0; p < probe_points; ++p) {
    Vector x(d1);
    for (int i = 0; i < d1; ++i) {
      x[i] = rng.normal();
    }
    Vector y = problem.project_y(random_unit(d2));

    // ||d^2_xx L u|| via central differences of the x gradient.
    {
      const Vector u = random_unit(d1);
      const Vector gp = problem.averaged_grad_x(x + step * u, y);
      const Vector gm = problem.averaged_grad_x(x - step * u, y);
      report.measured_x =
          std::max(report.measured_x, (gp - gm).norm() / (2.0 * step));
    }
    {
      const Vector v = random_unit(d2);
      const Vector gp = problem.averaged_grad_y(x, y + step * v);
      const Vector gm = problem.averaged_grad_y(x, y - step * v);
      report.measured_y =
          std::max(report.measured_y, (gp - gm).norm() / (2.0 * step));
    }
    // Coupling block spectral norm: power iteration on B'B with
    // B u = d/dt grad_y L(x + t u, y).
    {
      Vector u = random_unit(d1);
      double estimate = 0.0;
      for (int it = 0; it < 12; ++it) {
        const Vector bu = (problem.averaged_grad_y(x + step * u, y) -
                           problem.averaged_grad_y(x - step * u, y)) /
                          (2.0 * step);
        const Vector btbu = (problem.averaged_grad_x(x, y + step * bu) -
                             problem.averaged_grad_x(x, y - step * bu)) /
                            (2.0 * step);
        const double norm = btbu.norm();
        if (norm == 0.0) {
          estimate = bu.norm();
          break;
        }
        estimate = std::sqrt(norm);
        u = btbu / norm;
      }
      report.measured_xy = std::max(report.measured_xy, estimate);
    }
  }
  return report;
}

}  // namespace dpmm
