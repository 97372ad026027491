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

#include "dpminimax/problems/quadratic.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "dpminimax/projection.hpp"

namespace dpmm {

namespace {

// Per-sample bounds over the configured x box and the y ball, from the data.
ProblemConstants derive_constants(const QuadraticSpec& spec) {
  double max_w = 0.0;
  double max_a = 0.0;
  for (const auto& sample : spec.samples) {
    max_w = std::max(max_w, sample.w.norm());
    // Frobenius norm as a spectral-norm upper bound.
    max_a = std::max(max_a, sample.a.norm());
  }
  const double s = std::abs(spec.sin_weight);
  const double y_radius = spec.diameter_y / 2.0;
  const double r = spec.x_box;

  ProblemConstants c;
  c.lipschitz_x = s * max_w + spec.ridge * r + max_a * y_radius;
  c.lipschitz_y = max_a * r + spec.mu * y_radius;
  c.smooth_x = s * max_w * max_w + spec.ridge;
  c.smooth_y = spec.mu;
  c.smooth_xy = max_a;
  c.strong_concavity = spec.mu;
  c.loss_bound = s + 0.5 * spec.ridge * r * r + max_a * r * y_radius +
                 0.5 * spec.mu * y_radius * y_radius;
  c.diameter_y = spec.diameter_y;
  return c;
}

}  // namespace

QuadraticSpec random_quadratic_spec(int n, int d1, int d2, double sin_weight,
                                    double ridge, double mu, double diameter_y,
                                    double x_box, double coupling_spread,
                                    Rng& rng) {
  if (n < 1 || d1 < 1 || d2 < 1) {
    throw std::invalid_argument("random_quadratic_spec: bad dimensions");
  }
  QuadraticSpec spec;
  spec.sin_weight = sin_weight;
  spec.ridge = ridge;
  spec.mu = mu;
  spec.diameter_y = diameter_y;
  spec.x_box = x_box;
  spec.samples.reserve(n);

  // Shared coupling direction plus per-sample spread, scaled so the mean
  // coupling has order-one spectral norm.
  Matrix base(d1, d2);
  for (int i = 0; i < d1; ++i) {
    for (int j = 0; j < d2; ++j) {
      base(i, j) = rng.normal();
    }
  }
  base /= std::max(1.0, base.norm());

  const double w_scale = 1.0 / std::sqrt(static_cast<double>(d1));
  for (int k = 0; k < n; ++k) {
    QuadraticSample sample;
    sample.w = Vector(d1);
    for (int i = 0; i < d1; ++i) {
      sample.w[i] = w_scale * rng.normal();
    }
    Matrix noise(d1, d2);
    for (int i = 0; i < d1; ++i) {
      for (int j = 0; j < d2; ++j) {
        noise(i, j) = rng.normal();
      }
    }
    sample.a = base + coupling_spread / std::sqrt(double(d1 * d2)) * noise;
    sample.offset = rng.uniform();
    spec.samples.push_back(std::move(sample));
  }
  return spec;
}

QuadraticProblem::QuadraticProblem(QuadraticSpec spec)
    : MinimaxProblem(static_cast<int>(spec.samples.size()),
                     static_cast<int>(spec.samples.empty() ? 0
                                                           : spec.samples[0].w.size()),
                     static_cast<int>(spec.samples.empty() ? 0
                                                           : spec.samples[0].a.cols()),
                     derive_constants(spec)),
      spec_(std::move(spec)) {
  if (spec_.samples.empty()) {
    throw std::invalid_argument("QuadraticProblem: need at least one sample");
  }
  if (!(spec_.mu > 0.0)) {
    throw std::invalid_argument("QuadraticProblem: mu must be positive");
  }
  mean_coupling_ = Matrix::Zero(dim_x(), dim_y());
  for (const auto& sample : spec_.samples) {
    mean_coupling_ += sample.a;
  }
  mean_coupling_ /= static_cast<double>(spec_.samples.size());
}

double QuadraticProblem::sample_loss(const Vector& x, const Vector& y,
                                     int i) const {
  const auto& z = spec_.samples[static_cast<std::size_t>(i)];
  return spec_.sin_weight * std::sin(z.w.dot(x)) +
         0.5 * spec_.ridge * x.squaredNorm() + x.dot(z.a * y) -
         0.5 * spec_.mu * y.squaredNorm();
}

void QuadraticProblem::sample_grad_x(const Vector& x, const Vector& y, int i,
                                     Vector& out) const {
  const auto& z = spec_.samples[static_cast<std::size_t>(i)];
  out.noalias() = z.a * y;
  out += spec_.sin_weight * std::cos(z.w.dot(x)) * z.w;
  out += spec_.ridge * x;
}

void QuadraticProblem::sample_grad_y(const Vector& x, const Vector& y, int i,
                                     Vector& out) const {
  const auto& z = spec_.samples[static_cast<std::size_t>(i)];
  out.noalias() = z.a.transpose() * x;
  out -= spec_.mu * y;
}

Vector QuadraticProblem::project_y(const Vector& y) const {
  return project_ball(y, y_radius());
}

Vector QuadraticProblem::y_star(const Vector& x) const {
  return project_y(mean_coupling_.transpose() * x / spec_.mu);
}

PhiValue QuadraticProblem::phi(const Vector& x) const {
  const Vector ys = y_star(x);
  double sin_sum = 0.0;
  Vector sin_grad = Vector::Zero(dim_x());
  for (const auto& z : spec_.samples) {
    const double inner = z.w.dot(x);
    sin_sum += std::sin(inner);
    sin_grad += std::cos(inner) * z.w;
  }
  const double n = static_cast<double>(sample_count());
  PhiValue out;
  out.value = spec_.sin_weight * sin_sum / n + 0.5 * spec_.ridge * x.squaredNorm() +
              x.dot(mean_coupling_ * ys) - 0.5 * spec_.mu * ys.squaredNorm();
  out.grad = spec_.sin_weight / n * sin_grad + spec_.ridge * x +
             mean_coupling_ * ys;
  return out;
}

std::unique_ptr<QuadraticProblem> QuadraticProblem::with_replaced(
    int i, const QuadraticSample& sample) const {
  QuadraticSpec spec = spec_;
  spec.samples.at(static_cast<std::size_t>(i)) = sample;
  return std::make_unique<QuadraticProblem>(std::move(spec));
}

std::unique_ptr<QuadraticProblem> make_quadratic(QuadraticSpec spec) {
  return std::make_unique<QuadraticProblem>(std::move(spec));
}

}  // namespace dpmm
