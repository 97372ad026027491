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

#ifndef DPMINIMAX_PROBLEMS_QUADRATIC_HPP_
#define DPMINIMAX_PROBLEMS_QUADRATIC_HPP_

#include <memory>
#include <vector>

#include "dpminimax/problem.hpp"
#include "dpminimax/rng.hpp"

namespace dpmm {

struct QuadraticSample {
  Vector w;       // d1-vector driving the sinusoidal nonconvexity
  Matrix a;       // d1 x d2 coupling matrix
  double offset;  // scalar payload; not part of the loss
};

// Nonconvex-strongly-concave verification family with closed-form inner
// maximizer. Per-sample loss:
//   f(x, y; z_i) = s sin(w_i' x) + (rho/2)||x||^2 + x' A_i y - (mu/2)||y||^2
// with Y the centered ball of radius diameter_y / 2.
struct QuadraticSpec {
  std::vector<QuadraticSample> samples;
  double sin_weight = 1.0;   // s
  double ridge = 0.0;        // rho
  double mu = 1.0;
  double diameter_y = 2.0;   // Lambda
  double x_box = 2.0;        // radius over which constants are declared
};

QuadraticSpec random_quadratic_spec(int n, int d1, int d2, double sin_weight,
                                    double ridge, double mu, double diameter_y,
                                    double x_box, double coupling_spread,
                                    Rng& rng);

class QuadraticProblem : public MinimaxProblem {
 public:
  explicit QuadraticProblem(QuadraticSpec spec);

  double sample_loss(const Vector& x, const Vector& y, int i) const override;
  void sample_grad_x(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  void sample_grad_y(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  Vector project_y(const Vector& y) const override;

  bool has_phi_oracle() const override { return true; }
  // y*(x) = project_Y(Abar' x / mu); Phi and its gradient via Danskin.
  Vector y_star(const Vector& x) const override;
  PhiValue phi(const Vector& x) const override;

  const QuadraticSpec& spec() const { return spec_; }
  const Matrix& mean_coupling() const { return mean_coupling_; }
  double y_radius() const { return spec_.diameter_y / 2.0; }

  // Copy with sample i replaced; used by neighboring-dataset oracles.
  std::unique_ptr<QuadraticProblem> with_replaced(
      int i, const QuadraticSample& sample) const;

 private:
  QuadraticSpec spec_;
  Matrix mean_coupling_;  // Abar
};

std::unique_ptr<QuadraticProblem> make_quadratic(QuadraticSpec spec);

}  // namespace dpmm

#endif  // DPMINIMAX_PROBLEMS_QUADRATIC_HPP_
