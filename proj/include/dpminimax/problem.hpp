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

#ifndef DPMINIMAX_PROBLEM_HPP_
#define DPMINIMAX_PROBLEM_HPP_

#include <algorithm>
#include <memory>
#include <span>

#include "dpminimax/types.hpp"

namespace dpmm {

// Declared constants of a finite-sum minimax instance
//   min_x max_{y in Y} (1/n) sum_i f(x, y; z_i).
// Lipschitz/smoothness values are per-sample bounds over the configured
// domain box for x and the feasible set Y; strong concavity and the loss
// bound refer to the averaged objective.
struct ProblemConstants {
  double lipschitz_x = 0.0;      // G_x
  double lipschitz_y = 0.0;      // G_y
  double smooth_x = 0.0;         // l_x
  double smooth_y = 0.0;         // l_y
  double smooth_xy = 0.0;        // bound on the coupling block
  double strong_concavity = 0.0; // mu
  double loss_bound = 0.0;       // M
  double diameter_y = 0.0;       // Lambda

  double lipschitz() const { return std::max(lipschitz_x, lipschitz_y); }
  double smoothness() const {
    return std::max({smooth_x, smooth_y, smooth_xy});
  }
  double condition_number() const { return smoothness() / strong_concavity; }
};

struct PhiValue {
  double value = 0.0;
  Vector grad;
};

// Per-sample gradient oracle plus projection onto Y. Instances are immutable
// after construction; per-sample evaluation is reentrant. Batch reductions
// run in fixed left-to-right index order.
class MinimaxProblem {
 public:
  virtual ~MinimaxProblem() = default;

  int sample_count() const { return n_; }
  int dim_x() const { return d1_; }
  int dim_y() const { return d2_; }
  const ProblemConstants& constants() const { return constants_; }

  virtual double sample_loss(const Vector& x, const Vector& y, int i) const = 0;
  virtual void sample_grad_x(const Vector& x, const Vector& y, int i,
                             Vector& out) const = 0;
  virtual void sample_grad_y(const Vector& x, const Vector& y, int i,
                             Vector& out) const = 0;
  virtual Vector project_y(const Vector& y) const = 0;

  Vector grad_x(const Vector& x, const Vector& y, int i) const {
    Vector g(d1_);
    sample_grad_x(x, y, i, g);
    return g;
  }
  Vector grad_y(const Vector& x, const Vector& y, int i) const {
    Vector g(d2_);
    sample_grad_y(x, y, i, g);
    return g;
  }

  double averaged_loss(const Vector& x, const Vector& y) const;
  Vector averaged_grad_x(const Vector& x, const Vector& y) const;
  Vector averaged_grad_y(const Vector& x, const Vector& y) const;

  // Mean over the batch of per-sample gradients clipped to the threshold.
  Vector batch_grad_x_clipped(const Vector& x, const Vector& y,
                              std::span<const int> batch, double threshold,
                              int* clipped_count = nullptr) const;
  Vector batch_grad_y_clipped(const Vector& x, const Vector& y,
                              std::span<const int> batch, double threshold,
                              int* clipped_count = nullptr) const;

  // Closed-form primal function, where the family admits one.
  virtual bool has_phi_oracle() const { return false; }
  virtual PhiValue phi(const Vector& x) const;
  virtual Vector y_star(const Vector& x) const;

 protected:
  MinimaxProblem(int n, int d1, int d2, ProblemConstants constants)
      : n_(n), d1_(d1), d2_(d2), constants_(constants) {}

 private:
  int n_;
  int d1_;
  int d2_;
  ProblemConstants constants_;
};

}  // namespace dpmm

#endif  // DPMINIMAX_PROBLEM_HPP_
