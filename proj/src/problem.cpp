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

#include "dpminimax/problem.hpp"

#include <stdexcept>

#include "dpminimax/mechanisms.hpp"

namespace dpmm {

double MinimaxProblem::averaged_loss(const Vector& x, const Vector& y) const {
  double total = 0.0;
  for (int i = 0; i < n_; ++i) {
    total += sample_loss(x, y, i);
  }
  return total / n_;
}

Vector MinimaxProblem::averaged_grad_x(const Vector& x, const Vector& y) const {
  Vector sum = Vector::Zero(d1_);
  Vector g(d1_);
  for (int i = 0; i < n_; ++i) {
    sample_grad_x(x, y, i, g);
    sum += g;
  }
  return sum / n_;
}

Vector MinimaxProblem::averaged_grad_y(const Vector& x, const Vector& y) const {
  Vector sum = Vector::Zero(d2_);
  Vector g(d2_);
  for (int i = 0; i < n_; ++i) {
    sample_grad_y(x, y, i, g);
    sum += g;
  }
  return sum / n_;
}

namespace {

// Shared batch reduction: mean of per-sample gradients clipped to the
// threshold, summed left to right in batch order.
template <typename GradFn>
Vector clipped_batch_mean(int dim, std::span<const int> batch, double threshold,
                          int* clipped_count, GradFn&& grad_fn) {
  if (batch.empty()) {
    throw std::invalid_argument("clipped batch mean: empty batch");
  }
  Vector sum = Vector::Zero(dim);
  Vector g(dim);
  int clipped = 0;
  for (const int idx : batch) {
    grad_fn(idx, g);
    const double norm = g.norm();
    if (norm > threshold) {
      sum += g * (threshold / norm);
      ++clipped;
    } else {
      sum += g;
    }
  }
  if (clipped_count != nullptr) {
    *clipped_count = clipped;
  }
  return sum / static_cast<double>(batch.size());
}

}  // namespace

Vector MinimaxProblem::batch_grad_x_clipped(const Vector& x, const Vector& y,
                                            std::span<const int> batch,
                                            double threshold,
                                            int* clipped_count) const {
  return clipped_batch_mean(d1_, batch, threshold, clipped_count,
                            [&](int i, Vector& g) { sample_grad_x(x, y, i, g); });
}

Vector MinimaxProblem::batch_grad_y_clipped(const Vector& x, const Vector& y,
                                            std::span<const int> batch,
                                            double threshold,
                                            int* clipped_count) const {
  return clipped_batch_mean(d2_, batch, threshold, clipped_count,
                            [&](int i, Vector& g) { sample_grad_y(x, y, i, g); });
}

PhiValue MinimaxProblem::phi(const Vector&) const {
  throw std::logic_error(
      "phi: this problem family has no closed-form inner maximizer");
}

Vector MinimaxProblem::y_star(const Vector&) const {
  throw std::logic_error(
      "y_star: this problem family has no closed-form inner maximizer");
}

}  // namespace dpmm
