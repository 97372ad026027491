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

#ifndef DPMINIMAX_PROBLEMS_WORST_GROUP_HPP_
#define DPMINIMAX_PROBLEMS_WORST_GROUP_HPP_

#include <memory>
#include <vector>

#include "dpminimax/problem.hpp"
#include "dpminimax/rng.hpp"

namespace dpmm {

// Regularized worst-group risk minimization
//   min_x max_{y in simplex} sum_g y_g Lhat_g(x) - (1/2)||y||^2
// written as a uniform finite sum: sample j in group g contributes
//   f(x, y; z_j) = y_g (n/|D_g|) loss(x; z_j) - (1/2)||y||^2,
// with a smooth logistic loss on a linear model as the base loss.
struct WorstGroupSpec {
  Matrix features;            // n x d
  std::vector<int> labels;    // +1 / -1
  std::vector<int> group;     // group id per sample, in [0, num_groups)
  int num_groups = 2;
  double x_box = 2.0;
};

class WorstGroupProblem : public MinimaxProblem {
 public:
  explicit WorstGroupProblem(WorstGroupSpec spec);

  double sample_loss(const Vector& x, const Vector& y, int i) const override;
  void sample_grad_x(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  void sample_grad_y(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  Vector project_y(const Vector& y) const override;

  bool has_phi_oracle() const override { return true; }
  // y*(x) is the simplex projection of the per-group loss vector.
  Vector y_star(const Vector& x) const override;
  PhiValue phi(const Vector& x) const override;

  // Average base loss of each group at x.
  Vector group_losses(const Vector& x) const;
  const WorstGroupSpec& spec() const { return spec_; }

 private:
  double base_loss(const Vector& x, int i) const;
  void base_grad(const Vector& x, int i, Vector& out) const;

  WorstGroupSpec spec_;
  std::vector<int> group_size_;
};

std::unique_ptr<WorstGroupProblem> make_worst_group(WorstGroupSpec spec);

// Gaussian blobs per group with shifted means; labels +/-1 within each blob.
WorstGroupSpec synthetic_worst_group(int num_groups, int per_group, int dim,
                                     double shift, Rng& rng);

}  // namespace dpmm

#endif  // DPMINIMAX_PROBLEMS_WORST_GROUP_HPP_
