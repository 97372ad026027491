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

#ifndef DPMINIMAX_PROBLEMS_AUC_HPP_
#define DPMINIMAX_PROBLEMS_AUC_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dpminimax/problem.hpp"
#include "dpminimax/rng.hpp"

namespace dpmm {

struct AucDataset {
  Matrix features;          // n x d, one row per sample
  std::vector<int> labels;  // +1 / -1
};

// Least-squares AUC surrogate as a minimax problem with a linear scorer
// h_w(x) = w'x. The primal variable is (w, a, b) in R^{d+2}; the dual is the
// scalar alpha constrained to [0, lambda_alpha]. Per-sample objective:
//   F = (1-p)(h-a)^2 1[y=+1] + p(h-b)^2 1[y=-1]
//     + 2 alpha (p(1-p) + p h 1[y=-1] - (1-p) h 1[y=+1]) - p(1-p) alpha^2,
// where p is the positive-class ratio of the full dataset.
class AucProblem : public MinimaxProblem {
 public:
  AucProblem(AucDataset data, double lambda_alpha, double x_box);

  double sample_loss(const Vector& x, const Vector& y, int i) const override;
  void sample_grad_x(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  void sample_grad_y(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  Vector project_y(const Vector& y) const override;

  bool has_phi_oracle() const override { return true; }
  Vector y_star(const Vector& x) const override;  // scalar alpha*(x)
  PhiValue phi(const Vector& x) const override;

  double positive_ratio() const { return p_; }
  const AucDataset& data() const { return data_; }

  // Scores w'x_i for all samples; x is the stacked (w, a, b).
  std::vector<double> scores(const Vector& x) const;

 private:
  AucDataset data_;
  double lambda_alpha_;
  double p_;
};

std::unique_ptr<AucProblem> make_auc(AucDataset data, double lambda_alpha = 2.0,
                                     double x_box = 2.0);

// Probability that a uniformly random positive outscores a uniformly random
// negative, ties counted one half (Mann-Whitney statistic).
double auc_score(std::span<const double> scores, std::span<const int> labels);

// CSV loader: header row, feature columns followed by a final +/-1 label
// column (any header name).
AucDataset load_auc_csv(const std::string& path);

// Two-Gaussian synthetic binary dataset with the given positive-class share.
AucDataset synthetic_auc(int n, int dim, double positive_ratio,
                         double separation, Rng& rng);

}  // namespace dpmm

#endif  // DPMINIMAX_PROBLEMS_AUC_HPP_
