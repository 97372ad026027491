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

#include "dpminimax/problems/worst_group.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "dpminimax/projection.hpp"

namespace dpmm {

namespace {

std::vector<int> count_groups(const WorstGroupSpec& spec) {
  if (spec.num_groups < 2) {
    throw std::invalid_argument("WorstGroupProblem: need at least two groups");
  }
  std::vector<int> sizes(static_cast<std::size_t>(spec.num_groups), 0);
  for (const int g : spec.group) {
    if (g < 0 || g >= spec.num_groups) {
      throw std::invalid_argument("WorstGroupProblem: group id out of range");
    }
    ++sizes[static_cast<std::size_t>(g)];
  }
  for (const int size : sizes) {
    if (size == 0) {
      throw std::invalid_argument("WorstGroupProblem: empty group");
    }
  }
  return sizes;
}

ProblemConstants derive_constants(const WorstGroupSpec& spec,
                                  const std::vector<int>& sizes) {
  const double n = static_cast<double>(spec.group.size());
  double max_feat = 0.0;
  for (Eigen::Index i = 0; i < spec.features.rows(); ++i) {
    max_feat = std::max(max_feat, spec.features.row(i).norm());
  }
  double max_weight = 0.0;  // n / |D_g|
  for (const int size : sizes) {
    max_weight = std::max(max_weight, n / size);
  }
  // Base logistic loss over the box: value <= log(1 + e^{|x'a|}), gradient
  // norm <= ||a||, curvature <= ||a||^2 / 4.
  const double max_margin = spec.x_box * max_feat;
  const double max_loss = std::log1p(std::exp(max_margin));

  ProblemConstants c;
  c.lipschitz_x = max_weight * max_feat;  // y_g <= 1
  c.lipschitz_y = max_weight * max_loss + 1.0;  // simplex has norm <= 1
  c.smooth_x = max_weight * max_feat * max_feat / 4.0;
  c.smooth_y = 1.0;
  c.smooth_xy = max_weight * max_feat;
  c.strong_concavity = 1.0;
  c.loss_bound = max_weight * max_loss + 0.5;
  c.diameter_y = std::sqrt(2.0);  // simplex diameter
  return c;
}

}  // namespace

WorstGroupProblem::WorstGroupProblem(WorstGroupSpec spec)
    : MinimaxProblem(static_cast<int>(spec.group.size()),
                     static_cast<int>(spec.features.cols()), spec.num_groups,
                     derive_constants(spec, count_groups(spec))),
      spec_(std::move(spec)),
      group_size_(count_groups(spec_)) {
  if (spec_.features.rows() != static_cast<Eigen::Index>(spec_.group.size()) ||
      spec_.labels.size() != spec_.group.size()) {
    throw std::invalid_argument("WorstGroupProblem: size mismatch");
  }
}

double WorstGroupProblem::base_loss(const Vector& x, int i) const {
  const double margin =
      spec_.labels[static_cast<std::size_t>(i)] * spec_.features.row(i).dot(x);
  // log(1 + exp(-margin)), overflow-safe.
  if (margin > 0.0) {
    return std::log1p(std::exp(-margin));
  }
  return -margin + std::log1p(std::exp(margin));
}

void WorstGroupProblem::base_grad(const Vector& x, int i, Vector& out) const {
  const double label = spec_.labels[static_cast<std::size_t>(i)];
  const double margin = label * spec_.features.row(i).dot(x);
  const double sigmoid = 1.0 / (1.0 + std::exp(margin));  // sigma(-margin)
  out = -label * sigmoid * spec_.features.row(i).transpose();
}

double WorstGroupProblem::sample_loss(const Vector& x, const Vector& y,
                                      int i) const {
  const int g = spec_.group[static_cast<std::size_t>(i)];
  const double weight =
      static_cast<double>(sample_count()) / group_size_[static_cast<std::size_t>(g)];
  return y[g] * weight * base_loss(x, i) - 0.5 * y.squaredNorm();
}

void WorstGroupProblem::sample_grad_x(const Vector& x, const Vector& y, int i,
                                      Vector& out) const {
  const int g = spec_.group[static_cast<std::size_t>(i)];
  const double weight =
      static_cast<double>(sample_count()) / group_size_[static_cast<std::size_t>(g)];
  base_grad(x, i, out);
  out *= y[g] * weight;
}

void WorstGroupProblem::sample_grad_y(const Vector& x, const Vector& y, int i,
                                      Vector& out) const {
  const int g = spec_.group[static_cast<std::size_t>(i)];
  const double weight =
      static_cast<double>(sample_count()) / group_size_[static_cast<std::size_t>(g)];
  out = -y;
  out[g] += weight * base_loss(x, i);
}

Vector WorstGroupProblem::project_y(const Vector& y) const {
  return project_simplex(y);
}

Vector WorstGroupProblem::group_losses(const Vector& x) const {
  Vector losses = Vector::Zero(dim_y());
  for (int i = 0; i < sample_count(); ++i) {
    losses[spec_.group[static_cast<std::size_t>(i)]] += base_loss(x, i);
  }
  for (int g = 0; g < dim_y(); ++g) {
    losses[g] /= group_size_[static_cast<std::size_t>(g)];
  }
  return losses;
}

Vector WorstGroupProblem::y_star(const Vector& x) const {
  // max_y y'L - (1/2)||y||^2 = -(1/2)||y - L||^2 + const over the simplex.
  return project_simplex(group_losses(x));
}

PhiValue WorstGroupProblem::phi(const Vector& x) const {
  const Vector losses = group_losses(x);
  const Vector ys = project_simplex(losses);
  PhiValue out;
  out.value = ys.dot(losses) - 0.5 * ys.squaredNorm();
  // Danskin: grad = sum_g y*_g grad Lhat_g(x).
  Vector grad = Vector::Zero(dim_x());
  Vector g_i(dim_x());
  for (int i = 0; i < sample_count(); ++i) {
    const int g = spec_.group[static_cast<std::size_t>(i)];
    base_grad(x, i, g_i);
    grad += ys[g] / group_size_[static_cast<std::size_t>(g)] * g_i;
  }
  out.grad = grad;
  return out;
}

std::unique_ptr<WorstGroupProblem> make_worst_group(WorstGroupSpec spec) {
  return std::make_unique<WorstGroupProblem>(std::move(spec));
}

WorstGroupSpec synthetic_worst_group(int num_groups, int per_group, int dim,
                                     double shift, Rng& rng) {
  if (num_groups < 2 || per_group < 1 || dim < 1) {
    throw std::invalid_argument("synthetic_worst_group: bad arguments");
  }
  const int n = num_groups * per_group;
  WorstGroupSpec spec;
  spec.num_groups = num_groups;
  spec.features.resize(n, dim);
  spec.labels.resize(static_cast<std::size_t>(n));
  spec.group.resize(static_cast<std::size_t>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  int row = 0;
  for (int g = 0; g < num_groups; ++g) {
    for (int k = 0; k < per_group; ++k, ++row) {
      const int label = (k % 2 == 0) ? 1 : -1;
      spec.group[static_cast<std::size_t>(row)] = g;
      spec.labels[static_cast<std::size_t>(row)] = label;
      for (int j = 0; j < dim; ++j) {
        double v = rng.normal();
        if (j == g % dim) {
          v += label * shift * (1.0 + 0.5 * g);  // groups differ in difficulty
        }
        spec.features(row, j) = scale * v;
      }
    }
  }
  return spec;
}

}  // namespace dpmm
