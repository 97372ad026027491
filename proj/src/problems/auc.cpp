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

#include "dpminimax/problems/auc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace dpmm {

namespace {

ProblemConstants derive_constants(const AucDataset& data, double p,
                                  double lambda_alpha, double x_box) {
  double max_feat = 0.0;
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    max_feat = std::max(max_feat, data.features.row(i).norm());
  }
  const double pm = std::max(p, 1.0 - p);
  // |h| <= x_box * max_feat and |a|, |b| <= x_box over the declared box.
  const double h_bound = x_box * max_feat + x_box;

  ProblemConstants c;
  c.lipschitz_x = 2.0 * pm * h_bound * (max_feat + 1.0) +
                  2.0 * lambda_alpha * pm * max_feat;
  c.lipschitz_y = 2.0 * (p * (1.0 - p) + pm * x_box * max_feat) +
                  2.0 * p * (1.0 - p) * lambda_alpha;
  c.smooth_x = 2.0 * pm * (max_feat + 1.0) * (max_feat + 1.0);
  c.smooth_y = 2.0 * p * (1.0 - p);
  c.smooth_xy = 2.0 * pm * max_feat;
  c.strong_concavity = 2.0 * p * (1.0 - p);
  c.loss_bound = pm * h_bound * h_bound +
                 2.0 * lambda_alpha * (p * (1.0 - p) + pm * x_box * max_feat) +
                 p * (1.0 - p) * lambda_alpha * lambda_alpha;
  c.diameter_y = lambda_alpha;
  return c;
}

double positive_ratio_of(const std::vector<int>& labels) {
  int positives = 0;
  for (const int label : labels) {
    if (label != 1 && label != -1) {
      throw std::invalid_argument("AUC labels must be +1 or -1");
    }
    positives += label == 1 ? 1 : 0;
  }
  const int n = static_cast<int>(labels.size());
  if (positives == 0 || positives == n) {
    throw std::invalid_argument(
        "AUC problem needs both classes: p(1-p) = 0 breaks strong concavity");
  }
  return static_cast<double>(positives) / n;
}

}  // namespace

AucProblem::AucProblem(AucDataset data, double lambda_alpha, double x_box)
    : MinimaxProblem(static_cast<int>(data.labels.size()),
                     static_cast<int>(data.features.cols()) + 2, 1,
                     derive_constants(data, positive_ratio_of(data.labels),
                                      lambda_alpha, x_box)),
      data_(std::move(data)),
      lambda_alpha_(lambda_alpha),
      p_(positive_ratio_of(data_.labels)) {
  if (data_.features.rows() != static_cast<Eigen::Index>(data_.labels.size())) {
    throw std::invalid_argument("AucProblem: feature/label size mismatch");
  }
  if (!(lambda_alpha_ > 0.0)) {
    throw std::invalid_argument("AucProblem: lambda_alpha must be positive");
  }
}

double AucProblem::sample_loss(const Vector& x, const Vector& y, int i) const {
  const int d = static_cast<int>(data_.features.cols());
  const double h = data_.features.row(i).dot(x.head(d));
  const double a = x[d];
  const double b = x[d + 1];
  const double alpha = y[0];
  const bool positive = data_.labels[static_cast<std::size_t>(i)] == 1;
  double value = 2.0 * alpha * p_ * (1.0 - p_) - p_ * (1.0 - p_) * alpha * alpha;
  if (positive) {
    value += (1.0 - p_) * (h - a) * (h - a);
    value -= 2.0 * alpha * (1.0 - p_) * h;
  } else {
    value += p_ * (h - b) * (h - b);
    value += 2.0 * alpha * p_ * h;
  }
  return value;
}

void AucProblem::sample_grad_x(const Vector& x, const Vector& y, int i,
                               Vector& out) const {
  const int d = static_cast<int>(data_.features.cols());
  const auto feat = data_.features.row(i);
  const double h = feat.dot(x.head(d));
  const double alpha = y[0];
  const bool positive = data_.labels[static_cast<std::size_t>(i)] == 1;
  out.setZero();
  if (positive) {
    const double diff = h - x[d];
    out.head(d) = (2.0 * (1.0 - p_) * diff - 2.0 * alpha * (1.0 - p_)) *
                  feat.transpose();
    out[d] = -2.0 * (1.0 - p_) * diff;
  } else {
    const double diff = h - x[d + 1];
    out.head(d) = (2.0 * p_ * diff + 2.0 * alpha * p_) * feat.transpose();
    out[d + 1] = -2.0 * p_ * diff;
  }
}

void AucProblem::sample_grad_y(const Vector& x, const Vector& y, int i,
                               Vector& out) const {
  const int d = static_cast<int>(data_.features.cols());
  const double h = data_.features.row(i).dot(x.head(d));
  const bool positive = data_.labels[static_cast<std::size_t>(i)] == 1;
  const double cross = positive ? -(1.0 - p_) * h : p_ * h;
  out[0] = 2.0 * (p_ * (1.0 - p_) + cross) - 2.0 * p_ * (1.0 - p_) * y[0];
}

Vector AucProblem::project_y(const Vector& y) const {
  Vector out(1);
  out[0] = std::clamp(y[0], 0.0, lambda_alpha_);
  return out;
}

Vector AucProblem::y_star(const Vector& x) const {
  const int d = static_cast<int>(data_.features.cols());
  double cross = 0.0;
  for (int i = 0; i < sample_count(); ++i) {
    const double h = data_.features.row(i).dot(x.head(d));
    cross += data_.labels[static_cast<std::size_t>(i)] == 1 ? -(1.0 - p_) * h
                                                            : p_ * h;
  }
  cross /= sample_count();
  const double unconstrained = (p_ * (1.0 - p_) + cross) / (p_ * (1.0 - p_));
  Vector out(1);
  out[0] = std::clamp(unconstrained, 0.0, lambda_alpha_);
  return out;
}

PhiValue AucProblem::phi(const Vector& x) const {
  const Vector ys = y_star(x);
  PhiValue out;
  out.value = averaged_loss(x, ys);
  Vector sum = Vector::Zero(dim_x());
  Vector g(dim_x());
  for (int i = 0; i < sample_count(); ++i) {
    sample_grad_x(x, ys, i, g);
    sum += g;
  }
  out.grad = sum / sample_count();
  return out;
}

std::vector<double> AucProblem::scores(const Vector& x) const {
  const int d = static_cast<int>(data_.features.cols());
  std::vector<double> out(static_cast<std::size_t>(sample_count()));
  for (int i = 0; i < sample_count(); ++i) {
    out[static_cast<std::size_t>(i)] = data_.features.row(i).dot(x.head(d));
  }
  return out;
}

std::unique_ptr<AucProblem> make_auc(AucDataset data, double lambda_alpha,
                                     double x_box) {
  return std::make_unique<AucProblem>(std::move(data), lambda_alpha, x_box);
}

double auc_score(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("auc_score: size mismatch or empty input");
  }
  // O(n log n) via ranking with midranks for ties.
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = midrank;
    i = j + 1;
  }
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[k] == 1) {
      positive_rank_sum += rank[k];
      ++positives;
    } else if (labels[k] != -1) {
      throw std::invalid_argument("auc_score: labels must be +1 or -1");
    }
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("auc_score: both classes must be present");
  }
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

AucDataset load_auc_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("load_auc_csv: cannot open " + path);
  }
  std::string line;
  if (!std::getline(file, line)) {
    throw ConfigError("load_auc_csv: empty file " + path);
  }
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("load_auc_csv: " + path + ":" +
                          std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ConfigError("load_auc_csv: " + path + ":" +
                        std::to_string(line_no) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().size() < 2) {
    throw ConfigError("load_auc_csv: need at least one feature column and a "
                      "label column in " + path);
  }
  const std::size_t d = rows.front().size() - 1;
  AucDataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(d));
  data.labels.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t cidx = 0; cidx < d; ++cidx) {
      data.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cidx)) =
          rows[r][cidx];
    }
    const double label = rows[r][d];
    if (label != 1.0 && label != -1.0) {
      throw ConfigError("load_auc_csv: labels must be +1 or -1 in " + path);
    }
    data.labels[r] = static_cast<int>(label);
  }
  return data;
}

AucDataset synthetic_auc(int n, int dim, double positive_ratio,
                         double separation, Rng& rng) {
  if (n < 2 || dim < 1 || !(positive_ratio > 0.0) || !(positive_ratio < 1.0)) {
    throw std::invalid_argument("synthetic_auc: bad arguments");
  }
  const int positives = std::max(1, static_cast<int>(std::lround(n * positive_ratio)));
  AucDataset data;
  data.features.resize(n, dim);
  data.labels.resize(static_cast<std::size_t>(n));
  // Class means +/- separation/2 along the first axis; unit isotropic noise,
  // features scaled to keep row norms of order one.
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < n; ++i) {
    const bool positive = i < positives;
    data.labels[static_cast<std::size_t>(i)] = positive ? 1 : -1;
    for (int j = 0; j < dim; ++j) {
      double v = rng.normal();
      if (j == 0) {
        v += positive ? separation / 2.0 : -separation / 2.0;
      }
      data.features(i, j) = scale * v;
    }
  }
  return data;
}

}  // namespace dpmm
