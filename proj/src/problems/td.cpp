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

#include "dpminimax/problems/td.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "dpminimax/projection.hpp"

namespace dpmm {

void TabularMdpSpec::validate() const {
  if (num_states < 1 || num_actions < 1) {
    throw std::invalid_argument("TabularMdpSpec: bad sizes");
  }
  if (static_cast<int>(transition.size()) != num_actions) {
    throw std::invalid_argument("TabularMdpSpec: one transition matrix per action");
  }
  for (const auto& p : transition) {
    if (p.rows() != num_states || p.cols() != num_states) {
      throw std::invalid_argument("TabularMdpSpec: transition shape mismatch");
    }
    for (int s = 0; s < num_states; ++s) {
      if (std::abs(p.row(s).sum() - 1.0) > 1e-9 || p.row(s).minCoeff() < 0.0) {
        throw std::invalid_argument("TabularMdpSpec: transition rows must be "
                                    "probability distributions");
      }
    }
  }
  if (policy.rows() != num_states || policy.cols() != num_actions ||
      reward.rows() != num_states || reward.cols() != num_actions) {
    throw std::invalid_argument("TabularMdpSpec: policy/reward shape mismatch");
  }
  for (int s = 0; s < num_states; ++s) {
    if (std::abs(policy.row(s).sum() - 1.0) > 1e-9 ||
        policy.row(s).minCoeff() < 0.0) {
      throw std::invalid_argument("TabularMdpSpec: policy rows must be "
                                  "probability distributions");
    }
  }
  if (!(discount >= 0.0) || !(discount < 1.0)) {
    throw std::invalid_argument("TabularMdpSpec: discount must lie in [0, 1)");
  }
  if (features.rows() != num_states || features.cols() < 1) {
    throw std::invalid_argument("TabularMdpSpec: features shape mismatch");
  }
}

Matrix TabularMdpSpec::policy_transition() const {
  Matrix p = Matrix::Zero(num_states, num_states);
  for (int a = 0; a < num_actions; ++a) {
    for (int s = 0; s < num_states; ++s) {
      p.row(s) += policy(s, a) * transition[static_cast<std::size_t>(a)].row(s);
    }
  }
  return p;
}

Vector TabularMdpSpec::policy_reward() const {
  Vector r = Vector::Zero(num_states);
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      r[s] += policy(s, a) * reward(s, a);
    }
  }
  return r;
}

Vector stationary_distribution(const TabularMdpSpec& spec, double tol,
                               int max_iter) {
  spec.validate();
  const Matrix p = spec.policy_transition();
  // Ranked start: a uniform start is already a fixed point on
  // doubly-stochastic periodic chains and would mask the oscillation.
  Vector mu(spec.num_states);
  for (int s = 0; s < spec.num_states; ++s) {
    mu[s] = s + 1.0;
  }
  mu /= mu.sum();
  for (int it = 0; it < max_iter; ++it) {
    Vector next = p.transpose() * mu;
    next /= next.sum();
    if ((next - mu).lpNorm<Eigen::Infinity>() < tol) {
      return next;
    }
    mu = next;
  }
  throw std::runtime_error(
      "stationary_distribution: power iteration failed to converge "
      "(reducible or periodic chain)");
}

Vector exact_value_function(const TabularMdpSpec& spec) {
  spec.validate();
  const Matrix p = spec.policy_transition();
  const Matrix lhs =
      Matrix::Identity(spec.num_states, spec.num_states) - spec.discount * p;
  return lhs.fullPivLu().solve(spec.policy_reward());
}

double exact_mspbe(const TabularMdpSpec& spec, const Vector& theta) {
  spec.validate();
  const Vector mu = stationary_distribution(spec);
  const int d = static_cast<int>(spec.features.cols());
  Matrix cov = Matrix::Zero(d, d);
  Vector b = Vector::Zero(d);
  for (int s = 0; s < spec.num_states; ++s) {
    const Vector psi = spec.features.row(s).transpose();
    cov += mu[s] * psi * psi.transpose();
    const double value_s = psi.dot(theta);
    for (int a = 0; a < spec.num_actions; ++a) {
      for (int s2 = 0; s2 < spec.num_states; ++s2) {
        const double prob = mu[s] * spec.policy(s, a) *
                            spec.transition[static_cast<std::size_t>(a)](s, s2);
        if (prob == 0.0) continue;
        const double value_s2 = spec.features.row(s2).dot(theta);
        const double delta =
            spec.reward(s, a) + spec.discount * value_s2 - value_s;
        b += prob * delta * psi;
      }
    }
  }
  const Vector sol = cov.fullPivLu().solve(b);
  return 0.5 * b.dot(sol);
}

namespace {

ProblemConstants derive_constants(const TabularMdpSpec& spec,
                                  const std::vector<TdTransition>& samples,
                                  const Matrix& covariance) {
  double max_feat = 0.0;
  for (Eigen::Index s = 0; s < spec.features.rows(); ++s) {
    max_feat = std::max(max_feat, spec.features.row(s).norm());
  }
  double max_reward = 0.0;
  for (int s = 0; s < spec.num_states; ++s) {
    for (int a = 0; a < spec.num_actions; ++a) {
      max_reward = std::max(max_reward, std::abs(spec.reward(s, a)));
    }
  }
  const double delta_bound =
      max_reward + (1.0 + spec.discount) * max_feat * spec.theta_box;
  const double omega = spec.omega_radius;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance);
  const double mu_min = eig.eigenvalues().minCoeff();
  if (!(mu_min > 0.0)) {
    throw std::invalid_argument(
        "TdProblem: empirical feature covariance must be positive definite");
  }

  ProblemConstants c;
  c.lipschitz_x = (1.0 + spec.discount) * max_feat * max_feat * omega;
  c.lipschitz_y = delta_bound * max_feat + max_feat * max_feat * omega;
  c.smooth_x = 0.0;  // loss is linear in theta for fixed omega
  c.smooth_y = max_feat * max_feat;
  c.smooth_xy = (1.0 + spec.discount) * max_feat * max_feat;
  c.strong_concavity = mu_min;
  c.loss_bound = delta_bound * max_feat * omega +
                 0.5 * max_feat * max_feat * omega * omega;
  c.diameter_y = 2.0 * omega;
  (void)samples;
  return c;
}

Matrix empirical_covariance(const TabularMdpSpec& spec,
                            const std::vector<TdTransition>& samples) {
  const int d = static_cast<int>(spec.features.cols());
  Matrix cov = Matrix::Zero(d, d);
  for (const auto& t : samples) {
    const Vector psi = spec.features.row(t.s).transpose();
    cov += psi * psi.transpose();
  }
  return cov / static_cast<double>(samples.size());
}

}  // namespace

TdProblem::TdProblem(TabularMdpSpec spec, std::vector<TdTransition> samples)
    : MinimaxProblem(static_cast<int>(samples.size()),
                     static_cast<int>(spec.features.cols()),
                     static_cast<int>(spec.features.cols()),
                     derive_constants(spec, samples,
                                      empirical_covariance(spec, samples))),
      spec_(std::move(spec)),
      samples_(std::move(samples)),
      covariance_(empirical_covariance(spec_, samples_)) {
  if (samples_.empty()) {
    throw std::invalid_argument("TdProblem: need at least one transition");
  }
}

double TdProblem::td_error(const Vector& theta, const TdTransition& t) const {
  const double value_s = spec_.features.row(t.s).dot(theta);
  const double value_s2 = spec_.features.row(t.s_next).dot(theta);
  return spec_.reward(t.s, t.a) + spec_.discount * value_s2 - value_s;
}

double TdProblem::sample_loss(const Vector& x, const Vector& y, int i) const {
  const auto& t = samples_[static_cast<std::size_t>(i)];
  const Vector psi = spec_.features.row(t.s).transpose();
  const double proj = psi.dot(y);
  return td_error(x, t) * proj - 0.5 * proj * proj;
}

void TdProblem::sample_grad_x(const Vector& x, const Vector& y, int i,
                              Vector& out) const {
  const auto& t = samples_[static_cast<std::size_t>(i)];
  const Vector psi = spec_.features.row(t.s).transpose();
  const Vector psi2 = spec_.features.row(t.s_next).transpose();
  out = (spec_.discount * psi2 - psi) * psi.dot(y);
  (void)x;
}

void TdProblem::sample_grad_y(const Vector& x, const Vector& y, int i,
                              Vector& out) const {
  const auto& t = samples_[static_cast<std::size_t>(i)];
  const Vector psi = spec_.features.row(t.s).transpose();
  out = (td_error(x, t) - psi.dot(y)) * psi;
}

Vector TdProblem::project_y(const Vector& y) const {
  return project_ball(y, spec_.omega_radius);
}

Vector TdProblem::bhat(const Vector& theta) const {
  Vector b = Vector::Zero(dim_y());
  for (const auto& t : samples_) {
    b += td_error(theta, t) * spec_.features.row(t.s).transpose();
  }
  return b / static_cast<double>(samples_.size());
}

Vector TdProblem::y_star(const Vector& x) const {
  const Vector omega = covariance_.llt().solve(bhat(x));
  if (omega.norm() > spec_.omega_radius) {
    throw std::runtime_error(
        "TdProblem::y_star: unconstrained maximizer leaves the omega ball; "
        "no closed form under the anisotropic quadratic");
  }
  return omega;
}

PhiValue TdProblem::phi(const Vector& x) const {
  const Vector omega = y_star(x);
  PhiValue out;
  const Vector b = bhat(x);
  out.value = b.dot(omega) - 0.5 * omega.dot(covariance_ * omega);
  Vector grad = Vector::Zero(dim_x());
  for (const auto& t : samples_) {
    const Vector psi = spec_.features.row(t.s).transpose();
    const Vector psi2 = spec_.features.row(t.s_next).transpose();
    grad += (spec_.discount * psi2 - psi) * psi.dot(omega);
  }
  out.grad = grad / static_cast<double>(samples_.size());
  return out;
}

double TdProblem::empirical_mspbe(const Vector& theta) const {
  const Vector b = bhat(theta);
  return 0.5 * b.dot(covariance_.llt().solve(b));
}

std::unique_ptr<TdProblem> make_td(TabularMdpSpec spec, int n, Rng& rng) {
  spec.validate();
  if (n < 1) {
    throw std::invalid_argument("make_td: need at least one transition");
  }
  const Vector mu = stationary_distribution(spec);
  std::vector<TdTransition> samples;
  samples.reserve(static_cast<std::size_t>(n));
  auto draw_categorical = [&rng](const auto& weights, int size) {
    double u = rng.uniform();
    for (int k = 0; k < size; ++k) {
      u -= weights[k];
      if (u < 0.0) return k;
    }
    return size - 1;
  };
  for (int i = 0; i < n; ++i) {
    TdTransition t;
    t.s = draw_categorical(mu, spec.num_states);
    t.a = draw_categorical(spec.policy.row(t.s), spec.num_actions);
    t.s_next = draw_categorical(
        spec.transition[static_cast<std::size_t>(t.a)].row(t.s), spec.num_states);
    samples.push_back(t);
  }
  return std::make_unique<TdProblem>(std::move(spec), std::move(samples));
}

}  // namespace dpmm
