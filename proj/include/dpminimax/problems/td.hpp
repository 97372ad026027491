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

#ifndef DPMINIMAX_PROBLEMS_TD_HPP_
#define DPMINIMAX_PROBLEMS_TD_HPP_

#include <memory>
#include <vector>

#include "dpminimax/problem.hpp"
#include "dpminimax/rng.hpp"

namespace dpmm {

// Tabular MDP with linear value features. transition[a] is the S x S matrix
// P(s'|s, a); policy rows pi(.|s) sum to one; features rows are Psi(s)'.
struct TabularMdpSpec {
  int num_states = 2;
  int num_actions = 1;
  std::vector<Matrix> transition;
  Matrix reward;       // S x A
  Matrix policy;       // S x A
  double discount = 0.9;
  Matrix features;     // S x d1
  double omega_radius = 10.0;
  double theta_box = 10.0;

  void validate() const;
  Matrix policy_transition() const;  // P^pi
  Vector policy_reward() const;      // R^pi
};

struct TdTransition {
  int s = 0;
  int a = 0;
  int s_next = 0;
};

// Stationary distribution of P^pi by power iteration. Throws if the iteration
// fails to reach the tolerance (periodic or reducible chains).
Vector stationary_distribution(const TabularMdpSpec& spec, double tol = 1e-12,
                               int max_iter = 100000);

// Exact value function: solves (I - gamma P^pi) V = R^pi.
Vector exact_value_function(const TabularMdpSpec& spec);

// Population MSPBE(theta) = (1/2) E[delta Psi]' G^-1 E[delta Psi] with exact
// expectations under mu^pi x pi x P.
double exact_mspbe(const TabularMdpSpec& spec, const Vector& theta);

// Saddle-point TD objective over sampled transitions:
//   l(theta, omega; s,a,s') = delta(s) Psi(s)'omega - (1/2) omega'Psi Psi' omega
// with delta = R(s,a) + gamma theta'Psi(s') - theta'Psi(s). The dual feasible
// set is the centered ball of radius omega_radius; the declared strong
// concavity is the smallest eigenvalue of the empirical feature covariance.
class TdProblem : public MinimaxProblem {
 public:
  TdProblem(TabularMdpSpec spec, std::vector<TdTransition> samples);

  double sample_loss(const Vector& x, const Vector& y, int i) const override;
  void sample_grad_x(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  void sample_grad_y(const Vector& x, const Vector& y, int i,
                     Vector& out) const override;
  Vector project_y(const Vector& y) const override;

  bool has_phi_oracle() const override { return true; }
  // omega*(theta) = Ghat^-1 bhat(theta); valid while it lies inside the ball,
  // otherwise throws (the constrained maximizer is not a Euclidean
  // projection for anisotropic Ghat).
  Vector y_star(const Vector& x) const override;
  PhiValue phi(const Vector& x) const override;

  // Empirical MSPBE(theta) = (1/2) bhat' Ghat^-1 bhat.
  double empirical_mspbe(const Vector& theta) const;

  const TabularMdpSpec& spec() const { return spec_; }
  const std::vector<TdTransition>& samples() const { return samples_; }

 private:
  double td_error(const Vector& theta, const TdTransition& t) const;
  Vector bhat(const Vector& theta) const;

  TabularMdpSpec spec_;
  std::vector<TdTransition> samples_;
  Matrix covariance_;  // Ghat
};

// Draws n i.i.d. transitions (s, a, s') from mu^pi x pi x P.
std::unique_ptr<TdProblem> make_td(TabularMdpSpec spec, int n, Rng& rng);

}  // namespace dpmm

#endif  // DPMINIMAX_PROBLEMS_TD_HPP_
