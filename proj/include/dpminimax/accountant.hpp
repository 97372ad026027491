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

#ifndef DPMINIMAX_ACCOUNTANT_HPP_
#define DPMINIMAX_ACCOUNTANT_HPP_

#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dpminimax/types.hpp"

namespace dpmm {

inline constexpr int kDefaultLambdaMax = 64;

// A Gaussian mechanism run on a uniform without-replacement subsample of size
// batch_size out of dataset_size. noise_multiplier is the noise standard
// deviation divided by the per-invocation l2-sensitivity.
struct SubsampledMechanismSpec {
  int batch_size = 1;       // m
  int dataset_size = 2;     // n
  double noise_multiplier = 1.0;
  int invocations = 1;

  void validate() const;
};

// A plain (full-data) Gaussian mechanism with the given noise multiplier.
struct GaussianMechanismSpec {
  double noise_multiplier = 1.0;
  int invocations = 1;
};

using MechanismSpec = std::variant<SubsampledMechanismSpec, GaussianMechanismSpec>;
using MechanismSchedule = std::vector<MechanismSpec>;

// Log-moment bound for one invocation of a subsampled Gaussian mechanism:
//   m^2 n lambda(lambda+1) / (n^2 (n-m) sigma^2)
//     + higher_order_coeff * m^3 lambda^3 / (n^3 sigma^3).
// The higher-order coefficient defaults to 0; the closed-form noise
// calibrations are the conservative path for end-to-end claims.
double log_moment_subsampled(const SubsampledMechanismSpec& spec, int lambda,
                             double higher_order_coeff = 0.0);

// Log moment of a non-subsampled Gaussian mechanism with unit sensitivity:
// lambda(lambda+1) / (2 sigma^2).
double log_moment_gaussian(double noise_multiplier, int lambda);

// Per-order log-moments alpha(lambda) accumulated additively over mechanism
// invocations on the integer grid lambda = 1..lambda_max.
class AccountantLedger {
 public:
  explicit AccountantLedger(int lambda_max = kDefaultLambdaMax);

  int lambda_max() const { return static_cast<int>(log_moments_.size()); }
  double alpha(int lambda) const;
  std::span<const double> log_moments() const { return log_moments_; }

  // Adds one increment per lambda, ascending-lambda order. The increment grid
  // must match the ledger grid exactly.
  void accumulate(std::span<const double> increments);
  void accumulate(const AccountantLedger& other);
  // Adds `invocations` copies of the mechanism's per-invocation log moment.
  void accumulate(const MechanismSpec& mechanism, double higher_order_coeff = 0.0);

  // Tail bound: min over the lambda grid of exp(alpha(lambda) - lambda *
  // epsilon), capped at 1. If lambda_out is non-null it receives the argmin.
  double delta_for_epsilon(double epsilon, int* lambda_out = nullptr) const;

  // [{"lambda": 1, "alpha": ...}, ...] for audit output.
  nlohmann::json to_json() const;

 private:
  std::vector<double> log_moments_;
};

AccountantLedger compose(const AccountantLedger& ledger,
                         std::span<const double> increments);
AccountantLedger compose(const AccountantLedger& a, const AccountantLedger& b);

struct BudgetReport {
  double achieved_delta = 1.0;
  bool satisfied = false;
  int lambda_star = 0;
};

// Composes the whole schedule on a fresh ledger and evaluates the tail bound
// at budget.epsilon. A non-positive noise multiplier anywhere yields
// achieved_delta = 1 (no guarantee).
BudgetReport verify_budget(const MechanismSchedule& schedule,
                           const PrivacyBudget& budget,
                           int lambda_max = kDefaultLambdaMax,
                           double higher_order_coeff = 0.0);

}  // namespace dpmm

#endif  // DPMINIMAX_ACCOUNTANT_HPP_
