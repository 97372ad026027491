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

#include "dpminimax/accountant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpmm {

void SubsampledMechanismSpec::validate() const {
  if (batch_size < 1 || batch_size >= dataset_size) {
    throw std::invalid_argument(
        "SubsampledMechanismSpec: need 1 <= batch_size < dataset_size "
        "(the amplification bound diverges at m = n)");
  }
  if (!(noise_multiplier > 0.0)) {
    throw std::invalid_argument(
        "SubsampledMechanismSpec: noise_multiplier must be positive");
  }
  if (invocations < 0) {
    throw std::invalid_argument(
        "SubsampledMechanismSpec: invocations must be nonnegative");
  }
}

double log_moment_subsampled(const SubsampledMechanismSpec& spec, int lambda,
                             double higher_order_coeff) {
  spec.validate();
  if (lambda < 1) {
    throw std::invalid_argument("log_moment_subsampled: lambda must be >= 1");
  }
  const double m = spec.batch_size;
  const double n = spec.dataset_size;
  const double sigma = spec.noise_multiplier;
  const double lam = lambda;
  const double leading = m * m * n * lam * (lam + 1.0) /
                         (n * n * (n - m) * sigma * sigma);
  const double higher = higher_order_coeff * m * m * m * lam * lam * lam /
                        (n * n * n * sigma * sigma * sigma);
  return leading + higher;
}

double log_moment_gaussian(double noise_multiplier, int lambda) {
  if (!(noise_multiplier > 0.0)) {
    throw std::invalid_argument(
        "log_moment_gaussian: noise_multiplier must be positive");
  }
  if (lambda < 1) {
    throw std::invalid_argument("log_moment_gaussian: lambda must be >= 1");
  }
  const double lam = lambda;
  return lam * (lam + 1.0) / (2.0 * noise_multiplier * noise_multiplier);
}

AccountantLedger::AccountantLedger(int lambda_max) {
  if (lambda_max < 1) {
    throw std::invalid_argument("AccountantLedger: lambda_max must be >= 1");
  }
  log_moments_.assign(static_cast<std::size_t>(lambda_max), 0.0);
}

double AccountantLedger::alpha(int lambda) const {
  if (lambda < 1 || lambda > lambda_max()) {
    throw std::out_of_range("AccountantLedger::alpha: lambda outside grid");
  }
  return log_moments_[static_cast<std::size_t>(lambda - 1)];
}

void AccountantLedger::accumulate(std::span<const double> increments) {
  if (static_cast<int>(increments.size()) != lambda_max()) {
    throw std::invalid_argument(
        "AccountantLedger: increment grid does not match the ledger grid");
  }
  for (std::size_t i = 0; i < log_moments_.size(); ++i) {
    const double inc = increments[i];
    if (std::isnan(inc) || inc < 0.0) {
      throw std::invalid_argument(
          "AccountantLedger: log-moment increments must be nonnegative");
    }
    log_moments_[i] += inc;
  }
}

void AccountantLedger::accumulate(const AccountantLedger& other) {
  accumulate(other.log_moments());
}

void AccountantLedger::accumulate(const MechanismSpec& mechanism,
                                  double higher_order_coeff) {
  std::vector<double> inc(log_moments_.size(), 0.0);
  for (int lambda = 1; lambda <= lambda_max(); ++lambda) {
    double one = 0.0;
    if (const auto* sub = std::get_if<SubsampledMechanismSpec>(&mechanism)) {
      one = sub->invocations *
            log_moment_subsampled(*sub, lambda, higher_order_coeff);
    } else {
      const auto& g = std::get<GaussianMechanismSpec>(mechanism);
      one = g.invocations * log_moment_gaussian(g.noise_multiplier, lambda);
    }
    inc[static_cast<std::size_t>(lambda - 1)] = one;
  }
  accumulate(inc);
}

double AccountantLedger::delta_for_epsilon(double epsilon,
                                           int* lambda_out) const {
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument(
        "AccountantLedger::delta_for_epsilon: epsilon must be positive");
  }
  double best = std::numeric_limits<double>::infinity();
  int best_lambda = 1;
  for (int lambda = 1; lambda <= lambda_max(); ++lambda) {
    const double exponent = alpha(lambda) - lambda * epsilon;
    if (exponent < best) {
      best = exponent;
      best_lambda = lambda;
    }
  }
  if (lambda_out != nullptr) {
    *lambda_out = best_lambda;
  }
  return std::min(1.0, std::exp(best));
}

nlohmann::json AccountantLedger::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int lambda = 1; lambda <= lambda_max(); ++lambda) {
    rows.push_back({{"lambda", lambda}, {"alpha", alpha(lambda)}});
  }
  return rows;
}

AccountantLedger compose(const AccountantLedger& ledger,
                         std::span<const double> increments) {
  AccountantLedger out = ledger;
  out.accumulate(increments);
  return out;
}

AccountantLedger compose(const AccountantLedger& a, const AccountantLedger& b) {
  AccountantLedger out = a;
  out.accumulate(b);
  return out;
}

BudgetReport verify_budget(const MechanismSchedule& schedule,
                           const PrivacyBudget& budget, int lambda_max,
                           double higher_order_coeff) {
  budget.validate();
  BudgetReport report;
  for (const auto& mechanism : schedule) {
    const double multiplier =
        std::holds_alternative<SubsampledMechanismSpec>(mechanism)
            ? std::get<SubsampledMechanismSpec>(mechanism).noise_multiplier
            : std::get<GaussianMechanismSpec>(mechanism).noise_multiplier;
    if (!(multiplier > 0.0)) {
      report.achieved_delta = 1.0;  // no guarantee without noise
      report.satisfied = false;
      return report;
    }
  }
  AccountantLedger ledger(lambda_max);
  for (const auto& mechanism : schedule) {
    ledger.accumulate(mechanism, higher_order_coeff);
  }
  report.achieved_delta =
      ledger.delta_for_epsilon(budget.epsilon, &report.lambda_star);
  report.satisfied = report.achieved_delta <= budget.delta;
  return report;
}

}  // namespace dpmm
