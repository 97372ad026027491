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

#include <cmath>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "dpminimax/accountant.hpp"
#include "dpminimax/calibration.hpp"
#include "dpminimax/mechanisms.hpp"
#include "dpminimax/rng.hpp"

using namespace dpmm;

namespace {

Vector make_vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("clip identity below threshold") {
  const Vector v = make_vec({3.0, 4.0});
  const Vector out = clip(v, 10.0);
  CHECK(out == v);
}

TEST_CASE("clip rescales to the threshold") {
  const Vector out = clip(make_vec({3.0, 4.0}), 1.0);
  CHECK(out[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("clip fixes the zero vector") {
  const Vector out = clip(make_vec({0.0, 0.0}), 1.0);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("clip rejects bad inputs") {
  CHECK_THROWS_AS(clip(make_vec({1.0}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(clip(make_vec({1.0}), -1.0), std::invalid_argument);
  Vector bad = make_vec({1.0, 2.0});
  bad[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(clip(bad, 1.0), std::invalid_argument);
}

TEST_CASE("clip norm bound and direction over random vectors") {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const int dim = 1 + rng.below(64);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = 10.0 * rng.normal();
    const double c = 0.01 + 5.0 * rng.uniform();
    const Vector out = clip(v, c);
    CHECK(out.norm() <= c * (1.0 + 1e-12));
    // Direction preserved: out * ||v|| == v * ||out|| componentwise.
    const double vn = v.norm();
    const double on = out.norm();
    for (int i = 0; i < dim; ++i) {
      CHECK(out[i] * vn == doctest::Approx(v[i] * on).epsilon(1e-12));
    }
  }
}

TEST_CASE("gaussian_perturb zero sigma is the identity") {
  Rng rng(1);
  const Vector v = make_vec({1.0, 2.0});
  const Vector out = gaussian_perturb(v, 0.0, rng);
  CHECK(out == v);
  CHECK_THROWS_AS(gaussian_perturb(v, -0.5, rng), std::invalid_argument);
}

TEST_CASE("gaussian_perturb empirical mean and variance") {
  Rng rng(42);
  const Vector v = make_vec({1.0, -2.0, 0.5, 3.0});
  const int draws = 100000;

  Vector mean = Vector::Zero(4);
  for (int k = 0; k < draws; ++k) {
    mean += gaussian_perturb(v, 1.0, rng) - v;
  }
  mean /= draws;
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(mean[i]) < 0.02);  // ~6 sigma at N = 1e5
  }

  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double noise = gaussian_perturb(make_vec({0.0}), 2.0, rng)[0];
    sum += noise;
    sum_sq += noise * noise;
  }
  const double variance = sum_sq / draws - (sum / draws) * (sum / draws);
  CHECK(variance == doctest::Approx(4.0).epsilon(0.025));  // +/- 0.1
}

TEST_CASE("subsampled log moment matches the closed form") {
  // m=10, n=1000, sigma=2, lambda=4: 100*1000*20 / (1e6*990*4).
  const SubsampledMechanismSpec spec{10, 1000, 2.0, 1};
  const double expected = 100.0 * 1000.0 * 20.0 / (1e6 * 990.0 * 4.0);
  CHECK(log_moment_subsampled(spec, 4) == doctest::Approx(expected).epsilon(1e-14));

  // Higher-order term with an explicit coefficient.
  const double with_c = log_moment_subsampled(spec, 4, 0.5);
  const double higher = 0.5 * 1000.0 * 64.0 / (1e9 * 8.0);
  CHECK(with_c == doctest::Approx(expected + higher).epsilon(1e-14));
}

TEST_CASE("subsampled log moment rejects lambda 0 and m >= n") {
  const SubsampledMechanismSpec spec{10, 1000, 2.0, 1};
  CHECK_THROWS_AS(log_moment_subsampled(spec, 0), std::invalid_argument);
  CHECK_THROWS_AS(
      log_moment_subsampled(SubsampledMechanismSpec{1000, 1000, 2.0, 1}, 1),
      std::invalid_argument);
}

TEST_CASE("subsampled log moment vanishes as n grows and scales as 1/sigma^2") {
  const double v1 =
      log_moment_subsampled(SubsampledMechanismSpec{1, 1000000, 1.0, 1}, 1);
  CHECK(v1 < 1e-10);
  const double base =
      log_moment_subsampled(SubsampledMechanismSpec{10, 1000, 1.0, 1}, 4);
  const double doubled =
      log_moment_subsampled(SubsampledMechanismSpec{10, 1000, 2.0, 1}, 4);
  CHECK(doubled == doctest::Approx(base / 4.0).epsilon(1e-14));
}

TEST_CASE("ledger composition is additive and order independent") {
  AccountantLedger ledger(8);
  std::vector<double> a(8), b(8);
  for (int i = 0; i < 8; ++i) {
    a[static_cast<std::size_t>(i)] = 0.1 * (i + 1);
    b[static_cast<std::size_t>(i)] = 0.03 * (i + 1);
  }
  const AccountantLedger ab = compose(compose(ledger, a), b);
  const AccountantLedger ba = compose(compose(ledger, b), a);
  AccountantLedger both(8);
  both.accumulate(a);
  both.accumulate(b);
  for (int lambda = 1; lambda <= 8; ++lambda) {
    CHECK(ab.alpha(lambda) == ba.alpha(lambda));
    CHECK(ab.alpha(lambda) == both.alpha(lambda));
  }
}

TEST_CASE("ledger repeated accumulation equals T times the increment") {
  AccountantLedger ledger(4);
  const std::vector<double> inc = {0.5, 1.0, 1.5, 2.0};
  const int T = 7;
  for (int t = 0; t < T; ++t) ledger.accumulate(inc);
  for (int lambda = 1; lambda <= 4; ++lambda) {
    CHECK(ledger.alpha(lambda) ==
          doctest::Approx(T * inc[static_cast<std::size_t>(lambda - 1)])
              .epsilon(1e-15));
  }
}

TEST_CASE("ledger zero increment is the identity, grid mismatch rejected") {
  AccountantLedger ledger(4);
  ledger.accumulate(std::vector<double>{1.0, 2.0, 3.0, 4.0});
  const AccountantLedger same =
      compose(ledger, std::vector<double>{0.0, 0.0, 0.0, 0.0});
  for (int lambda = 1; lambda <= 4; ++lambda) {
    CHECK(same.alpha(lambda) == ledger.alpha(lambda));
  }
  CHECK_THROWS_AS(ledger.accumulate(std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ledger.accumulate(std::vector<double>{-1.0, 0.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AccountantLedger(0), std::invalid_argument);
}

TEST_CASE("tail bound on the plain Gaussian ledger") {
  // alpha(lambda) = lambda(lambda+1)/(2*16), epsilon = 1, grid 1..64:
  // maximized at lambda in {15,16}, delta = exp(-7.5).
  AccountantLedger ledger(64);
  std::vector<double> inc(64);
  for (int lambda = 1; lambda <= 64; ++lambda) {
    inc[static_cast<std::size_t>(lambda - 1)] = log_moment_gaussian(4.0, lambda);
  }
  ledger.accumulate(inc);
  int lambda_star = 0;
  const double delta = ledger.delta_for_epsilon(1.0, &lambda_star);
  CHECK(delta == doctest::Approx(std::exp(-7.5)).epsilon(1e-12));
  CHECK(std::abs(delta - 5.530843701478336e-4) < 1e-6);
  CHECK((lambda_star == 15 || lambda_star == 16));
}

TEST_CASE("tail bound on the zero ledger and monotonicity in epsilon") {
  AccountantLedger ledger(32);
  CHECK(ledger.delta_for_epsilon(2.0) ==
        doctest::Approx(std::exp(-32.0 * 2.0)).epsilon(1e-12));

  AccountantLedger loaded(32);
  std::vector<double> inc(32);
  for (int lambda = 1; lambda <= 32; ++lambda) {
    inc[static_cast<std::size_t>(lambda - 1)] = log_moment_gaussian(2.0, lambda);
  }
  loaded.accumulate(inc);
  double prev = 2.0;  // anything > 1
  for (double eps = 0.1; eps <= 3.0; eps += 0.1) {
    const double delta = loaded.delta_for_epsilon(eps);
    CHECK(delta <= prev * (1.0 + 1e-12));
    prev = delta;
  }
  CHECK_THROWS_AS(loaded.delta_for_epsilon(0.0), std::invalid_argument);
}

TEST_CASE("tail bound is monotone in the noise multiplier") {
  double prev = 1.0;
  for (const double sigma : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    AccountantLedger ledger(64);
    ledger.accumulate(MechanismSpec{GaussianMechanismSpec{sigma, 10}});
    const double delta = ledger.delta_for_epsilon(1.0);
    CHECK(delta <= prev * (1.0 + 1e-12));
    prev = delta;
  }
}

TEST_CASE("ledger serializes to lambda/alpha rows") {
  AccountantLedger ledger(3);
  ledger.accumulate(std::vector<double>{0.5, 1.0, 1.5});
  const auto j = ledger.to_json();
  REQUIRE(j.size() == 3);
  CHECK(j[0]["lambda"] == 1);
  CHECK(j[2]["alpha"] == doctest::Approx(1.5));
}

TEST_CASE("dp-sgda calibration reproduces the closed form") {
  const PrivacyBudget budget{1.0, 1e-6};
  const auto scales = calibrate_sgda(budget, 1000, 100, 1.0, 1.0);
  const double expected = 8.0 * std::sqrt(100.0 * std::log(1e6)) / 1000.0;
  CHECK(std::abs(scales.sigma_x - expected) < 1e-12);
  CHECK(std::abs(scales.sigma_y - expected) < 1e-12);

  // Linear in the clipping threshold.
  const auto doubled = calibrate_sgda(budget, 1000, 100, 2.0, 1.0);
  CHECK(doubled.sigma_x == doctest::Approx(2.0 * scales.sigma_x).epsilon(1e-15));

  CHECK_THROWS_AS(calibrate_sgda(budget, 1000, 0, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(calibrate_sgda(budget, 0, 10, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("dp-sgda calibration scales as 1/(n eps) and sqrt(T)") {
  const PrivacyBudget b1{0.5, 1e-6};
  const auto s1 = calibrate_sgda(b1, 1000, 100, 1.0, 1.0);
  const auto s2 = calibrate_sgda(PrivacyBudget{1.0, 1e-6}, 2000, 100, 1.0, 1.0);
  CHECK(s1.sigma_x == doctest::Approx(4.0 * s2.sigma_x).epsilon(1e-12));
  const auto s4t = calibrate_sgda(b1, 1000, 400, 1.0, 1.0);
  CHECK(s4t.sigma_x == doctest::Approx(2.0 * s1.sigma_x).epsilon(1e-12));
}

TEST_CASE("calibration warns outside the stated regime") {
  std::vector<std::string> warnings;
  calibrate_sgda(PrivacyBudget{5.0, 0.5}, 10, 10, 1.0, 1.0, &warnings);
  CHECK(warnings.size() == 2);
  warnings.clear();
  calibrate_sgda(PrivacyBudget{0.5, 1e-9}, 100, 10, 1.0, 1.0, &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("privatediff calibration reproduces the closed forms") {
  const PrivacyBudget budget{1.0, 1e-6};
  const auto scales = calibrate_privatediff(budget, 1000, 100, 4, 1.0, 1.0,
                                            1.0, 0.0);
  const double log_term = std::log(1e6);
  CHECK(std::abs(scales.sigma_x1 - 4.0 * std::sqrt(25.0 * log_term) / 1000.0) <
        1e-12);
  CHECK(std::abs(scales.sigma_x2 - 4.0 * std::sqrt(100.0 * log_term) / 1000.0) <
        1e-12);
  CHECK(scales.sigma_x1 ==
        doctest::Approx(scales.sigma_x2 / 2.0).epsilon(1e-15));  // 1/sqrt(T)

  // sigma_y = 4 (2 c0^2 + beta M) sqrt(R L) / (mu n eps); zero c0 and M kill it.
  const auto zero = calibrate_privatediff(budget, 1000, 100, 4, 0.0, 2.0, 1.0, 0.0);
  CHECK(zero.sigma_y == 0.0);
  const auto with_mu =
      calibrate_privatediff(budget, 1000, 100, 4, 1.0, 2.0, 1.0, 3.0);
  const double expected_y =
      4.0 * (2.0 + 3.0) * std::sqrt(100.0 * log_term) / (2.0 * 1000.0);
  CHECK(std::abs(with_mu.sigma_y - expected_y) < 1e-12);

  CHECK_THROWS_AS(calibrate_privatediff(budget, 1000, 4, 8, 1.0, 1.0, 1.0, 0.0),
                  std::invalid_argument);  // T > R
  CHECK_THROWS_AS(calibrate_privatediff(budget, 1000, 100, 4, 1.0, 0.0, 1.0, 0.0),
                  std::invalid_argument);  // mu = 0
}

TEST_CASE("sigma_x1 carries the 1/sqrt(T) factor for any T") {
  const PrivacyBudget budget{0.7, 1e-5};
  for (const int t : {1, 2, 5, 10, 50}) {
    const auto s = calibrate_privatediff(budget, 500, 50, t, 1.0, 1.0, 1.0, 1.0);
    CHECK(s.sigma_x1 ==
          doctest::Approx(s.sigma_x2 / std::sqrt(double(t))).epsilon(1e-12));
    CHECK(s.sigma_x1 <= s.sigma_x2 * (1.0 + 1e-15));
  }
}

TEST_CASE("companion batch sizes") {
  CHECK(sgda_batch_size(1000, 1.0, 100) == 50);  // 1000 sqrt(1/400)
  CHECK(sgda_batch_size(10, 1.0, 10000) == 1);
  CHECK(privatediff_batch_size(1000, 1.0, 2) == 250);  // 1000 sqrt(1/16)
  CHECK(privatediff_batch_size(1000, 64.0, 1) == 1000);  // clamped to n
}

TEST_CASE("verify_budget composes a full schedule") {
  const PrivacyBudget budget{1.0, 1e-3};

  // Empty schedule: delta = exp(-lambda_max * eps).
  const auto empty = verify_budget({}, budget, 64);
  CHECK(empty.achieved_delta == doctest::Approx(std::exp(-64.0)).epsilon(1e-12));
  CHECK(empty.satisfied);

  // Single subsampled Gaussian: compose then tail bound by hand.
  MechanismSchedule schedule{SubsampledMechanismSpec{10, 1000, 2.0, 1}};
  AccountantLedger hand(64);
  std::vector<double> inc(64);
  for (int lambda = 1; lambda <= 64; ++lambda) {
    inc[static_cast<std::size_t>(lambda - 1)] =
        log_moment_subsampled(SubsampledMechanismSpec{10, 1000, 2.0, 1}, lambda);
  }
  hand.accumulate(inc);
  const auto single = verify_budget(schedule, budget, 64);
  CHECK(single.achieved_delta ==
        doctest::Approx(hand.delta_for_epsilon(1.0)).epsilon(1e-12));

  // Enormous noise multiplier: alpha -> 0, delta -> exp(-lambda_max eps).
  const auto huge = verify_budget(
      {SubsampledMechanismSpec{10, 1000, 1e9, 5}}, budget, 64);
  CHECK(huge.achieved_delta ==
        doctest::Approx(std::exp(-64.0)).epsilon(1e-6));

  // No noise anywhere: no guarantee.
  const auto none = verify_budget({GaussianMechanismSpec{0.0, 3}}, budget, 64);
  CHECK(none.achieved_delta == 1.0);
  CHECK_FALSE(none.satisfied);
}

TEST_CASE("sample_batch returns distinct indices, full batch unpermuted") {
  Rng rng(3);
  const auto full = sample_batch(5, 5, rng);
  CHECK(full == std::vector<int>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(sample_batch(4, 5, rng), std::invalid_argument);

  for (int trial = 0; trial < 200; ++trial) {
    const auto batch = sample_batch(20, 7, rng);
    std::vector<bool> seen(20, false);
    for (const int idx : batch) {
      CHECK(idx >= 0);
      CHECK(idx < 20);
      CHECK_FALSE(seen[static_cast<std::size_t>(idx)]);
      seen[static_cast<std::size_t>(idx)] = true;
    }
  }
}

TEST_CASE("sample_batch is uniform over singletons") {
  Rng rng(11);
  int count0 = 0;
  for (int k = 0; k < 10000; ++k) {
    count0 += sample_batch(2, 1, rng)[0] == 0 ? 1 : 0;
  }
  CHECK(count0 > 5000 - 150);
  CHECK(count0 < 5000 + 150);
}

TEST_CASE("rng determinism") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.normal() == b.normal());
    CHECK(a.uniform() == b.uniform());
  }
}
