# Copyright 2026 The dpminimax Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

dpmm = pytest.importorskip("dpminimax")


def test_clip():
    v = np.array([3.0, 4.0])
    np.testing.assert_allclose(dpmm.clip(v, 10.0), v)
    np.testing.assert_allclose(dpmm.clip(v, 1.0), [0.6, 0.8], rtol=1e-15)
    with pytest.raises(ValueError):
        dpmm.clip(v, -1.0)


def test_gaussian_perturb_deterministic():
    v = np.array([1.0, 2.0, 3.0])
    a = dpmm.gaussian_perturb(v, 0.5, seed=7)
    b = dpmm.gaussian_perturb(v, 0.5, seed=7)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(dpmm.gaussian_perturb(v, 0.0, seed=7), v)


def test_accountant_tail_bound():
    ledger = dpmm.AccountantLedger(64)
    ledger.accumulate_gaussian(4.0, 1)
    assert ledger.delta_for_epsilon(1.0) == pytest.approx(math.exp(-7.5), rel=1e-12)


def test_subsampled_log_moment():
    value = dpmm.log_moment_subsampled(10, 1000, 2.0, 4)
    assert value == pytest.approx(100.0 * 1000.0 * 20.0 / (1e6 * 990.0 * 4.0), rel=1e-14)


def test_calibrations():
    budget = dpmm.PrivacyBudget(1.0, 1e-6)
    scales = dpmm.calibrate_sgda(budget, 1000, 100, 1.0, 1.0)
    assert scales.sigma_x == pytest.approx(
        8.0 * math.sqrt(100.0 * math.log(1e6)) / 1000.0, abs=1e-12
    )
    pd = dpmm.calibrate_privatediff(budget, 1000, 100, 4, 1.0, 1.0, 1.0, 0.0)
    assert pd.sigma_x1 == pytest.approx(pd.sigma_x2 / 2.0, rel=1e-12)


def test_verify_budget():
    budget = dpmm.PrivacyBudget(1.0, 1e-3)
    schedule = [dpmm.SubsampledMechanismSpec(10, 1000, 8.0, 50)]
    report = dpmm.verify_budget(schedule, budget)
    assert 0.0 < report["achieved_delta"] < 1.0


def test_simplex_projection():
    np.testing.assert_allclose(
        dpmm.project_simplex(np.array([0.2, 0.9])), [0.15, 0.85], atol=1e-12
    )


def test_auc_score():
    assert dpmm.auc_score([0.9, 0.8, 0.3], [1, 1, -1]) == 1.0
    assert dpmm.auc_score([0.2, 0.9], [1, -1]) == 0.0


def test_quadratic_problem_and_sgda():
    problem = dpmm.make_quadratic(n=30, d1=3, d2=2, data_seed=5)
    assert problem.n == 30
    value, grad = problem.phi(np.zeros(3))
    assert np.isfinite(value)
    assert grad.shape == (3,)

    config = dpmm.SgdaConfig()
    config.iterations = 10
    config.batch_size = 6
    config.step_x = 0.05
    config.step_y = 0.1
    config.clip_x = 1.0
    config.clip_y = 1.0
    config.sigma_x = 0.1
    config.sigma_y = 0.1
    config.seed = 3
    out1 = dpmm.dp_sgda(problem, config)
    out2 = dpmm.dp_sgda(problem, config)
    np.testing.assert_array_equal(out1["x_priv"], out2["x_priv"])
    assert len(out1["trace"]["round"]) == 11


def test_privatediff_runs():
    problem = dpmm.make_quadratic(n=20, d1=3, d2=2, data_seed=9)
    config = dpmm.PrivateDiffConfig()
    config.rounds = 8
    config.restart_interval = 2
    config.inner_iterations = 3
    config.batch_size = 5
    config.step_x = 0.05
    config.clip_sga = 1.0
    config.clip_restart = 1.0
    config.clip_diff_slope = 1.0
    config.clip_diff_const = 0.1
    config.sigma_x1 = 0.1
    config.sigma_x2 = 0.1
    config.sigma_y = 0.05
    config.seed = 11
    out = dpmm.privatediff_minimax(problem, config)
    assert len(out["trace"]["round"]) == 8
    assert 1 <= out["selected_round"] <= 8


def test_run_experiment_text():
    config = """
problem = quadratic
algorithm = dp_sgda
quadratic.n = 30
quadratic.d1 = 3
quadratic.d2 = 2
budget.epsilon = 1.0
budget.delta = 1e-6
sgda.T = 5
sgda.m = 6
sgda.eta_x = 0.05
sgda.eta_y = 0.1
sgda.C1 = 1.0
sgda.C2 = 1.0
seeds = 1,2
"""
    summary = dpmm.run_experiment_text(config)
    assert summary["algorithm"] == "dp_sgda"
    assert len(summary["seeds"]) == 2
    assert summary["accountant"]["achieved_delta"] <= 1.0
