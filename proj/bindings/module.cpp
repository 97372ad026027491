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

#include <memory>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpminimax/dpminimax.hpp"

namespace py = pybind11;
using namespace dpmm;

namespace {

// The bindings pass explicit seeds instead of generator objects.
Vector py_gaussian_perturb(const Vector& v, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  return gaussian_perturb(v, sigma, rng);
}

std::vector<int> py_sample_batch(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  return sample_batch(n, m, rng);
}

py::dict constants_dict(const ProblemConstants& c) {
  py::dict d;
  d["lipschitz_x"] = c.lipschitz_x;
  d["lipschitz_y"] = c.lipschitz_y;
  d["smooth_x"] = c.smooth_x;
  d["smooth_y"] = c.smooth_y;
  d["smooth_xy"] = c.smooth_xy;
  d["strong_concavity"] = c.strong_concavity;
  d["loss_bound"] = c.loss_bound;
  d["diameter_y"] = c.diameter_y;
  return d;
}

py::dict trace_dict(const OptimizerTrace& trace) {
  py::list rounds, grad_phi, loss, est, noise, c2r;
  for (const auto& rec : trace.records) {
    rounds.append(rec.round);
    grad_phi.append(rec.grad_phi_norm);
    loss.append(rec.loss);
    est.append(rec.estimator_norm);
    noise.append(rec.noise_x_norm);
    c2r.append(rec.c2r);
  }
  py::dict d;
  d["round"] = rounds;
  d["grad_phi_norm"] = grad_phi;
  d["loss"] = loss;
  d["estimator_norm"] = est;
  d["noise_x_norm"] = noise;
  d["c2r"] = c2r;
  return d;
}

py::dict output_dict(const OptimizerOutput& out) {
  py::dict d;
  d["x_priv"] = out.x_priv;
  d["y_priv"] = out.y_priv;
  d["selected_round"] = out.selected_round;
  d["trace"] = trace_dict(out.trace);
  return d;
}

}  // namespace

PYBIND11_MODULE(_dpminimax, m) {
  m.doc() = "Differentially private minimax optimization (DP-SGDA and "
            "PrivateDiff Minimax) with moments-accountant calibration";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DivergenceError>(m, "DivergenceError");

  py::class_<PrivacyBudget>(m, "PrivacyBudget")
      .def(py::init<double, double>(), py::arg("epsilon"), py::arg("delta"))
      .def_readwrite("epsilon", &PrivacyBudget::epsilon)
      .def_readwrite("delta", &PrivacyBudget::delta);

  m.def("clip", &clip, py::arg("v"), py::arg("c"));
  m.def("gaussian_perturb", &py_gaussian_perturb, py::arg("v"),
        py::arg("sigma"), py::arg("seed") = 0);
  m.def("sample_batch", &py_sample_batch, py::arg("n"), py::arg("m"),
        py::arg("seed") = 0);
  m.def("project_simplex", &project_simplex, py::arg("v"));
  m.def("project_ball", &project_ball, py::arg("v"), py::arg("radius"));
  m.def(
      "auc_score",
      [](const std::vector<double>& scores, const std::vector<int>& labels) {
        return auc_score(scores, labels);
      },
      py::arg("scores"), py::arg("labels"));

  py::class_<SubsampledMechanismSpec>(m, "SubsampledMechanismSpec")
      .def(py::init([](int m_, int n_, double noise_multiplier, int invocations) {
             return SubsampledMechanismSpec{m_, n_, noise_multiplier, invocations};
           }),
           py::arg("batch_size"), py::arg("dataset_size"),
           py::arg("noise_multiplier"), py::arg("invocations") = 1)
      .def_readwrite("batch_size", &SubsampledMechanismSpec::batch_size)
      .def_readwrite("dataset_size", &SubsampledMechanismSpec::dataset_size)
      .def_readwrite("noise_multiplier", &SubsampledMechanismSpec::noise_multiplier)
      .def_readwrite("invocations", &SubsampledMechanismSpec::invocations);

  py::class_<GaussianMechanismSpec>(m, "GaussianMechanismSpec")
      .def(py::init([](double noise_multiplier, int invocations) {
             return GaussianMechanismSpec{noise_multiplier, invocations};
           }),
           py::arg("noise_multiplier"), py::arg("invocations") = 1)
      .def_readwrite("noise_multiplier", &GaussianMechanismSpec::noise_multiplier)
      .def_readwrite("invocations", &GaussianMechanismSpec::invocations);

  m.def(
      "log_moment_subsampled",
      [](int batch, int n, double noise_multiplier, int lambda, double c) {
        return log_moment_subsampled(
            SubsampledMechanismSpec{batch, n, noise_multiplier, 1}, lambda, c);
      },
      py::arg("batch_size"), py::arg("dataset_size"), py::arg("noise_multiplier"),
      py::arg("lam"), py::arg("higher_order_coeff") = 0.0);
  m.def("log_moment_gaussian", &log_moment_gaussian, py::arg("noise_multiplier"),
        py::arg("lam"));

  py::class_<AccountantLedger>(m, "AccountantLedger")
      .def(py::init<int>(), py::arg("lambda_max") = kDefaultLambdaMax)
      .def_property_readonly("lambda_max", &AccountantLedger::lambda_max)
      .def("alpha", &AccountantLedger::alpha, py::arg("lam"))
      .def("accumulate",
           [](AccountantLedger& ledger, const std::vector<double>& increments) {
             ledger.accumulate(increments);
           })
      .def("accumulate_gaussian",
           [](AccountantLedger& ledger, double noise_multiplier, int invocations) {
             ledger.accumulate(
                 MechanismSpec{GaussianMechanismSpec{noise_multiplier, invocations}});
           },
           py::arg("noise_multiplier"), py::arg("invocations") = 1)
      .def("accumulate_subsampled",
           [](AccountantLedger& ledger, int batch, int n, double noise_multiplier,
              int invocations) {
             ledger.accumulate(MechanismSpec{
                 SubsampledMechanismSpec{batch, n, noise_multiplier, invocations}});
           },
           py::arg("batch_size"), py::arg("dataset_size"),
           py::arg("noise_multiplier"), py::arg("invocations") = 1)
      .def("delta_for_epsilon",
           [](const AccountantLedger& ledger, double epsilon) {
             return ledger.delta_for_epsilon(epsilon);
           },
           py::arg("epsilon"));

  py::class_<NoiseScalesSgda>(m, "NoiseScalesSgda")
      .def_readonly("sigma_x", &NoiseScalesSgda::sigma_x)
      .def_readonly("sigma_y", &NoiseScalesSgda::sigma_y);
  py::class_<NoiseScalesPrivateDiff>(m, "NoiseScalesPrivateDiff")
      .def_readonly("sigma_x1", &NoiseScalesPrivateDiff::sigma_x1)
      .def_readonly("sigma_x2", &NoiseScalesPrivateDiff::sigma_x2)
      .def_readonly("sigma_y", &NoiseScalesPrivateDiff::sigma_y);

  m.def(
      "calibrate_sgda",
      [](const PrivacyBudget& budget, int n, int T, double c1, double c2) {
        return calibrate_sgda(budget, n, T, c1, c2);
      },
      py::arg("budget"), py::arg("n"), py::arg("T"), py::arg("c1"), py::arg("c2"));
  m.def(
      "calibrate_privatediff",
      [](const PrivacyBudget& budget, int n, int R, int T, double c0, double mu,
         double beta, double loss_bound) {
        return calibrate_privatediff(budget, n, R, T, c0, mu, beta, loss_bound);
      },
      py::arg("budget"), py::arg("n"), py::arg("R"), py::arg("T"), py::arg("c0"),
      py::arg("mu"), py::arg("beta"), py::arg("loss_bound"));
  m.def("sgda_batch_size", &sgda_batch_size, py::arg("n"), py::arg("epsilon"),
        py::arg("T"));
  m.def("privatediff_batch_size", &privatediff_batch_size, py::arg("n"),
        py::arg("epsilon"), py::arg("T"));
  m.def(
      "verify_budget",
      [](const std::vector<py::object>& mechanisms, const PrivacyBudget& budget,
         int lambda_max) {
        MechanismSchedule schedule;
        for (const auto& obj : mechanisms) {
          if (py::isinstance<SubsampledMechanismSpec>(obj)) {
            schedule.push_back(obj.cast<SubsampledMechanismSpec>());
          } else {
            schedule.push_back(obj.cast<GaussianMechanismSpec>());
          }
        }
        const BudgetReport report = verify_budget(schedule, budget, lambda_max);
        py::dict d;
        d["achieved_delta"] = report.achieved_delta;
        d["satisfied"] = report.satisfied;
        d["lambda_star"] = report.lambda_star;
        return d;
      },
      py::arg("mechanisms"), py::arg("budget"),
      py::arg("lambda_max") = kDefaultLambdaMax);

  py::class_<MinimaxProblem, std::shared_ptr<MinimaxProblem>>(m, "MinimaxProblem")
      .def_property_readonly("n", &MinimaxProblem::sample_count)
      .def_property_readonly("d1", &MinimaxProblem::dim_x)
      .def_property_readonly("d2", &MinimaxProblem::dim_y)
      .def("constants",
           [](const MinimaxProblem& p) { return constants_dict(p.constants()); })
      .def("loss", &MinimaxProblem::sample_loss, py::arg("x"), py::arg("y"),
           py::arg("i"))
      .def("grad_x", &MinimaxProblem::grad_x, py::arg("x"), py::arg("y"),
           py::arg("i"))
      .def("grad_y", &MinimaxProblem::grad_y, py::arg("x"), py::arg("y"),
           py::arg("i"))
      .def("averaged_loss", &MinimaxProblem::averaged_loss, py::arg("x"),
           py::arg("y"))
      .def("averaged_grad_x", &MinimaxProblem::averaged_grad_x, py::arg("x"),
           py::arg("y"))
      .def("averaged_grad_y", &MinimaxProblem::averaged_grad_y, py::arg("x"),
           py::arg("y"))
      .def("project_y", &MinimaxProblem::project_y, py::arg("y"))
      .def("has_phi_oracle", &MinimaxProblem::has_phi_oracle)
      .def("phi",
           [](const MinimaxProblem& p, const Vector& x) {
             const PhiValue v = p.phi(x);
             return py::make_tuple(v.value, v.grad);
           },
           py::arg("x"))
      .def("y_star", &MinimaxProblem::y_star, py::arg("x"));

  m.def(
      "make_quadratic",
      [](int n, int d1, int d2, double sin_weight, double ridge, double mu,
         double diameter_y, double x_box, double coupling_spread,
         std::uint64_t data_seed) -> std::shared_ptr<MinimaxProblem> {
        Rng rng(data_seed);
        return make_quadratic(random_quadratic_spec(n, d1, d2, sin_weight, ridge,
                                                    mu, diameter_y, x_box,
                                                    coupling_spread, rng));
      },
      py::arg("n"), py::arg("d1"), py::arg("d2"), py::arg("sin_weight") = 1.0,
      py::arg("ridge") = 0.5, py::arg("mu") = 1.0, py::arg("diameter_y") = 2.0,
      py::arg("x_box") = 2.0, py::arg("coupling_spread") = 0.25,
      py::arg("data_seed") = 0);
  m.def(
      "make_auc",
      [](const Matrix& features, const std::vector<int>& labels,
         double lambda_alpha, double x_box) -> std::shared_ptr<MinimaxProblem> {
        AucDataset data;
        data.features = features;
        data.labels = labels;
        return make_auc(std::move(data), lambda_alpha, x_box);
      },
      py::arg("features"), py::arg("labels"), py::arg("lambda_alpha") = 2.0,
      py::arg("x_box") = 2.0);
  m.def(
      "synthetic_auc",
      [](int n, int dim, double positive_ratio, double separation,
         std::uint64_t seed) {
        Rng rng(seed);
        const AucDataset data = synthetic_auc(n, dim, positive_ratio, separation, rng);
        return py::make_tuple(data.features, data.labels);
      },
      py::arg("n"), py::arg("dim"), py::arg("positive_ratio"),
      py::arg("separation"), py::arg("seed") = 0);

  py::class_<SgdaConfig>(m, "SgdaConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &SgdaConfig::iterations)
      .def_readwrite("batch_size", &SgdaConfig::batch_size)
      .def_readwrite("step_x", &SgdaConfig::step_x)
      .def_readwrite("step_y", &SgdaConfig::step_y)
      .def_readwrite("clip_x", &SgdaConfig::clip_x)
      .def_readwrite("clip_y", &SgdaConfig::clip_y)
      .def_readwrite("sigma_x", &SgdaConfig::sigma_x)
      .def_readwrite("sigma_y", &SgdaConfig::sigma_y)
      .def_readwrite("seed", &SgdaConfig::seed)
      .def_readwrite("x0", &SgdaConfig::x0)
      .def_readwrite("y0", &SgdaConfig::y0)
      .def_readwrite("metrics_stride", &SgdaConfig::metrics_stride)
      .def_readwrite("store_iterates", &SgdaConfig::store_iterates);

  py::class_<PrivateDiffConfig>(m, "PrivateDiffConfig")
      .def(py::init<>())
      .def_readwrite("rounds", &PrivateDiffConfig::rounds)
      .def_readwrite("restart_interval", &PrivateDiffConfig::restart_interval)
      .def_readwrite("inner_iterations", &PrivateDiffConfig::inner_iterations)
      .def_readwrite("batch_size", &PrivateDiffConfig::batch_size)
      .def_readwrite("step_x", &PrivateDiffConfig::step_x)
      .def_readwrite("clip_sga", &PrivateDiffConfig::clip_sga)
      .def_readwrite("clip_restart", &PrivateDiffConfig::clip_restart)
      .def_readwrite("clip_diff_slope", &PrivateDiffConfig::clip_diff_slope)
      .def_readwrite("clip_diff_const", &PrivateDiffConfig::clip_diff_const)
      .def_readwrite("sigma_x1", &PrivateDiffConfig::sigma_x1)
      .def_readwrite("sigma_x2", &PrivateDiffConfig::sigma_x2)
      .def_readwrite("sigma_y", &PrivateDiffConfig::sigma_y)
      .def_readwrite("seed", &PrivateDiffConfig::seed)
      .def_readwrite("x0", &PrivateDiffConfig::x0)
      .def_readwrite("y0", &PrivateDiffConfig::y0)
      .def_readwrite("metrics_stride", &PrivateDiffConfig::metrics_stride)
      .def_readwrite("store_iterates", &PrivateDiffConfig::store_iterates);

  m.def(
      "dp_sgda",
      [](const MinimaxProblem& problem, const SgdaConfig& config) {
        return output_dict(dp_sgda(problem, config));
      },
      py::arg("problem"), py::arg("config"));
  m.def(
      "privatediff_minimax",
      [](const MinimaxProblem& problem, const PrivateDiffConfig& config) {
        return output_dict(privatediff_minimax(problem, config));
      },
      py::arg("problem"), py::arg("config"));
  m.def(
      "minibatch_sga",
      [](const MinimaxProblem& problem, const Vector& x, const Vector& y0,
         int iterations, double clip_threshold, int batch_size,
         std::uint64_t seed) {
        Rng rng(seed);
        return minibatch_sga(problem, x, y0, iterations, clip_threshold,
                             batch_size, rng);
      },
      py::arg("problem"), py::arg("x"), py::arg("y0"), py::arg("iterations"),
      py::arg("clip_threshold"), py::arg("batch_size"), py::arg("seed") = 0);
  m.def(
      "gda_reference",
      [](const MinimaxProblem& problem, int iterations, double step_x,
         double step_y) {
        return output_dict(gda_reference(problem, iterations, step_x, step_y));
      },
      py::arg("problem"), py::arg("iterations"), py::arg("step_x"),
      py::arg("step_y"));

  m.def(
      "suggest_sgda_schedule",
      [](const MinimaxProblem& problem, const PrivacyBudget& budget) {
        const auto s = suggest_sgda_schedule(
            problem.constants(), problem.sample_count(),
            std::max(problem.dim_x(), problem.dim_y()), budget);
        py::dict d;
        d["T"] = s.iterations;
        d["m"] = s.batch_size;
        d["eta_x"] = s.step_x;
        d["eta_y"] = s.step_y;
        d["C1"] = s.clip_x;
        d["C2"] = s.clip_y;
        d["sigma_x"] = s.noise.sigma_x;
        d["sigma_y"] = s.noise.sigma_y;
        return d;
      },
      py::arg("problem"), py::arg("budget"));

  m.def(
      "run_experiment_text",
      [](const std::string& config_text, std::uint64_t seed_offset,
         bool write_files) {
        const ExperimentConfig cfg = parse_config_text(config_text);
        const ExperimentResult result = run_experiment(cfg, seed_offset, write_files);
        return py::module_::import("json").attr("loads")(result.summary.dump());
      },
      py::arg("config_text"), py::arg("seed_offset") = 0,
      py::arg("write_files") = false);
}
