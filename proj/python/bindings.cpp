// Copyright 2026 The steinrep Authors
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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steinrep/errors.hpp"
#include "steinrep/estimators.hpp"
#include "steinrep/experiment.hpp"
#include "steinrep/gvm_densities.hpp"
#include "steinrep/oracle.hpp"

namespace py = pybind11;
using namespace steinrep;

namespace {

using Rows = std::vector<std::vector<double>>;

Vector vec(const std::vector<double>& v) { return Vector(v); }

GaussianParams gaussian(const std::vector<double>& mu, const Rows& sigma) {
  return GaussianParams(vec(mu), Matrix::from_rows(sigma));
}

GvmParams gvm(const std::vector<double>& mu, const std::vector<double>& alpha, const Rows& sigma) {
  return GvmParams(vec(mu), vec(alpha), Matrix::from_rows(sigma));
}

EstimatorConfig estimator_config(std::size_t n, std::uint64_t seed, bool symmetrize,
                                 bool marginalized, unsigned threads) {
  EstimatorConfig cfg(n, RandomStream(seed));
  cfg.symmetrize_sigma = symmetrize;
  cfg.marginalized = marginalized;
  cfg.threads = threads;
  return cfg;
}

GradTarget target_of(const std::string& name) {
  if (name == "mu") return GradTarget::Mu;
  if (name == "alpha") return GradTarget::Alpha;
  if (name == "sigma") return GradTarget::Sigma;
  if (name == "lambda") return GradTarget::Lambda;
  throw DomainError("unknown gradient target '" + name + "'");
}

QuadratureSpec quadrature(std::size_t points_per_axis, std::size_t mixing_points, double tol) {
  QuadratureSpec spec;
  spec.points_per_axis = points_per_axis;
  spec.mixing_points = mixing_points;
  spec.target_tol = tol;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reparameterization gradient estimators and quadrature oracles";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("norm_cdf", &norm_cdf, py::arg("x"));
  m.def("log_norm_cdf", &log_norm_cdf, py::arg("x"));
  m.def("bessel_k", &bessel_k, py::arg("order"), py::arg("x"));
  m.def("log_bessel_k", &log_bessel_k, py::arg("order"), py::arg("x"));
  m.def(
      "gauss_hermite_nodes",
      [](std::size_t n) {
        const QuadratureRule r = gauss_hermite_nodes(n);
        return py::make_tuple(r.nodes, r.weights);
      },
      py::arg("n"));
  m.def(
      "cholesky", [](const Rows& a) { return cholesky(Matrix::from_rows(a)).to_rows(); },
      py::arg("a"));

  py::class_<RandomStream>(m, "RandomStream")
      .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream_id") = 0, py::arg("counter") = 0)
      .def_property_readonly("seed", &RandomStream::seed)
      .def_property_readonly("stream_id", &RandomStream::stream_id)
      .def_property_readonly("counter", &RandomStream::counter)
      .def("child", &RandomStream::child, py::arg("index"))
      .def("bits", &RandomStream::bits)
      .def("__eq__", &RandomStream::operator==);

  py::class_<MixingSpec>(m, "MixingSpec")
      .def_static("half_normal_abs", &MixingSpec::half_normal_abs)
      .def_static("exponential_unit", &MixingSpec::exponential_unit)
      .def_static("inverse_gamma", &MixingSpec::inverse_gamma, py::arg("beta"))
      .def_static("inverse_gaussian", &MixingSpec::inverse_gaussian, py::arg("beta"))
      .def_static("point_mass", &MixingSpec::point_mass)
      .def_property_readonly("name", &MixingSpec::name)
      .def_property_readonly("beta", &MixingSpec::beta)
      .def("u", &MixingSpec::u)
      .def("v", &MixingSpec::v);

  py::class_<TestFunction>(m, "TestFunction")
      .def_property_readonly("name", &TestFunction::name)
      .def_property_readonly("dim", &TestFunction::dim)
      .def_property_readonly("smoothness",
                             [](const TestFunction& h) { return to_string(h.smoothness()); })
      .def_property_readonly("has_hessian", &TestFunction::has_hessian)
      .def("value", [](const TestFunction& h, const std::vector<double>& z) { return h.value(vec(z)); })
      .def("grad",
           [](const TestFunction& h, const std::vector<double>& z) { return h.grad(vec(z)).values(); })
      .def("hessian", [](const TestFunction& h, const std::vector<double>& z) {
        return h.hessian(vec(z)).to_rows();
      });

  m.def(
      "quadratic",
      [](const Rows& a, const std::vector<double>& b, double c) {
        return quadratic(Matrix::from_rows(a), vec(b), c);
      },
      py::arg("a"), py::arg("b"), py::arg("c") = 0.0);
  m.def("abs_sum", &abs_sum, py::arg("dim"));
  m.def(
      "log_sum_exp", [](const std::vector<double>& w) { return log_sum_exp(vec(w)); },
      py::arg("weights"));
  m.def("constant_function", &constant_function, py::arg("dim"), py::arg("c"));

  py::class_<GradEstimate>(m, "GradEstimate")
      .def_property_readonly("target", [](const GradEstimate& e) { return to_string(e.target); })
      .def_readonly("estimator_id", &GradEstimate::estimator_id)
      .def_readonly("n_samples", &GradEstimate::n_samples)
      .def_readonly("rows", &GradEstimate::rows)
      .def_readonly("cols", &GradEstimate::cols)
      .def_property_readonly("estimate", [](const GradEstimate& e) { return e.estimate.values(); })
      .def_property_readonly("std_error", [](const GradEstimate& e) { return e.std_error.values(); });


#define STEINREP_CFG_ARGS                                                                   \
  py::arg("n_samples"), py::arg("seed"), py::arg("symmetrize_sigma") = true,               \
      py::arg("marginalized") = false, py::arg("threads") = 1u

  m.def(
      "gaussian_grad",
      [](const std::string& estimator, const std::vector<double>& mu, const Rows& sigma,
         const TestFunction& h, std::size_t n, std::uint64_t seed, bool sym, bool marg,
         unsigned threads) {
        const GaussianParams p = gaussian(mu, sigma);
        const EstimatorConfig cfg = estimator_config(n, seed, sym, marg, threads);
        if (estimator == "score") return score_grad_mu(p, h, cfg);
        if (estimator == "bonnet") return bonnet_grad_mu(p, h, cfg);
        if (estimator == "stein-first-order") return stein_first_order_sigma(p, h, cfg);
        if (estimator == "price") return price_grad_sigma(p, h, cfg);
        throw DomainError("unknown Gaussian estimator '" + estimator + "'");
      },
      py::arg("estimator"), py::arg("mu"), py::arg("sigma"), py::arg("h"), STEINREP_CFG_ARGS);

  m.def(
      "gvm_grad",
      [](const std::string& target, const std::vector<double>& mu, const std::vector<double>& alpha,
         const Rows& sigma, const MixingSpec& mix, const TestFunction& h, bool first_order,
         std::size_t n, std::uint64_t seed, bool sym, bool marg, unsigned threads) {
        const GvmParams p = gvm(mu, alpha, sigma);
        const EstimatorConfig cfg = estimator_config(n, seed, sym, marg, threads);
        switch (target_of(target)) {
          case GradTarget::Mu: return gvm_grad_mu(p, mix, h, cfg);
          case GradTarget::Alpha: return gvm_grad_alpha(p, mix, h, cfg);
          case GradTarget::Sigma:
            return gvm_grad_sigma(p, mix, h, cfg,
                                  first_order ? SigmaMode::FirstOrder : SigmaMode::Hessian);
          default: throw DomainError("mixtures have no lambda parameter");
        }
      },
      py::arg("target"), py::arg("mu"), py::arg("alpha"), py::arg("sigma"), py::arg("mixing"),
      py::arg("h"), py::arg("first_order") = false, STEINREP_CFG_ARGS);

  m.def(
      "implicit_exponential_grad",
      [](double rate, const TestFunction& h, std::size_t n, std::uint64_t seed, bool sym, bool marg,
         unsigned threads) {
        return implicit_grad_1d(ExponentialEf(rate), 0, h,
                                estimator_config(n, seed, sym, marg, threads));
      },
      py::arg("rate"), py::arg("h"), STEINREP_CFG_ARGS);

#undef STEINREP_CFG_ARGS

  m.def(
      "gvm_logpdf",
      [](const std::vector<double>& mu, const std::vector<double>& alpha, const Rows& sigma,
         const MixingSpec& mix, const std::vector<double>& z) {
        return gvm_logpdf(gvm(mu, alpha, sigma), mix, vec(z));
      },
      py::arg("mu"), py::arg("alpha"), py::arg("sigma"), py::arg("mixing"), py::arg("z"));

  m.def(
      "expect_gaussian",
      [](const std::vector<double>& mu, const Rows& sigma, const TestFunction& h,
         std::size_t ppa, std::size_t nw, double tol) {
        return expect_gaussian(gaussian(mu, sigma), h, quadrature(ppa, nw, tol));
      },
      py::arg("mu"), py::arg("sigma"), py::arg("h"), py::arg("points_per_axis") = 48,
      py::arg("mixing_points") = 400, py::arg("target_tol") = 1e-9);
  m.def(
      "expect_gvm",
      [](const std::vector<double>& mu, const std::vector<double>& alpha, const Rows& sigma,
         const MixingSpec& mix, const TestFunction& h, std::size_t ppa, std::size_t nw,
         double tol) {
        return expect_gvm(gvm(mu, alpha, sigma), mix, h, quadrature(ppa, nw, tol));
      },
      py::arg("mu"), py::arg("alpha"), py::arg("sigma"), py::arg("mixing"), py::arg("h"),
      py::arg("points_per_axis") = 48, py::arg("mixing_points") = 400,
      py::arg("target_tol") = 1e-9);
  m.def(
      "gaussian_oracle_gradient",
      [](const std::vector<double>& mu, const Rows& sigma, const TestFunction& h,
         const std::string& target) {
        return gaussian_oracle_gradient(gaussian(mu, sigma), h, target_of(target)).values();
      },
      py::arg("mu"), py::arg("sigma"), py::arg("h"), py::arg("target"));
  m.def(
      "gvm_oracle_gradient",
      [](const std::vector<double>& mu, const std::vector<double>& alpha, const Rows& sigma,
         const MixingSpec& mix, const TestFunction& h, const std::string& target) {
        return gvm_oracle_gradient(gvm(mu, alpha, sigma), mix, h, target_of(target)).values();
      },
      py::arg("mu"), py::arg("alpha"), py::arg("sigma"), py::arg("mixing"), py::arg("h"),
      py::arg("target"));

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const RunReport r = run_experiment(parse_config(config_json));
        return py::make_tuple(format_results(r.rows), r.passed);
      },
      py::arg("config_json"),
      "Runs a JSON experiment config; returns (result CSV, passed).");
  m.def(
      "compare_variance",
      [](const std::string& config_json) {
        const VarianceReport r = compare_variance(parse_config(config_json));
        return py::make_tuple(format_variance(r.rows), r.passed);
      },
      py::arg("config_json"));
}
