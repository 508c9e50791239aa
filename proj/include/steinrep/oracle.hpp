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

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "steinrep/distributions.hpp"
#include "steinrep/ef.hpp"
#include "steinrep/estimators.hpp"
#include "steinrep/testfns.hpp"

namespace steinrep {

// Deterministic ground truth: tensor quadrature for expectations in d <= 2
// (plus the mixing variable) and central finite differences in parameters.

enum class QuadratureScheme {
  Auto,                // Gauss-Hermite for smooth h, mapped Gauss-Legendre otherwise
  GaussHermiteTensor,  // standardised Gauss-Hermite product rule
  MappedGaussLegendre, // composite Gauss-Legendre on a mapped infinite line,
                       // split at declared kinks
};

struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::Auto;
  std::size_t points_per_axis = 48;
  std::size_t mixing_points = 400;
  double target_tol = 1e-9;

  /// points_per_axis >= 8, mixing_points >= 8, target_tol >= 1e-10.
  void validate() const;
};

/// Composite Gauss-Legendre integral of f over an open interval, mapped to a
/// finite range and split at `breakpoints`. `location` and `scale` set where
/// the mapped nodes concentrate.
double integrate_line(const std::function<double(double)>& f, Interval domain, double location,
                      double scale, const std::vector<double>& breakpoints, std::size_t points);

/// \int g(w) q(w) dw for a mixing law. For the half-normal law w is folded
/// onto (0, inf), which is exact whenever g depends on w only through |w|.
double mixing_expectation(const MixingSpec& m, const std::function<double(double)>& g,
                          std::size_t points);

/// \int N(z | mu + u(w) alpha, v(w) Sigma) weight(w) q(w) dw.
double mixture_density_quadrature(const GvmParams& p, const MixingSpec& m, const Vector& z,
                                  const std::function<double(double)>& weight,
                                  std::size_t points);
double mixture_density_quadrature(const GvmParams& p, const MixingSpec& m, const Vector& z,
                                  std::size_t points);

/// \int exp(logpdf(z)) dz over R^d (d <= 2) on a mapped Gauss-Legendre grid.
double integrate_density(const std::function<double(const Vector&)>& logpdf, const Vector& center,
                         const Vector& scales, std::size_t points_per_axis);

/// E_{N(mu, Sigma)}[h]; throws NotConverged when doubling the resolution
/// moves the result by more than target_tol (scaled by max(1, |E|)).
double expect_gaussian(const GaussianParams& p, const TestFunction& h, const QuadratureSpec& spec = {});
/// E_{q(z)}[h] for a Gaussian variance-mean mixture via nested quadrature.
double expect_gvm(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                  const QuadratureSpec& spec = {});
double expect_ef(const UnivariateEf& d, const TestFunction& h, const QuadratureSpec& spec = {});
double expect_bivariate(const BivariateEfMixture& m, const TestFunction& h,
                        const QuadratureSpec& spec = {});

/// Parameter coordinate moved by a finite-difference probe. For Sigma,
/// (i, j) and (j, i) are moved together.
struct ParamSelector {
  GradTarget target = GradTarget::Mu;
  std::size_t i = 0;
  std::size_t j = 0;

  std::string label() const;
};

/// Expectation as a function of a displacement `delta` along one coordinate.
using ParamExpectation = std::function<double(const ParamSelector&, double delta)>;

/// (E(+eps) - E(-eps)) / (2 eps m), m = 2 for off-diagonal Sigma entries,
/// with one Richardson step against eps / 2. While the two step sizes disagree
/// by more than 10 * target_tol (scaled by max(1, |g|)) the step is halved, at
/// most four times; NotConverged if they still disagree.
double fd_param_gradient(const ParamExpectation& expectation, const ParamSelector& sel, double eps,
                         double target_tol);

/// Default step: 1e-4 * max(1, |parameter value|).
double default_fd_step(double parameter_value);

// Parameterised expectations. Each runs the convergence check once at the
// unperturbed parameters and evaluates displaced points at the verified
// (doubled) resolution. Sigma displacements that break positive
// definiteness raise NotSpd.
ParamExpectation gaussian_expectation(const GaussianParams& p, const TestFunction& h,
                                      const QuadratureSpec& spec = {});
ParamExpectation gvm_expectation(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                                 const QuadratureSpec& spec = {});
ParamExpectation ef_expectation(const UnivariateEf& d, const TestFunction& h,
                                const QuadratureSpec& spec = {});
ParamExpectation bivariate_expectation(const BivariateEfMixture& m, const TestFunction& h,
                                       const QuadratureSpec& spec = {});

/// Flattened oracle gradient shaped like the matching GradEstimate
/// (d entries for Mu/Alpha, d*d row-major for Sigma, one for Lambda).
Vector oracle_gradient(const ParamExpectation& expectation, GradTarget target, std::size_t dim,
                       const std::function<double(const ParamSelector&)>& param_value,
                       double target_tol, std::size_t lambda_index = 0);

Vector gaussian_oracle_gradient(const GaussianParams& p, const TestFunction& h, GradTarget target,
                                const QuadratureSpec& spec = {});
Vector gvm_oracle_gradient(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                           GradTarget target, const QuadratureSpec& spec = {});
Vector ef_oracle_gradient(const UnivariateEf& d, std::size_t i, const TestFunction& h,
                          const QuadratureSpec& spec = {});
Vector bivariate_oracle_gradient(const BivariateEfMixture& m, std::size_t i, const TestFunction& h,
                                 const QuadratureSpec& spec = {});

/// tr(A Sigma) + mu^T A mu + b^T mu + c.
double closed_form_quadratic_expect(const GaussianParams& p, const Matrix& a, const Vector& b,
                                    double c);
/// Same with mean mu + E[u] alpha and covariance E[v] Sigma + Var[u] alpha alpha^T.
/// Throws MissingMoments when the mixing law has no finite moments.
double closed_form_quadratic_expect(const GvmParams& p, const MixingSpec& m, const Matrix& a,
                                    const Vector& b, double c);

}  // namespace steinrep
