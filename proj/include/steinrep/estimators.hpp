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
#include <span>
#include <string>

#include "steinrep/distributions.hpp"
#include "steinrep/ef.hpp"
#include "steinrep/gvm_densities.hpp"
#include "steinrep/testfns.hpp"

namespace steinrep {

enum class GradTarget { Mu, Alpha, Sigma, Lambda };

std::string to_string(GradTarget t);

/// Monte-Carlo gradient estimate. Vector targets are stored as a d x 1
/// shape, Sigma targets as a row-major d x d shape.
struct GradEstimate {
  GradTarget target = GradTarget::Mu;
  std::size_t param_index = 0;  // meaningful for Lambda targets
  std::size_t rows = 0;
  std::size_t cols = 0;
  Vector estimate;
  Vector std_error;  // per-entry sample std / sqrt(N)
  std::size_t n_samples = 0;
  std::string estimator_id;

  double value(std::size_t i, std::size_t j = 0) const { return estimate[i * cols + j]; }
  double se(std::size_t i, std::size_t j = 0) const { return std_error[i * cols + j]; }
  /// Per-sample variance of entry (i, j), i.e. se^2 * N.
  double sample_variance(std::size_t i, std::size_t j = 0) const;
  Matrix as_matrix() const;
};

struct EstimatorConfig {
  std::size_t n_samples = 0;
  RandomStream rng{0};
  /// Replace each per-sample Sigma term M by (M + M^T) / 2.
  bool symmetrize_sigma = true;
  /// Route gvm_grad_alpha / gvm_grad_sigma through the marginalised forms.
  bool marginalized = false;
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  unsigned threads = 1;

  EstimatorConfig(std::size_t n, RandomStream stream) : n_samples(n), rng(stream) { validate(); }
  /// Throws InvalidConfig when n_samples < 2.
  void validate() const;
};

/// Which line of the mixture second-order identity gvm_grad_sigma evaluates.
enum class SigmaMode { Hessian, FirstOrder };

/// Per-sample term callback: fills `out` for the sample drawn from `rng`.
using TermFn = std::function<void(RandomStream rng, std::span<double> out)>;

/// Mean and standard error of `width` per-sample terms. Sample n always uses
/// stream.child(n) and blocks are merged in a fixed order, so the result is
/// bit-identical for any thread count.
GradEstimate monte_carlo_mean(std::size_t width, std::size_t n_samples, RandomStream stream,
                              unsigned threads, const TermFn& term);

// Gaussian N(mu, Sigma).

/// E[Sigma^-1 (z - mu) h(z)].
GradEstimate score_grad_mu(const GaussianParams& p, const TestFunction& h,
                           const EstimatorConfig& cfg);
/// E[grad h(z)].
GradEstimate bonnet_grad_mu(const GaussianParams& p, const TestFunction& h,
                            const EstimatorConfig& cfg);
/// (1/2) E[Sigma^-1 (z - mu) grad h(z)^T].
GradEstimate stein_first_order_sigma(const GaussianParams& p, const TestFunction& h,
                                     const EstimatorConfig& cfg);
/// (1/2) E[hess h(z)]. Throws SmoothnessViolation if h has no Hessian.
GradEstimate price_grad_sigma(const GaussianParams& p, const TestFunction& h,
                              const EstimatorConfig& cfg);

// Gaussian variance-mean mixtures.

/// E_{q(z)}[grad h(z)].
GradEstimate gvm_grad_mu(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                         const EstimatorConfig& cfg);
/// E_{q(w,z)}[u(w) grad h(z)]; with cfg.marginalized, the decomposition form.
GradEstimate gvm_grad_alpha(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                            const EstimatorConfig& cfg);
/// sum_j E_{qhat_j}[u_j(z) grad h(z)], N draws from each component.
GradEstimate gvm_grad_alpha_marginalized(const GvmParams& p, const WeightDecomposition& dec,
                                         const TestFunction& h, const EstimatorConfig& cfg);
/// Hessian mode: (1/2) E[v(w) hess h(z)].
/// FirstOrder mode: (1/2) E[Sigma^-1 (z - mu - u(w) alpha) grad h(z)^T].
GradEstimate gvm_grad_sigma(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                            const EstimatorConfig& cfg, SigmaMode mode = SigmaMode::Hessian);
/// (1/2) sum_j E_{qhat_j}[v_j(z) hess h(z)].
GradEstimate gvm_grad_sigma_marginalized(const GvmParams& p, const WeightDecomposition& dec,
                                         const TestFunction& h, const EstimatorConfig& cfg);

/// u- or v-decomposition shipped for the mixing family, if any.
WeightDecomposition decomposition_for(const GvmParams& p, const MixingSpec& m, WeightKind kind);

// Exponential families.

/// -E[f_i(z) h'(z)] with f_i = (d psi / d lambda_i) / q.
GradEstimate implicit_grad_1d(const UnivariateEf& d, std::size_t i, const TestFunction& h,
                              const EstimatorConfig& cfg);
/// -E[sum_j f_{i,j}(z) d h / d z_j].
GradEstimate implicit_grad_bivariate(const BivariateEfMixture& m, std::size_t i,
                                     const TestFunction& h, const EstimatorConfig& cfg);

}  // namespace steinrep
