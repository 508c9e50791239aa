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
#include <string>
#include <vector>

#include "steinrep/distributions.hpp"

namespace steinrep {

// Closed-form marginals q(z) = \int N(z | mu + u(w) alpha, v(w) Sigma) q(w) dw
// for the four named mixtures, all evaluated in log space.

/// Skew Gaussian (u = |w|, w ~ N(0,1)).
double skew_gaussian_logpdf(const GvmParams& p, const Vector& z);
/// Exponentially modified Gaussian (u = w, w ~ Exp(1)). Throws DegenerateSkew
/// when alpha^T Sigma^-1 alpha == 0.
double emg_logpdf(const GvmParams& p, const Vector& z);
/// Student's t with 2*beta degrees of freedom. Throws InvalidShape for
/// beta <= 1 and NonzeroAlpha unless alpha == 0.
double student_t_logpdf(const GvmParams& p, double beta, const Vector& z);
/// Normal inverse-Gaussian (u = v = w, w ~ InvGauss(1, beta)). Throws
/// InvalidShape for beta <= 0.
double nig_logpdf(const GvmParams& p, double beta, const Vector& z);

/// Dispatches on the mixing law; PointMass yields the Gaussian N(mu, Sigma).
double gvm_logpdf(const GvmParams& p, const MixingSpec& m, const Vector& z);

/// Which weight map the decomposition marginalises: u(w) feeds the alpha
/// gradient, v(w) the Sigma gradient.
enum class WeightKind { U, V };

struct WeightComponent {
  std::string label;
  std::function<double(const Vector&)> weight;
  std::function<double(const Vector&)> log_density;
  /// Empty when the base density cannot be sampled.
  std::function<Draw<Vector>(RandomStream)> sampler;
};

/// \int weight(w) q(w, z) dw = sum_j weight_j(z) qhat_j(z), each qhat_j a
/// normalised density.
class WeightDecomposition {
 public:
  WeightDecomposition(WeightKind kind, std::string family, std::size_t dim,
                      std::vector<WeightComponent> components)
      : kind_(kind), family_(std::move(family)), dim_(dim), components_(std::move(components)) {}

  WeightKind kind() const noexcept { return kind_; }
  const std::string& family() const noexcept { return family_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return components_.size(); }
  const std::vector<WeightComponent>& components() const noexcept { return components_; }
  const WeightComponent& operator[](std::size_t j) const { return components_.at(j); }

  /// sum_j weight_j(z) qhat_j(z).
  double evaluate(const Vector& z) const;

 private:
  WeightKind kind_;
  std::string family_;
  std::size_t dim_;
  std::vector<WeightComponent> components_;
};

/// u1 = sqrt(2/pi) / (1 + a) against N(mu, Sigma) and
/// u2 = (z - mu)^T Sigma^-1 alpha / (1 + a) against the skew Gaussian itself,
/// where a = alpha^T Sigma^-1 alpha.
WeightDecomposition skew_u_decomposition(const GvmParams& p);
/// u1 = 1 / a against N(mu, Sigma), u2 = ((z - mu)^T Sigma^-1 alpha - 1) / a
/// against the EMG itself. Throws DegenerateSkew when a == 0.
WeightDecomposition emg_u_decomposition(const GvmParams& p);
/// Single component v1(z) q(z) with the posterior mean of w.
WeightDecomposition student_v_decomposition(const GvmParams& p, double beta);
/// Single component v1(z) q(z); v1 is a square-root factor times the Bessel
/// ratio K_{(d-1)/2} / K_{(d+1)/2}.
WeightDecomposition nig_v_decomposition(const GvmParams& p, double beta);

}  // namespace steinrep
