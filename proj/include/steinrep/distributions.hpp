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

#include <optional>
#include <string>

#include "steinrep/numerics.hpp"
#include "steinrep/random.hpp"

namespace steinrep {

/// N(mu, sigma). Dimensions are validated at construction.
class GaussianParams {
 public:
  GaussianParams(Vector mu, SpdMatrix sigma);
  GaussianParams(Vector mu, Matrix sigma) : GaussianParams(std::move(mu), SpdMatrix(std::move(sigma))) {}

  std::size_t dim() const noexcept { return mu_.size(); }
  const Vector& mu() const noexcept { return mu_; }
  const SpdMatrix& sigma() const noexcept { return sigma_; }

 private:
  Vector mu_;
  SpdMatrix sigma_;
};

/// Location mu, skew alpha and scale sigma of a Gaussian variance-mean
/// mixture  z | w ~ N(mu + u(w) alpha, v(w) sigma).
class GvmParams {
 public:
  GvmParams(Vector mu, Vector alpha, SpdMatrix sigma);
  GvmParams(Vector mu, Vector alpha, Matrix sigma)
      : GvmParams(std::move(mu), std::move(alpha), SpdMatrix(std::move(sigma))) {}

  std::size_t dim() const noexcept { return mu_.size(); }
  const Vector& mu() const noexcept { return mu_; }
  const Vector& alpha() const noexcept { return alpha_; }
  const SpdMatrix& sigma() const noexcept { return sigma_; }

  /// alpha^T sigma^-1 alpha.
  double skew_norm2() const { return sigma_.quad_form_inverse(alpha_); }

 private:
  Vector mu_;
  Vector alpha_;
  SpdMatrix sigma_;
};

enum class MixingKind {
  HalfNormalAbs,    // w ~ N(0,1), u = |w|, v = 1     (skew Gaussian)
  Exponential,      // w ~ Exp(1), u = w, v = 1        (exponentially modified Gaussian)
  InverseGamma,     // w ~ IG(beta, beta), u = 0, v = w  (Student's t, 2 beta dof)
  InverseGaussian,  // w ~ InvGauss(1, beta), u = v = w  (normal inverse-Gaussian)
  PointMass,        // w = 1, u = 0, v = 1             (plain Gaussian)
};

struct MixingMoments {
  double mean_u;
  double var_u;
  double mean_v;
};

/// Mixing law q(w) together with the weight maps u(w) and v(w).
class MixingSpec {
 public:
  static MixingSpec half_normal_abs();
  static MixingSpec exponential_unit();
  /// Requires beta > 1 so that E[v(w)] exists. Throws InvalidShape.
  static MixingSpec inverse_gamma(double beta);
  /// Requires beta > 0. Throws InvalidShape.
  static MixingSpec inverse_gaussian(double beta);
  static MixingSpec point_mass();

  MixingKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  std::string name() const;

  double u(double w) const;
  double v(double w) const;
  /// Log density of w itself (for HalfNormalAbs, of the underlying N(0,1)).
  double log_density(double w) const;
  std::optional<MixingMoments> moments() const;

  bool has_skew_weight() const noexcept {
    return kind_ == MixingKind::HalfNormalAbs || kind_ == MixingKind::Exponential ||
           kind_ == MixingKind::InverseGaussian;
  }

 private:
  MixingSpec(MixingKind kind, double beta) : kind_(kind), beta_(beta) {}
  MixingKind kind_;
  double beta_;
};

struct JointSample {
  double w;
  Vector z;
};

Draw<Vector> gaussian_sample(const GaussianParams& p, RandomStream rng);
double gaussian_logpdf(const GaussianParams& p, const Vector& z);

/// Gamma(shape, rate 1) by Marsaglia-Tsang squeeze/rejection.
Draw<double> gamma_sample(double shape, RandomStream rng);
Draw<double> mixing_sample(const MixingSpec& m, RandomStream rng);

/// N(mu + u(w) alpha, v(w) sigma) for a fixed mixing value w.
GaussianParams conditional_gaussian(const GvmParams& p, const MixingSpec& m, double w);

/// Draws w from a child stream and z | w from `rng` itself, so with u = 0 and
/// v = 1 the z draw is bit-identical to gaussian_sample on the same token.
Draw<JointSample> gvm_sample(const GvmParams& p, const MixingSpec& m, RandomStream rng);

}  // namespace steinrep
