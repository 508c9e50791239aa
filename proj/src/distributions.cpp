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

#include "steinrep/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "steinrep/errors.hpp"

namespace steinrep {

namespace {

constexpr std::uint64_t kMixingSubstream = 0x6D6978;  // "mix"

Vector shifted_scaled(const Vector& mu, double shift, const Vector& alpha,
                      double scale, const SpdMatrix& sigma, const Vector& eps) {
  const Matrix& l = sigma.cholesky_factor();
  const std::size_t d = mu.size();
  Vector z(d);
  for (std::size_t i = 0; i < d; ++i) {
    double le = 0.0;
    for (std::size_t k = 0; k <= i; ++k) le += l(i, k) * eps[k];
    z[i] = (mu[i] + shift * alpha[i]) + scale * le;
  }
  return z;
}

}  // namespace

GaussianParams::GaussianParams(Vector mu, SpdMatrix sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (mu_.empty()) throw DimensionMismatch("Gaussian dimension must be >= 1");
  if (mu_.size() != sigma_.dim()) throw DimensionMismatch("mu and sigma disagree");
  if (!mu_.all_finite()) throw DomainError("mu has non-finite entries");
}

GvmParams::GvmParams(Vector mu, Vector alpha, SpdMatrix sigma)
    : mu_(std::move(mu)), alpha_(std::move(alpha)), sigma_(std::move(sigma)) {
  if (mu_.empty()) throw DimensionMismatch("mixture dimension must be >= 1");
  if (mu_.size() != alpha_.size() || mu_.size() != sigma_.dim()) {
    throw DimensionMismatch("mu, alpha and sigma must share a dimension");
  }
  if (!mu_.all_finite() || !alpha_.all_finite()) {
    throw DomainError("mu/alpha have non-finite entries");
  }
}

MixingSpec MixingSpec::half_normal_abs() { return {MixingKind::HalfNormalAbs, 0.0}; }
MixingSpec MixingSpec::exponential_unit() { return {MixingKind::Exponential, 0.0}; }
MixingSpec MixingSpec::point_mass() { return {MixingKind::PointMass, 0.0}; }

MixingSpec MixingSpec::inverse_gamma(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw InvalidShape("inverse-gamma mixing needs beta > 1, got " + std::to_string(beta));
  }
  return {MixingKind::InverseGamma, beta};
}

MixingSpec MixingSpec::inverse_gaussian(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidShape("inverse-Gaussian mixing needs beta > 0, got " +
                       std::to_string(beta));
  }
  return {MixingKind::InverseGaussian, beta};
}

std::string MixingSpec::name() const {
  switch (kind_) {
    case MixingKind::HalfNormalAbs: return "half-normal-abs";
    case MixingKind::Exponential: return "exponential-1";
    case MixingKind::InverseGamma: return "inv-gamma";
    case MixingKind::InverseGaussian: return "inv-gauss";
    case MixingKind::PointMass: return "point-mass";
  }
  return "unknown";
}

double MixingSpec::u(double w) const {
  switch (kind_) {
    case MixingKind::HalfNormalAbs: return std::abs(w);
    case MixingKind::Exponential:
    case MixingKind::InverseGaussian: return w;
    case MixingKind::InverseGamma:
    case MixingKind::PointMass: return 0.0;
  }
  return 0.0;
}

double MixingSpec::v(double w) const {
  switch (kind_) {
    case MixingKind::InverseGamma:
    case MixingKind::InverseGaussian: return w;
    default: return 1.0;
  }
}

double MixingSpec::log_density(double w) const {
  constexpr double kLog2Pi = 1.8378770664093453;
  switch (kind_) {
    case MixingKind::HalfNormalAbs: return -0.5 * (w * w + kLog2Pi);
    case MixingKind::Exponential:
      return w > 0.0 ? -w : -std::numeric_limits<double>::infinity();
    case MixingKind::InverseGamma:
      if (!(w > 0.0)) return -std::numeric_limits<double>::infinity();
      return beta_ * std::log(beta_) - std::lgamma(beta_) - (beta_ + 1.0) * std::log(w) -
             beta_ / w;
    case MixingKind::InverseGaussian:
      if (!(w > 0.0)) return -std::numeric_limits<double>::infinity();
      return 0.5 * (std::log(beta_) - kLog2Pi - 3.0 * std::log(w)) -
             0.5 * beta_ * (w + 1.0 / w) + beta_;
    case MixingKind::PointMass:
      return w == 1.0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

std::optional<MixingMoments> MixingSpec::moments() const {
  switch (kind_) {
    case MixingKind::HalfNormalAbs:
      return MixingMoments{std::sqrt(2.0 / std::numbers::pi), 1.0 - 2.0 / std::numbers::pi,
                           1.0};
    case MixingKind::Exponential: return MixingMoments{1.0, 1.0, 1.0};
    case MixingKind::InverseGamma: return MixingMoments{0.0, 0.0, beta_ / (beta_ - 1.0)};
    case MixingKind::InverseGaussian: return MixingMoments{1.0, 1.0 / beta_, 1.0};
    case MixingKind::PointMass: return MixingMoments{0.0, 0.0, 1.0};
  }
  return std::nullopt;
}

Draw<Vector> gaussian_sample(const GaussianParams& p, RandomStream rng) {
  auto eps = standard_normal_vector(p.dim(), rng);
  const Matrix& l = p.sigma().cholesky_factor();
  const std::size_t d = p.dim();
  Vector z(d);
  for (std::size_t i = 0; i < d; ++i) {
    double le = 0.0;
    for (std::size_t k = 0; k <= i; ++k) le += l(i, k) * eps.value[k];
    z[i] = p.mu()[i] + le;
  }
  return {std::move(z), eps.next};
}

double gaussian_logpdf(const GaussianParams& p, const Vector& z) {
  constexpr double kLog2Pi = 1.8378770664093453;
  if (z.size() != p.dim()) throw DimensionMismatch("gaussian_logpdf dimension");
  const double maha = p.sigma().quad_form_inverse(z - p.mu());
  return -0.5 * (static_cast<double>(p.dim()) * kLog2Pi + p.sigma().log_det() + maha);
}

Draw<double> gamma_sample(double shape, RandomStream rng) {
  if (!(shape > 0.0)) throw InvalidShape("gamma shape must be positive");
  if (shape < 1.0) {
    // Shape boost: Gamma(a) = Gamma(a + 1) * U^{1/a}.
    auto g = gamma_sample(shape + 1.0, rng);
    auto u = uniform(g.next);
    return {g.value * std::pow(u.value, 1.0 / shape), u.next};
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    auto x = standard_normal(rng);
    rng = x.next;
    const double t = 1.0 + c * x.value;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    auto u = uniform(rng);
    rng = u.next;
    const double x2 = x.value * x.value;
    if (u.value < 1.0 - 0.0331 * x2 * x2) return {d * v, rng};
    if (std::log(u.value) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return {d * v, rng};
  }
}

Draw<double> mixing_sample(const MixingSpec& m, RandomStream rng) {
  switch (m.kind()) {
    case MixingKind::HalfNormalAbs: return standard_normal(rng);
    case MixingKind::Exponential: {
      auto u = uniform(rng);
      return {-std::log(u.value), u.next};
    }
    case MixingKind::InverseGamma: {
      auto g = gamma_sample(m.beta(), rng);
      return {m.beta() / g.value, g.next};
    }
    case MixingKind::InverseGaussian: {
      // Transformation with multiple roots (mean 1, shape beta).
      auto nu = standard_normal(rng);
      const double y = nu.value * nu.value;
      const double lam = m.beta();
      const double x = 1.0 + y / (2.0 * lam) - std::sqrt(4.0 * lam * y + y * y) / (2.0 * lam);
      auto u = uniform(nu.next);
      return {u.value <= 1.0 / (1.0 + x) ? x : 1.0 / x, u.next};
    }
    case MixingKind::PointMass: return {1.0, rng};
  }
  return {1.0, rng};
}

GaussianParams conditional_gaussian(const GvmParams& p, const MixingSpec& m, double w) {
  const double uw = m.u(w);
  const double vw = m.v(w);
  Vector mean(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) mean[i] = p.mu()[i] + uw * p.alpha()[i];
  return GaussianParams(std::move(mean), SpdMatrix(vw * p.sigma().matrix()));
}

Draw<JointSample> gvm_sample(const GvmParams& p, const MixingSpec& m, RandomStream rng) {
  const double w = mixing_sample(m, rng.child(kMixingSubstream)).value;
  auto eps = standard_normal_vector(p.dim(), rng);
  Vector z = shifted_scaled(p.mu(), m.u(w), p.alpha(), std::sqrt(m.v(w)), p.sigma(),
                            eps.value);
  return {JointSample{w, std::move(z)}, eps.next};
}

}  // namespace steinrep
