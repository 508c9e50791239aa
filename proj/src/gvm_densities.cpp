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

#include "steinrep/gvm_densities.hpp"

#include <cmath>
#include <numbers>

#include "steinrep/errors.hpp"

namespace steinrep {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kLogPi = 1.1447298858494002;

struct Forms {
  double maha;   // (z-mu)^T S^-1 (z-mu)
  double cross;  // (z-mu)^T S^-1 alpha
  double skew;   // alpha^T S^-1 alpha
};

Forms quadratic_forms(const GvmParams& p, const Vector& z) {
  if (z.size() != p.dim()) throw DimensionMismatch("density evaluated at wrong dimension");
  const Vector x = z - p.mu();
  const Vector lx = p.sigma().solve_lower(x);
  const Vector la = p.sigma().solve_lower(p.alpha());
  return {dot(lx, lx), dot(lx, la), dot(la, la)};
}

double gaussian_log_normaliser(const GvmParams& p) {
  return -0.5 * (static_cast<double>(p.dim()) * kLog2Pi + p.sigma().log_det());
}

void require_student_shape(const GvmParams& p, double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw InvalidShape("Student's t needs beta > 1, got " + std::to_string(beta));
  }
  if (max_abs(p.alpha()) != 0.0) throw NonzeroAlpha("Student's t mixture has u = 0; alpha must be 0");
}

void require_nig_shape(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidShape("normal inverse-Gaussian needs beta > 0, got " + std::to_string(beta));
  }
}

double emg_skew_or_throw(const GvmParams& p) {
  const double a = p.skew_norm2();
  if (!(a > 0.0)) throw DegenerateSkew("EMG density needs alpha^T Sigma^-1 alpha > 0");
  return a;
}

GaussianParams base_gaussian(const GvmParams& p) { return GaussianParams(p.mu(), p.sigma()); }

std::function<Draw<Vector>(RandomStream)> marginal_sampler(const GvmParams& p,
                                                           const MixingSpec& m) {
  return [p, m](RandomStream s) {
    auto joint = gvm_sample(p, m, s);
    return Draw<Vector>{std::move(joint.value.z), joint.next};
  };
}

}  // namespace

double skew_gaussian_logpdf(const GvmParams& p, const Vector& z) {
  const Forms f = quadratic_forms(p, z);
  const double one_plus = 1.0 + f.skew;
  // N(z | mu, Sigma + alpha alpha^T) via the rank-one determinant and
  // Sherman-Morrison identities.
  const double log_gauss = -0.5 * (static_cast<double>(p.dim()) * kLog2Pi + p.sigma().log_det() +
                                   std::log(one_plus) + f.maha - f.cross * f.cross / one_plus);
  return std::numbers::ln2 + log_norm_cdf(f.cross / std::sqrt(one_plus)) + log_gauss;
}

double emg_logpdf(const GvmParams& p, const Vector& z) {
  const double a = emg_skew_or_throw(p);
  const Forms f = quadratic_forms(p, z);
  const double b = f.cross - 1.0;
  return 0.5 * kLog2Pi + gaussian_log_normaliser(p) - 0.5 * std::log(a) +
         log_norm_cdf(b / std::sqrt(a)) + 0.5 * (b * b / a - f.maha);
}

double student_t_logpdf(const GvmParams& p, double beta, const Vector& z) {
  require_student_shape(p, beta);
  const Forms f = quadratic_forms(p, z);
  const double half_d = 0.5 * static_cast<double>(p.dim());
  return -0.5 * (static_cast<double>(p.dim()) * kLogPi + p.sigma().log_det()) +
         std::lgamma(beta + half_d) - std::lgamma(beta) + beta * std::log(2.0 * beta) -
         (beta + half_d) * std::log(2.0 * beta + f.maha);
}

double nig_logpdf(const GvmParams& p, double beta, const Vector& z) {
  require_nig_shape(beta);
  const Forms f = quadratic_forms(p, z);
  const double d = static_cast<double>(p.dim());
  const double big_a = f.skew + beta;
  const double big_b = f.maha + beta;
  const double arg = std::sqrt(big_a * big_b);
  return 0.5 * std::log(beta) - 0.5 * (d + 1.0) * kLog2Pi - 0.5 * p.sigma().log_det() +
         f.cross + beta + std::numbers::ln2 + log_bessel_k(0.5 * (d + 1.0), arg) +
         0.25 * (d + 1.0) * std::log(big_a / big_b);
}

double gvm_logpdf(const GvmParams& p, const MixingSpec& m, const Vector& z) {
  switch (m.kind()) {
    case MixingKind::HalfNormalAbs: return skew_gaussian_logpdf(p, z);
    case MixingKind::Exponential: return emg_logpdf(p, z);
    case MixingKind::InverseGamma: return student_t_logpdf(p, m.beta(), z);
    case MixingKind::InverseGaussian: return nig_logpdf(p, m.beta(), z);
    case MixingKind::PointMass: return gaussian_logpdf(base_gaussian(p), z);
  }
  return 0.0;
}

double WeightDecomposition::evaluate(const Vector& z) const {
  double s = 0.0;
  for (const auto& c : components_) s += c.weight(z) * std::exp(c.log_density(z));
  return s;
}

WeightDecomposition skew_u_decomposition(const GvmParams& p) {
  const double one_plus = 1.0 + p.skew_norm2();
  const double u1 = std::sqrt(2.0 / std::numbers::pi) / one_plus;
  const Vector sinv_alpha = p.sigma().solve(p.alpha());
  const GaussianParams gauss = base_gaussian(p);
  const MixingSpec mixing = MixingSpec::half_normal_abs();

  WeightComponent constant{
      "u1*N(mu,Sigma)", [u1](const Vector&) { return u1; },
      [gauss](const Vector& z) { return gaussian_logpdf(gauss, z); },
      [gauss](RandomStream s) { return gaussian_sample(gauss, s); }};
  WeightComponent linear{
      "u2*q",
      [p, sinv_alpha, one_plus](const Vector& z) { return dot(z - p.mu(), sinv_alpha) / one_plus; },
      [p](const Vector& z) { return skew_gaussian_logpdf(p, z); }, marginal_sampler(p, mixing)};
  return WeightDecomposition(WeightKind::U, "skew-gaussian", p.dim(), {constant, linear});
}

WeightDecomposition emg_u_decomposition(const GvmParams& p) {
  const double a = emg_skew_or_throw(p);
  const Vector sinv_alpha = p.sigma().solve(p.alpha());
  const GaussianParams gauss = base_gaussian(p);
  const MixingSpec mixing = MixingSpec::exponential_unit();

  WeightComponent constant{
      "u1*N(mu,Sigma)", [a](const Vector&) { return 1.0 / a; },
      [gauss](const Vector& z) { return gaussian_logpdf(gauss, z); },
      [gauss](RandomStream s) { return gaussian_sample(gauss, s); }};
  WeightComponent linear{
      "u2*q",
      [p, sinv_alpha, a](const Vector& z) { return (dot(z - p.mu(), sinv_alpha) - 1.0) / a; },
      [p](const Vector& z) { return emg_logpdf(p, z); }, marginal_sampler(p, mixing)};
  return WeightDecomposition(WeightKind::U, "emg", p.dim(), {constant, linear});
}

WeightDecomposition student_v_decomposition(const GvmParams& p, double beta) {
  require_student_shape(p, beta);
  const double half_d = 0.5 * static_cast<double>(p.dim());
  const double scale = beta / (beta + half_d - 1.0);
  WeightComponent posterior_mean{
      "v1*q",
      [p, beta, scale](const Vector& z) {
        return scale * (1.0 + p.sigma().quad_form_inverse(z - p.mu()) / (2.0 * beta));
      },
      [p, beta](const Vector& z) { return student_t_logpdf(p, beta, z); },
      marginal_sampler(p, MixingSpec::inverse_gamma(beta))};
  return WeightDecomposition(WeightKind::V, "student-t", p.dim(), {posterior_mean});
}

WeightDecomposition nig_v_decomposition(const GvmParams& p, double beta) {
  require_nig_shape(beta);
  const double d = static_cast<double>(p.dim());
  const double big_a = p.skew_norm2() + beta;
  WeightComponent posterior_mean{
      "v1*q",
      [p, beta, big_a, d](const Vector& z) {
        const double big_b = p.sigma().quad_form_inverse(z - p.mu()) + beta;
        const double arg = std::sqrt(big_a * big_b);
        return std::sqrt(big_b / big_a) *
               std::exp(log_bessel_k(0.5 * (d - 1.0), arg) - log_bessel_k(0.5 * (d + 1.0), arg));
      },
      [p, beta](const Vector& z) { return nig_logpdf(p, beta, z); },
      marginal_sampler(p, MixingSpec::inverse_gaussian(beta))};
  return WeightDecomposition(WeightKind::V, "nig", p.dim(), {posterior_mean});
}

}  // namespace steinrep
