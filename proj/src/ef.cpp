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

#include "steinrep/ef.hpp"

#include <cmath>
#include <numbers>

#include "steinrep/distributions.hpp"
#include "steinrep/errors.hpp"

namespace steinrep {

namespace {

constexpr double kUnderflowGuard = 1e-300;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidShape(std::string(what) + " must be positive and finite, got " +
                       std::to_string(v));
  }
}

void require_in_support(const Interval& s, double z) {
  if (!s.contains(z)) {
    throw OutOfSupport("z = " + std::to_string(z) + " is outside (" + std::to_string(s.lower) +
                       ", " + std::to_string(s.upper) + ")");
  }
}

double scalar_param(const Vector& params, const char* family) {
  if (params.size() != 1) {
    throw DimensionMismatch(std::string(family) + " takes exactly one parameter");
  }
  return params[0];
}

}  // namespace

double UnivariateEf::pdf(double z) const { return std::exp(logpdf(z)); }

void UnivariateEf::require_param_index(std::size_t i) const {
  if (i >= num_params()) {
    throw DimensionMismatch("parameter index " + std::to_string(i) + " out of range for " +
                            name());
  }
}

ExponentialEf::ExponentialEf(double rate) : UnivariateEf(Vector{rate}) {
  require_positive(rate, "exponential rate");
}

double ExponentialEf::logpdf(double z) const {
  if (!(z > 0.0)) return -std::numeric_limits<double>::infinity();
  return std::log(rate()) - rate() * z;
}

double ExponentialEf::cdf(double z) const { return z > 0.0 ? -std::expm1(-rate() * z) : 0.0; }

double ExponentialEf::dcdf_dparam(double z, std::size_t i) const {
  require_param_index(i);
  return z > 0.0 ? z * std::exp(-rate() * z) : 0.0;
}

double ExponentialEf::dpdf_dz(double z) const { return -rate() * pdf(z); }

Draw<double> ExponentialEf::sample(RandomStream rng) const {
  auto u = uniform(rng);
  return {-std::log(u.value) / rate(), u.next};
}

std::unique_ptr<UnivariateEf> ExponentialEf::with_params(Vector params) const {
  return std::make_unique<ExponentialEf>(scalar_param(params, "exponential"));
}

GaussianMeanEf::GaussianMeanEf(double mean, double variance)
    : UnivariateEf(Vector{mean}), variance_(variance) {
  require_positive(variance, "Gaussian variance");
  if (!std::isfinite(mean)) throw DomainError("Gaussian mean must be finite");
}

double GaussianMeanEf::logpdf(double z) const {
  const double r = z - mean();
  return -0.5 * (r * r / variance_ + std::log(2.0 * std::numbers::pi * variance_));
}

double GaussianMeanEf::cdf(double z) const { return norm_cdf((z - mean()) / std::sqrt(variance_)); }

double GaussianMeanEf::dcdf_dparam(double z, std::size_t i) const {
  require_param_index(i);
  return -pdf(z);
}

double GaussianMeanEf::dpdf_dz(double z) const { return -(z - mean()) / variance_ * pdf(z); }

Draw<double> GaussianMeanEf::sample(RandomStream rng) const {
  const GaussianParams p(Vector{mean()}, Matrix{{variance_}});
  auto z = gaussian_sample(p, rng);
  return {z.value[0], z.next};
}

std::unique_ptr<UnivariateEf> GaussianMeanEf::with_params(Vector params) const {
  return std::make_unique<GaussianMeanEf>(scalar_param(params, "gaussian-mean"), variance_);
}

GammaRateEf::GammaRateEf(double shape, double rate) : UnivariateEf(Vector{rate}), shape_(shape) {
  require_positive(shape, "gamma shape");
  require_positive(rate, "gamma rate");
}

double GammaRateEf::logpdf(double z) const {
  if (!(z > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape_ * std::log(rate()) + (shape_ - 1.0) * std::log(z) - rate() * z -
         std::lgamma(shape_);
}

double GammaRateEf::cdf(double z) const {
  return z > 0.0 ? regularized_gamma_p(shape_, rate() * z) : 0.0;
}

double GammaRateEf::dcdf_dparam(double z, std::size_t i) const {
  require_param_index(i);
  // psi = P(k, rate z), so d psi / d rate = z * q_std(rate z) = z q(z) / rate.
  return z > 0.0 ? z * pdf(z) / rate() : 0.0;
}

double GammaRateEf::dpdf_dz(double z) const {
  if (!(z > 0.0)) return 0.0;
  return ((shape_ - 1.0) / z - rate()) * pdf(z);
}

Draw<double> GammaRateEf::sample(RandomStream rng) const {
  auto g = gamma_sample(shape_, rng);
  return {g.value / rate(), g.next};
}

std::unique_ptr<UnivariateEf> GammaRateEf::with_params(Vector params) const {
  return std::make_unique<GammaRateEf>(shape_, scalar_param(params, "gamma-rate"));
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;
  if (x < a + 1.0) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIter; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(log_prefix);
  }
  // Modified Lentz evaluation of the continued fraction for Q(a, x).
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

double BivariateEfMixture::cond_pdf(double z1, double z2) const {
  return std::exp(cond_logpdf(z1, z2));
}

ExponentialPair::ExponentialPair(double rate, Coupling coupling)
    : marginal_(rate), coupling_(coupling) {}

std::string ExponentialPair::name() const {
  switch (coupling_) {
    case Coupling::Independent: return "exponential-pair(independent)";
    case Coupling::Scaled: return "exponential-pair(scaled)";
    case Coupling::Shifted: return "exponential-pair(shifted)";
  }
  return "exponential-pair";
}

double ExponentialPair::rate_at(double z1) const {
  const double lam = marginal_.rate();
  switch (coupling_) {
    case Coupling::Independent: return lam;
    case Coupling::Scaled: return lam * z1;
    case Coupling::Shifted: return lam + z1;
  }
  return lam;
}

double ExponentialPair::drate_dz1(double) const {
  switch (coupling_) {
    case Coupling::Independent: return 0.0;
    case Coupling::Scaled: return marginal_.rate();
    case Coupling::Shifted: return 1.0;
  }
  return 0.0;
}

double ExponentialPair::drate_dlambda(double z1) const {
  switch (coupling_) {
    case Coupling::Scaled: return z1;
    default: return 1.0;
  }
}

double ExponentialPair::cond_logpdf(double z1, double z2) const {
  if (!(z2 > 0.0)) return -std::numeric_limits<double>::infinity();
  const double r = rate_at(z1);
  return std::log(r) - r * z2;
}

double ExponentialPair::cond_cdf(double z1, double z2) const {
  return z2 > 0.0 ? -std::expm1(-rate_at(z1) * z2) : 0.0;
}

double ExponentialPair::cond_dcdf_dz1(double z1, double z2) const {
  if (!(z2 > 0.0)) return 0.0;
  return z2 * std::exp(-rate_at(z1) * z2) * drate_dz1(z1);
}

double ExponentialPair::cond_dcdf_dparam(double z1, double z2, std::size_t i) const {
  if (i != 0) throw DimensionMismatch("exponential pair has a single parameter");
  if (!(z2 > 0.0)) return 0.0;
  return z2 * std::exp(-rate_at(z1) * z2) * drate_dlambda(z1);
}

Draw<Vector> ExponentialPair::sample(RandomStream rng) const {
  auto z1 = marginal_.sample(rng);
  auto u = uniform(z1.next);
  return {Vector{z1.value, -std::log(u.value) / rate_at(z1.value)}, u.next};
}

std::unique_ptr<BivariateEfMixture> ExponentialPair::with_params(Vector params) const {
  return std::make_unique<ExponentialPair>(scalar_param(params, "exponential pair"), coupling_);
}

double implicit_velocity_1d(const UnivariateEf& d, std::size_t i, double z) {
  require_in_support(d.support(), z);
  const double q = d.pdf(z);
  if (!(q >= kUnderflowGuard)) {
    throw SingularTriangle("density " + std::to_string(q) + " underflows at z = " +
                           std::to_string(z));
  }
  return d.dcdf_dparam(z, i) / q;
}

Vector bivariate_velocities(const BivariateEfMixture& m, std::size_t i, const Vector& z) {
  if (z.size() != 2) throw DimensionMismatch("bivariate velocities need a length-2 point");
  require_in_support(m.marginal().support(), z[0]);
  require_in_support(m.conditional_support(z[0]), z[1]);
  const double q1 = m.marginal().pdf(z[0]);
  const double q2 = m.cond_pdf(z[0], z[1]);
  if (!(q1 >= kUnderflowGuard) || !(q2 >= kUnderflowGuard)) {
    throw SingularTriangle("diagonal of grad_z Psi underflows at (" + std::to_string(z[0]) +
                           ", " + std::to_string(z[1]) + ")");
  }
  const double f1 = m.marginal().dcdf_dparam(z[0], i) / q1;
  const double f2 = (m.cond_dcdf_dparam(z[0], z[1], i) - f1 * m.cond_dcdf_dz1(z[0], z[1])) / q2;
  return Vector{f1, f2};
}

std::vector<double> boundary_terms(const UnivariateEf& d, const std::function<double(double)>& g,
                                   bool lower_end, int decades) {
  const Interval s = d.support();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(decades));
  for (int k = 1; k <= decades; ++k) {
    double z;
    if (lower_end) {
      z = std::isfinite(s.lower) ? s.lower + std::pow(10.0, -k) : -std::pow(10.0, k);
    } else {
      z = std::isfinite(s.upper) ? s.upper - std::pow(10.0, -k) : std::pow(10.0, k);
    }
    const double q = d.pdf(z);
    out.push_back(q == 0.0 ? 0.0 : std::abs(g(z) * q));
  }
  return out;
}

}  // namespace steinrep
