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

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "steinrep/numerics.hpp"
#include "steinrep/random.hpp"

namespace steinrep {

/// Open interval (lower, upper); endpoints may be infinite.
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double z) const noexcept { return z > lower && z < upper; }
};

/// Univariate continuous exponential-family distribution q(z | lambda) whose
/// support does not depend on lambda. Instances supply the CDF psi(z, lambda)
/// and its parameter derivative directly.
class UnivariateEf {
 public:
  virtual ~UnivariateEf() = default;

  virtual std::string name() const = 0;
  virtual Interval support() const = 0;
  const Vector& params() const noexcept { return params_; }
  std::size_t num_params() const noexcept { return params_.size(); }

  virtual double logpdf(double z) const = 0;
  double pdf(double z) const;
  virtual double cdf(double z) const = 0;
  /// d psi(z, lambda) / d lambda_i.
  virtual double dcdf_dparam(double z, std::size_t i) const = 0;
  /// d q(z | lambda) / dz.
  virtual double dpdf_dz(double z) const = 0;
  virtual Draw<double> sample(RandomStream rng) const = 0;
  /// Same family with a different parameter vector (used by FD oracles).
  virtual std::unique_ptr<UnivariateEf> with_params(Vector params) const = 0;

  /// Typical location and spread, used to map quadrature onto the support.
  virtual double location_hint() const = 0;
  virtual double scale_hint() const = 0;

 protected:
  explicit UnivariateEf(Vector params) : params_(std::move(params)) {}
  void require_param_index(std::size_t i) const;

 private:
  Vector params_;
};

/// Exp(rate): params = (rate).
class ExponentialEf final : public UnivariateEf {
 public:
  explicit ExponentialEf(double rate);
  double rate() const noexcept { return params()[0]; }

  std::string name() const override { return "exponential"; }
  Interval support() const override { return {0.0, std::numeric_limits<double>::infinity()}; }
  double logpdf(double z) const override;
  double cdf(double z) const override;
  double dcdf_dparam(double z, std::size_t i) const override;
  double dpdf_dz(double z) const override;
  Draw<double> sample(RandomStream rng) const override;
  std::unique_ptr<UnivariateEf> with_params(Vector params) const override;
  double location_hint() const override { return 0.0; }
  double scale_hint() const override { return 1.0 / rate(); }
};

/// N(mean, variance) with the mean learnable and the variance fixed.
class GaussianMeanEf final : public UnivariateEf {
 public:
  GaussianMeanEf(double mean, double variance);
  double mean() const noexcept { return params()[0]; }
  double variance() const noexcept { return variance_; }

  std::string name() const override { return "gaussian-mean"; }
  Interval support() const override { return {}; }
  double logpdf(double z) const override;
  double cdf(double z) const override;
  double dcdf_dparam(double z, std::size_t i) const override;
  double dpdf_dz(double z) const override;
  /// Same draw as gaussian_sample on a one-dimensional N(mean, variance).
  Draw<double> sample(RandomStream rng) const override;
  std::unique_ptr<UnivariateEf> with_params(Vector params) const override;
  double location_hint() const override { return mean(); }
  double scale_hint() const override { return std::sqrt(variance_); }

 private:
  double variance_;
};

/// Gamma(shape, rate) with the shape fixed and the rate learnable.
class GammaRateEf final : public UnivariateEf {
 public:
  GammaRateEf(double shape, double rate);
  double shape() const noexcept { return shape_; }
  double rate() const noexcept { return params()[0]; }

  std::string name() const override { return "gamma-rate"; }
  Interval support() const override { return {0.0, std::numeric_limits<double>::infinity()}; }
  double logpdf(double z) const override;
  double cdf(double z) const override;
  double dcdf_dparam(double z, std::size_t i) const override;
  double dpdf_dz(double z) const override;
  Draw<double> sample(RandomStream rng) const override;
  std::unique_ptr<UnivariateEf> with_params(Vector params) const override;
  double location_hint() const override { return 0.0; }
  double scale_hint() const override { return shape_ / rate(); }

 private:
  double shape_;
};

/// Regularised lower incomplete gamma P(a, x): series below x = a + 1,
/// Lentz continued fraction above.
double regularized_gamma_p(double a, double x);

/// q(z1 | lambda) q(z2 | z1, lambda) on a product of open intervals, with
/// lambda shared by both factors.
class BivariateEfMixture {
 public:
  virtual ~BivariateEfMixture() = default;

  virtual std::string name() const = 0;
  virtual const UnivariateEf& marginal() const = 0;
  virtual Interval conditional_support(double z1) const = 0;
  const Vector& params() const noexcept { return marginal().params(); }

  virtual double cond_logpdf(double z1, double z2) const = 0;
  double cond_pdf(double z1, double z2) const;
  /// psi_2(z1, z2, lambda).
  virtual double cond_cdf(double z1, double z2) const = 0;
  virtual double cond_dcdf_dz1(double z1, double z2) const = 0;
  virtual double cond_dcdf_dparam(double z1, double z2, std::size_t i) const = 0;

  virtual Draw<Vector> sample(RandomStream rng) const = 0;
  virtual std::unique_ptr<BivariateEfMixture> with_params(Vector params) const = 0;
  virtual double conditional_scale_hint(double z1) const = 0;
};

/// z1 ~ Exp(lambda), z2 | z1 ~ Exp(r(z1, lambda)) with one of three rates.
class ExponentialPair final : public BivariateEfMixture {
 public:
  enum class Coupling {
    Independent,  // r = lambda
    Scaled,       // r = lambda * z1
    Shifted,      // r = lambda + z1
  };

  ExponentialPair(double rate, Coupling coupling);
  Coupling coupling() const noexcept { return coupling_; }

  std::string name() const override;
  const UnivariateEf& marginal() const override { return marginal_; }
  Interval conditional_support(double) const override {
    return {0.0, std::numeric_limits<double>::infinity()};
  }
  double cond_logpdf(double z1, double z2) const override;
  double cond_cdf(double z1, double z2) const override;
  double cond_dcdf_dz1(double z1, double z2) const override;
  double cond_dcdf_dparam(double z1, double z2, std::size_t i) const override;
  Draw<Vector> sample(RandomStream rng) const override;
  std::unique_ptr<BivariateEfMixture> with_params(Vector params) const override;
  double conditional_scale_hint(double z1) const override { return 1.0 / rate_at(z1); }

  double rate_at(double z1) const;

 private:
  double drate_dz1(double z1) const;
  double drate_dlambda(double z1) const;

  ExponentialEf marginal_;
  Coupling coupling_;
};

/// f_i(z) = (d psi / d lambda_i) / q(z | lambda). Throws OutOfSupport outside
/// the open support and SingularTriangle when q underflows below 1e-300.
double implicit_velocity_1d(const UnivariateEf& d, std::size_t i, double z);

/// (f_{i,1}, f_{i,2}) = [grad_z Psi]^-1 grad_{lambda_i} Psi by forward
/// substitution on the lower-triangular Jacobian.
Vector bivariate_velocities(const BivariateEfMixture& m, std::size_t i, const Vector& z);

/// |g(z) q(z | lambda)| at points approaching one end of the support:
/// z = l + 10^-k for a finite end, z = -/+10^k for an infinite one,
/// k = 1..decades.
std::vector<double> boundary_terms(const UnivariateEf& d, const std::function<double(double)>& g,
                                   bool lower_end, int decades);

}  // namespace steinrep
