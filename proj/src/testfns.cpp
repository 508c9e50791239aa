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

#include "steinrep/testfns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "steinrep/errors.hpp"

namespace steinrep {

std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::LocallyAC: return "locally-AC";
    case Smoothness::C1GradAC: return "C1-grad-AC";
    case Smoothness::C2: return "C2";
  }
  return "unknown";
}

TestFunction::TestFunction(std::string name, std::size_t dim, Smoothness smoothness,
                           ValueFn value, GradFn grad, std::optional<HessianFn> hessian,
                           std::vector<std::vector<double>> kinks)
    : name_(std::move(name)),
      dim_(dim),
      smoothness_(smoothness),
      value_(std::move(value)),
      grad_(std::move(grad)),
      hessian_(std::move(hessian)),
      kinks_(std::move(kinks)) {
  if (dim_ == 0) throw DimensionMismatch("test function dimension must be >= 1");
  kinks_.resize(dim_);
  for (auto& axis : kinks_) std::sort(axis.begin(), axis.end());
  if (smoothness_ != Smoothness::LocallyAC && has_kinks()) {
    throw DomainError("a differentiable test function cannot declare kinks");
  }
}

Matrix TestFunction::hessian(const Vector& z) const {
  if (!hessian_) {
    throw SmoothnessViolation(name_ + " (" + to_string(smoothness_) +
                              ") has no Hessian; second-order identities need C1 with an "
                              "absolutely continuous gradient");
  }
  return (*hessian_)(z);
}

const std::vector<double>& TestFunction::kinks(std::size_t axis) const {
  return kinks_.at(axis);
}

bool TestFunction::has_kinks() const noexcept {
  return std::any_of(kinks_.begin(), kinks_.end(),
                     [](const auto& axis) { return !axis.empty(); });
}

bool TestFunction::differentiable_at(const Vector& z) const {
  for (std::size_t k = 0; k < dim_; ++k)
    for (double c : kinks_[k])
      if (z[k] == c) return false;
  return true;
}

TestFunction quadratic(Matrix a, Vector b, double c) {
  const std::size_t d = b.size();
  if (a.rows() != d || a.cols() != d) throw DimensionMismatch("quadratic: A and b disagree");
  if (!a.is_symmetric(1e-12)) throw AsymmetricA("quadratic form matrix must be symmetric");
  std::ostringstream name;
  name << "quadratic(d=" << d << ")";
  auto value = [a, b, c](const Vector& z) { return dot(z, a * z) + dot(b, z) + c; };
  auto grad = [a, b](const Vector& z) { return 2.0 * (a * z) + b; };
  auto hess = [a](const Vector&) { return 2.0 * a; };
  return TestFunction(name.str(), d, Smoothness::C2, value, grad, TestFunction::HessianFn(hess));
}

TestFunction abs_sum(std::size_t dim) {
  auto value = [](const Vector& z) {
    double s = 0.0;
    for (double v : z) s += std::abs(v);
    return s;
  };
  auto grad = [](const Vector& z) {
    Vector g(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) g[k] = z[k] > 0.0 ? 1.0 : (z[k] < 0.0 ? -1.0 : 0.0);
    return g;
  };
  return TestFunction("abs_sum(d=" + std::to_string(dim) + ")", dim, Smoothness::LocallyAC,
                      value, grad, std::nullopt,
                      std::vector<std::vector<double>>(dim, std::vector<double>{0.0}));
}

namespace {

// Softmax of (w_k z_k) and the log-normaliser.
double softmax(const Vector& w, const Vector& z, Vector& p) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < w.size(); ++k) top = std::max(top, w[k] * z[k]);
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    p[k] = std::exp(w[k] * z[k] - top);
    s += p[k];
  }
  for (double& v : p) v /= s;
  return top + std::log(s);
}

}  // namespace

TestFunction log_sum_exp(Vector weights) {
  if (weights.empty() || !weights.all_finite()) {
    throw DomainError("log_sum_exp weights must be finite and non-empty");
  }
  const std::size_t d = weights.size();
  auto value = [weights](const Vector& z) {
    Vector p(weights.size());
    return softmax(weights, z, p);
  };
  auto grad = [weights](const Vector& z) {
    Vector p(weights.size());
    softmax(weights, z, p);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] *= weights[k];
    return p;
  };
  auto hess = [weights](const Vector& z) {
    const std::size_t n = weights.size();
    Vector p(n);
    softmax(weights, z, p);
    Matrix h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        h(i, j) = -(weights[i] * p[i]) * (weights[j] * p[j]);
      }
      h(i, i) += weights[i] * weights[i] * p[i];
    }
    return h;
  };
  return TestFunction("log_sum_exp(d=" + std::to_string(d) + ")", d, Smoothness::C2, value,
                      grad, TestFunction::HessianFn(hess));
}

TestFunction constant_function(std::size_t dim, double c) {
  return quadratic(Matrix(dim, dim), Vector(dim), c);
}

TestFunction linear_function(Vector b) {
  const std::size_t d = b.size();
  return quadratic(Matrix(d, d), std::move(b), 0.0);
}

}  // namespace steinrep
