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
#include <optional>
#include <string>
#include <vector>

#include "steinrep/numerics.hpp"

namespace steinrep {

/// Smoothness class of an integrand, weakest first.
///  - LocallyAC: absolutely continuous on compact sets; gradient defined a.e.
///  - C1GradAC: continuously differentiable with an a.e. Hessian.
///  - C2: twice continuously differentiable.
enum class Smoothness { LocallyAC, C1GradAC, C2 };

std::string to_string(Smoothness s);

/// Integrand h(z) with hand-coded derivatives.
///
/// Non-differentiability is restricted to axis-aligned hyperplanes
/// z_k = c, declared per axis in `kinks`. Quadrature oracles split their
/// panels there; samplers ignore them (they have measure zero).
class TestFunction {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;

  TestFunction(std::string name, std::size_t dim, Smoothness smoothness, ValueFn value,
               GradFn grad, std::optional<HessianFn> hessian,
               std::vector<std::vector<double>> kinks = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  bool has_hessian() const noexcept { return hessian_.has_value(); }

  double value(const Vector& z) const { return value_(z); }
  Vector grad(const Vector& z) const { return grad_(z); }
  /// Throws SmoothnessViolation when the function carries no Hessian.
  Matrix hessian(const Vector& z) const;

  /// Breakpoints along `axis` (empty for smooth functions).
  const std::vector<double>& kinks(std::size_t axis) const;
  bool has_kinks() const noexcept;
  /// False on the declared non-differentiability set.
  bool differentiable_at(const Vector& z) const;

 private:
  std::string name_;
  std::size_t dim_;
  Smoothness smoothness_;
  ValueFn value_;
  GradFn grad_;
  std::optional<HessianFn> hessian_;
  std::vector<std::vector<double>> kinks_;
};

/// z^T A z + b^T z + c. Throws AsymmetricA unless A is symmetric.
TestFunction quadratic(Matrix a, Vector b, double c);
/// sum_k |z_k|. The gradient is sign(z) with sign(0) = 0.
TestFunction abs_sum(std::size_t dim);
/// log sum_k exp(w_k z_k).
TestFunction log_sum_exp(Vector weights);

/// Convenience wrappers over `quadratic`.
TestFunction constant_function(std::size_t dim, double c);
TestFunction linear_function(Vector b);

}  // namespace steinrep
