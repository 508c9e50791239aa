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

// Small dense linear algebra, special functions and quadrature rules.
// Dimensions in this library are tiny (d <= 5 in practice), so everything
// here favours clarity over blocking or vectorisation.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace steinrep {

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> init) : data_(init) {}
  explicit Vector(std::vector<double> data) : data_(std::move(data)) {}

  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  bool all_finite() const noexcept;
  bool operator==(const Vector&) const = default;

  static Vector unit(std::size_t n, std::size_t i) {
    Vector e(n);
    e[i] = 1.0;
    return e;
  }

 private:
  std::vector<double> data_;
};

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);
double dot(const Vector& a, const Vector& b);
double max_abs(const Vector& a);

/// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Nested initializer: `Matrix{{4, 2}, {2, 3}}`.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix outer(const Vector& a, const Vector& b);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }

  Matrix transpose() const;
  Vector operator*(const Vector& x) const;
  Matrix operator*(const Matrix& other) const;
  double max_abs() const;
  bool all_finite() const noexcept;
  /// Max |m_ij - m_ji| <= rel_tol * max|m|.
  bool is_symmetric(double rel_tol = 1e-12) const;
  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// Lower-triangular L with L L^T = m. Throws NotPositiveDefinite on a
/// non-positive pivot. Only the lower triangle of `m` is read.
Matrix cholesky(const Matrix& m);

/// A symmetric positive-definite matrix together with its Cholesky factor.
/// Construction validates symmetry (1e-12 relative) and positive pivots.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  static SpdMatrix identity(std::size_t n) { return SpdMatrix(Matrix::identity(n)); }

  std::size_t dim() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  const Matrix& cholesky_factor() const noexcept { return chol_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  /// Solves m x = b by forward and backward substitution.
  Vector solve(const Vector& b) const;
  /// Solves L y = b (forward only); |y|^2 is the Mahalanobis form b^T m^-1 b.
  Vector solve_lower(const Vector& b) const;
  double quad_form_inverse(const Vector& b) const;
  double log_det() const;
  Matrix inverse() const;

 private:
  Matrix m_;
  Matrix chol_;
};

Vector solve_spd(const SpdMatrix& m, const Vector& b);

/// Standard normal CDF.
double norm_cdf(double x);
/// log of the standard normal CDF, accurate deep into the lower tail.
double log_norm_cdf(double x);
/// Standard normal density.
double norm_pdf(double x);

/// Modified Bessel function of the second kind K_order(x).
/// Supported orders: 0, 1/2, 1, 3/2, 2, 5/2, 3. Throws DomainError otherwise
/// or when x <= 0.
double bessel_k(double order, double x);
/// log K_order(x); stays finite for large x where K underflows.
double log_bessel_k(double order, double x);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for the weight e^{-t^2}; 1 <= n <= 200.
QuadratureRule gauss_hermite_nodes(std::size_t n);
/// Gauss-Legendre rule on [-1, 1]; n >= 1.
QuadratureRule gauss_legendre_nodes(std::size_t n);

}  // namespace steinrep
