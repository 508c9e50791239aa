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

#include "steinrep/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "steinrep/errors.hpp"

namespace steinrep {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) +
                            " vs " + std::to_string(b));
  }
}

}  // namespace

bool Vector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "vector add");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "vector subtract");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vector operator*(double s, const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

double dot(const Vector& a, const Vector& b) {
  require_same_size(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require_same_size(r.size(), cols_, "matrix row length");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::outer(const Vector& a, const Vector& b) {
  Matrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require_same_size(rows[i].size(), m.cols(), "matrix row length");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector Matrix::operator*(const Vector& x) const {
  require_same_size(cols_, x.size(), "matrix-vector product");
  Vector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix Matrix::operator*(const Matrix& other) const {
  require_same_size(cols_, other.rows_, "matrix product");
  Matrix r(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      for (std::size_t j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
    }
  return r;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

bool Matrix::is_symmetric(double rel_tol) const {
  if (!is_square()) return false;
  const double scale = max_abs();
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
  return true;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "matrix add");
  require_same_size(a.cols(), b.cols(), "matrix add");
  Matrix r = a;
  for (std::size_t i = 0; i < r.flat().size(); ++i) r.flat()[i] += b.flat()[i];
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_size(a.rows(), b.rows(), "matrix subtract");
  require_same_size(a.cols(), b.cols(), "matrix subtract");
  Matrix r = a;
  for (std::size_t i = 0; i < r.flat().size(); ++i) r.flat()[i] -= b.flat()[i];
  return r;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix r = a;
  for (double& v : r.flat()) v *= s;
  return r;
}

Matrix cholesky(const Matrix& m) {
  if (!m.is_square()) throw DimensionMismatch("cholesky of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      throw NotPositiveDefinite("pivot " + std::to_string(j) + " is " +
                                std::to_string(pivot));
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

SpdMatrix::SpdMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || !m_.is_square()) {
    throw DimensionMismatch("SPD matrix must be square with dimension >= 1");
  }
  if (!m_.all_finite()) throw NotPositiveDefinite("matrix has non-finite entries");
  if (!m_.is_symmetric(1e-12)) throw NotPositiveDefinite("matrix is not symmetric");
  chol_ = cholesky(m_);
}

Vector SpdMatrix::solve_lower(const Vector& b) const {
  require_same_size(dim(), b.size(), "SPD solve");
  const std::size_t n = dim();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol_(i, k) * y[k];
    y[i] = s / chol_(i, i);
  }
  return y;
}

Vector SpdMatrix::solve(const Vector& b) const {
  Vector x = solve_lower(b);
  const std::size_t n = dim();
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= chol_(k, ii) * x[k];
    x[ii] = s / chol_(ii, ii);
  }
  return x;
}

double SpdMatrix::quad_form_inverse(const Vector& b) const {
  const Vector y = solve_lower(b);
  return dot(y, y);
}

double SpdMatrix::log_det() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) s += std::log(chol_(i, i));
  return 2.0 * s;
}

Matrix SpdMatrix::inverse() const {
  const std::size_t n = dim();
  Matrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector col = solve(Vector::unit(n, j));
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

Vector solve_spd(const SpdMatrix& m, const Vector& b) { return m.solve(b); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double log_norm_cdf(double x) {
  if (x > 5.0) return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
  if (x > -30.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  // Asymptotic Mills-ratio series; the truncation error is below 1e-16 here.
  const double r = 1.0 / (x * x);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(-x) +
         std::log(series);
}

namespace {

// Returns 2*order as an integer in [0, 6], or throws.
int checked_twice_order(double order) {
  const double twice = 2.0 * order;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 0.0 || rounded < 0.0 || rounded > 6.0) {
    throw DomainError("unsupported Bessel K order " + std::to_string(order));
  }
  return static_cast<int>(rounded);
}

// Polynomial factor p with K_{n+1/2}(x) = sqrt(pi/(2x)) e^{-x} p(1/x).
double half_integer_factor(int twice_order, double x) {
  const double r = 1.0 / x;
  switch (twice_order) {
    case 1: return 1.0;
    case 3: return 1.0 + r;
    case 5: return 1.0 + 3.0 * r + 3.0 * r * r;
    default: throw DomainError("not a half-integer order");
  }
}

double integer_bessel_k(int order, double x) {
  const double k0 = std::cyl_bessel_k(0.0, x);
  if (order == 0) return k0;
  double km1 = k0;
  double k = std::cyl_bessel_k(1.0, x);
  // Upward recurrence K_{n+1} = K_{n-1} + (2n/x) K_n is stable for K.
  for (int n = 1; n < order; ++n) {
    const double kp1 = km1 + (2.0 * n / x) * k;
    km1 = k;
    k = kp1;
  }
  return k;
}

}  // namespace

double bessel_k(double order, double x) {
  const int twice = checked_twice_order(order);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("Bessel K requires x > 0, got " + std::to_string(x));
  }
  if (twice % 2 == 1) {
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) *
           half_integer_factor(twice, x);
  }
  return integer_bessel_k(twice / 2, x);
}

double log_bessel_k(double order, double x) {
  const int twice = checked_twice_order(order);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("Bessel K requires x > 0, got " + std::to_string(x));
  }
  const double log_prefactor = 0.5 * std::log(std::numbers::pi / (2.0 * x)) - x;
  if (twice % 2 == 1) return log_prefactor + std::log(half_integer_factor(twice, x));
  if (x < 500.0) return std::log(integer_bessel_k(twice / 2, x));
  // Hankel asymptotic expansion; five terms are exact to double precision here.
  const double mu = 1.0 * twice * twice;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 5; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    sum += term;
  }
  return log_prefactor + std::log(sum);
}

namespace {

// Number of eigenvalues below x of the Hermite Jacobi matrix (zero diagonal,
// off-diagonal sqrt(k / 2)), by the Sturm sequence of its leading minors.
std::size_t hermite_sturm_count(std::size_t n, double x) {
  std::size_t count = 0;
  double q = -x;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) q = -x - 0.5 * static_cast<double>(k) / q;
    if (q == 0.0) q = -1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

// The j-th smallest root of H_n to about 1e-13 by bisection.
double hermite_root_by_bisection(std::size_t n, std::size_t j) {
  double hi = std::sqrt(2.0 * static_cast<double>(n) + 1.0) + 1.0;
  double lo = -hi;
  while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (hermite_sturm_count(n, mid) > j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

QuadratureRule gauss_hermite_nodes(std::size_t n) {
  if (n < 1 || n > 200) {
    throw DomainError("Gauss-Hermite order must be in [1, 200], got " +
                      std::to_string(n));
  }
  constexpr double kPiToMinusQuarter = 0.7511255444649425;
  constexpr int kMaxIter = 100;
  std::vector<double> x(n), w(n);
  const std::size_t m = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < m; ++i) {
    // Bracketed start from the Jacobi matrix, polished by Newton below.
    double z = hermite_root_by_bisection(n, n - 1 - i);
    double pp = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
      double p1 = kPiToMinusQuarter;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  if (n % 2 == 1) x[m - 1] = 0.0;
  std::reverse(x.begin(), x.end());
  std::reverse(w.begin(), w.end());
  return {std::move(x), std::move(w)};
}

QuadratureRule gauss_legendre_nodes(std::size_t n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be >= 1");
  std::vector<double> x(n), w(n);
  const std::size_t m = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (nd + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd + 1.0) * z * p2 - jd * p3) / (jd + 1.0);
      }
      pp = nd * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  if (n % 2 == 1) x[m - 1] = 0.0;
  return {std::move(x), std::move(w)};
}

}  // namespace steinrep
