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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "steinrep/errors.hpp"
#include "steinrep/numerics.hpp"

namespace steinrep {
namespace {

constexpr double kPi = std::numbers::pi;

// K_nu(x) = \int_0^inf exp(-x cosh t) cosh(nu t) dt by the trapezoid rule,
// which converges geometrically for this analytic, doubly-decaying integrand.
double bessel_k_integral(double nu, double x) {
  const double h = 1e-3;
  double sum = 0.5;  // t = 0 term, cosh(0) = 1, times exp(-x) folded below
  sum *= std::exp(-x);
  for (int k = 1;; ++k) {
    const double t = k * h;
    const double term = std::exp(-x * std::cosh(t)) * std::cosh(nu * t);
    sum += term;
    if (term < 1e-300 || (t > 5.0 && term < 1e-20 * sum)) break;
  }
  return h * sum;
}

TEST(Cholesky, IdentityIsFixedPoint) {
  const Matrix l = cholesky(Matrix::identity(2));
  EXPECT_EQ(l, Matrix::identity(2));
}

TEST(Cholesky, TwoByTwoExample) {
  const Matrix l = cholesky(Matrix{{4.0, 2.0}, {2.0, 3.0}});
  EXPECT_NEAR(l(0, 0), 2.0, 1e-15);
  EXPECT_EQ(l(0, 1), 0.0);
  EXPECT_NEAR(l(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(l(1, 1), std::sqrt(2.0), 1e-15);
}

TEST(Cholesky, IndefiniteRejected) {
  EXPECT_THROW(cholesky(Matrix{{1.0, 2.0}, {2.0, 1.0}}), NotPositiveDefinite);
}

TEST(Cholesky, ReconstructsRandomSpd) {
  // B B^T + I for a fixed pseudo-random 3x3 B.
  const Matrix b{{0.3, -1.2, 0.7}, {2.1, 0.4, -0.5}, {-0.8, 1.1, 0.9}};
  const Matrix m = b * b.transpose() + Matrix::identity(3);
  const Matrix l = cholesky(m);
  EXPECT_LE((l * l.transpose() - m).max_abs(), 1e-10 * m.max_abs());
}

TEST(SpdMatrix, RejectsAsymmetric) {
  EXPECT_THROW(SpdMatrix(Matrix{{1.0, 0.2}, {0.3, 1.0}}), NotPositiveDefinite);
}

TEST(SpdMatrix, LogDetAndInverse) {
  const SpdMatrix s(Matrix{{4.0, 2.0}, {2.0, 3.0}});
  EXPECT_NEAR(s.log_det(), std::log(8.0), 1e-14);
  const Matrix inv = s.inverse();
  EXPECT_NEAR(inv(0, 0), 3.0 / 8.0, 1e-15);
  EXPECT_NEAR(inv(0, 1), -0.25, 1e-15);
  EXPECT_NEAR(inv(1, 1), 0.5, 1e-15);
}

TEST(SolveSpd, Examples) {
  const Vector b{2.0, 5.0};
  EXPECT_EQ(solve_spd(SpdMatrix::identity(2), b), b);
  const Vector x = solve_spd(SpdMatrix(Matrix{{2.0, 0.0}, {0.0, 4.0}}), Vector{2.0, 4.0});
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[1], 1.0);
  const Vector y = solve_spd(SpdMatrix(Matrix{{4.0, 2.0}, {2.0, 3.0}}), Vector{1.0, 0.0});
  EXPECT_NEAR(y[0], 3.0 / 8.0, 1e-15);
  EXPECT_NEAR(y[1], -0.25, 1e-15);
}

TEST(SolveSpd, ResidualBound) {
  const Matrix m{{5.0, 1.0, 0.5}, {1.0, 4.0, -1.0}, {0.5, -1.0, 3.0}};
  const Vector b{1.0, -2.0, 0.25};
  const Vector x = solve_spd(SpdMatrix(m), b);
  EXPECT_LE(max_abs(m * x - b), 1e-9 * max_abs(b));
}

TEST(SolveSpd, DimensionMismatch) {
  EXPECT_THROW(solve_spd(SpdMatrix::identity(2), Vector{1.0}), DimensionMismatch);
}

TEST(NormCdf, Examples) {
  EXPECT_EQ(norm_cdf(0.0), 0.5);
  EXPECT_NEAR(norm_cdf(8.0), 1.0, 1e-15);
  EXPECT_NEAR(norm_cdf(1.0), 0.8413447460685429, 2e-16);
}

TEST(NormCdf, SymmetryAndMonotonicity) {
  double prev = 0.0;
  for (double x = -9.0; x <= 9.0; x += 0.05) {
    const double p = norm_cdf(x);
    EXPECT_NEAR(norm_cdf(-x), 1.0 - p, 1e-15);
    EXPECT_GE(p, prev);
    prev = p;
  }
}

TEST(LogNormCdf, MatchesReferenceIncludingDeepTail) {
  // Reference values from 40-digit arithmetic.
  EXPECT_NEAR(log_norm_cdf(-3.0), -6.6077262215103495, 1e-13);
  EXPECT_NEAR(log_norm_cdf(-10.0), -53.231285150512471, 1e-12);
  EXPECT_NEAR(log_norm_cdf(-40.0), -804.60844201375379, 1e-10);
  EXPECT_NEAR(log_norm_cdf(-100.0), -5005.5242086942051, 1e-9);
  EXPECT_NEAR(log_norm_cdf(6.0), -9.8658764552437573e-10, 1e-22);
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    EXPECT_NEAR(log_norm_cdf(x), std::log(norm_cdf(x)), 1e-13);
  }
}

TEST(BesselK, HalfIntegerClosedForms) {
  for (double x : {0.1, 0.5, 1.0, 3.0, 20.0}) {
    EXPECT_NEAR(bessel_k(0.5, x), std::sqrt(kPi / (2.0 * x)) * std::exp(-x),
                1e-14 * bessel_k(0.5, x));
  }
  EXPECT_NEAR(bessel_k(1.5, 1.0), 2.0 * std::sqrt(kPi / 2.0) * std::exp(-1.0), 1e-15);
}

TEST(BesselK, K1AtOne) { EXPECT_NEAR(bessel_k(1.0, 1.0), 0.6019072301972346, 1e-15); }

TEST(BesselK, MatchesIntegralRepresentation) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
      const double ref = bessel_k_integral(nu, x);
      EXPECT_NEAR(bessel_k(nu, x), ref, 1e-12 * ref) << "nu=" << nu << " x=" << x;
    }
  }
}

TEST(BesselK, RecurrenceClosure) {
  // K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu, using K_{-nu} = K_nu.
  for (double nu : {0.5, 1.0, 1.5, 2.0}) {
    for (double x : {0.5, 1.0, 2.0, 5.0}) {
      const double lhs = bessel_k(nu + 1.0, x);
      const double rhs = bessel_k(std::abs(nu - 1.0), x) + 2.0 * nu / x * bessel_k(nu, x);
      EXPECT_NEAR(lhs, rhs, 1e-9 * lhs);
    }
  }
}

TEST(BesselK, DomainErrors) {
  EXPECT_THROW(bessel_k(1.0, 0.0), DomainError);
  EXPECT_THROW(bessel_k(1.0, -2.0), DomainError);
  EXPECT_THROW(bessel_k(0.75, 1.0), DomainError);
  EXPECT_THROW(bessel_k(3.5, 1.0), DomainError);
}

TEST(LogBesselK, LargeArgumentReference) {
  // Reference values from 40-digit arithmetic.
  EXPECT_NEAR(log_bessel_k(0.0, 1000.0), -1003.2282112244113, 1e-11);
  EXPECT_NEAR(log_bessel_k(1.0, 600.0), -602.97204899503875, 1e-11);
  EXPECT_NEAR(log_bessel_k(2.5, 800.0), -803.11276685493376, 1e-11);
  EXPECT_NEAR(log_bessel_k(3.0, 550.0), -552.92122047837662, 1e-11);
  EXPECT_NEAR(log_bessel_k(0.0, 0.5), -0.078589769869081417, 1e-14);
  EXPECT_NEAR(log_bessel_k(2.0, 5.0), -5.2383623877680453, 1e-13);
  EXPECT_NEAR(log_bessel_k(3.0, 0.5), 4.1280679737917629, 1e-13);
}

TEST(GaussHermite, SmallOrders) {
  const QuadratureRule r1 = gauss_hermite_nodes(1);
  ASSERT_EQ(r1.nodes.size(), 1u);
  EXPECT_NEAR(r1.nodes[0], 0.0, 1e-15);
  EXPECT_NEAR(r1.weights[0], std::sqrt(kPi), 1e-14);
  const QuadratureRule r2 = gauss_hermite_nodes(2);
  EXPECT_NEAR(r2.nodes[0], -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r2.nodes[1], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r2.weights[0], std::sqrt(kPi) / 2.0, 1e-14);
  EXPECT_NEAR(r2.weights[1], std::sqrt(kPi) / 2.0, 1e-14);
}

TEST(GaussHermite, FourthMomentWithFiveNodes) {
  const QuadratureRule r = gauss_hermite_nodes(5);
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) s += r.weights[i] * std::pow(r.nodes[i], 4);
  EXPECT_NEAR(s, 3.0 * std::sqrt(kPi) / 4.0, 1e-13);
}

TEST(GaussHermite, ExactnessAndSymmetry) {
  for (std::size_t n : {3u, 10u, 20u, 40u}) {
    const QuadratureRule r = gauss_hermite_nodes(n);
    double total = 0.0;
    for (double w : r.weights) total += w;
    EXPECT_NEAR(total, std::sqrt(kPi), 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(r.nodes[i], -r.nodes[n - 1 - i]);
      EXPECT_EQ(r.weights[i], r.weights[n - 1 - i]);
    }
    for (std::size_t k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      if (k % 2 == 1) {
        // Beyond k = 9 the naive sum is dominated by cancellation roundoff;
        // exact symmetry above already forces the odd moments to vanish.
        if (k <= 9) EXPECT_NEAR(s, 0.0, 1e-12) << "n=" << n << " k=" << k;
      } else {
        const double exact = std::tgamma((static_cast<double>(k) + 1.0) / 2.0);
        EXPECT_NEAR(s, exact, 1e-10 * std::max(1.0, exact)) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(GaussHermite, EveryOrderHasDistinctRootsAndFullMass) {
  for (std::size_t n = 1; n <= 200; ++n) {
    const QuadratureRule r = gauss_hermite_nodes(n);
    double total = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += r.weights[i];
      second += r.weights[i] * r.nodes[i] * r.nodes[i];
      if (i > 0) EXPECT_LT(r.nodes[i - 1], r.nodes[i]) << "n=" << n;
    }
    EXPECT_NEAR(total, std::sqrt(kPi), 1e-12) << "n=" << n;
    if (n > 1) EXPECT_NEAR(second, 0.5 * std::sqrt(kPi), 1e-12) << "n=" << n;
  }
}

TEST(GaussHermite, RejectsBadOrder) {
  EXPECT_THROW(gauss_hermite_nodes(0), DomainError);
  EXPECT_THROW(gauss_hermite_nodes(201), DomainError);
  EXPECT_NO_THROW(gauss_hermite_nodes(200));
}

TEST(GaussLegendre, PolynomialExactness) {
  const QuadratureRule r = gauss_legendre_nodes(8);
  for (int k = 0; k <= 15; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 8; ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
    const double exact = k % 2 == 1 ? 0.0 : 2.0 / (k + 1.0);
    EXPECT_NEAR(s, exact, 1e-14);
  }
}

}  // namespace
}  // namespace steinrep
