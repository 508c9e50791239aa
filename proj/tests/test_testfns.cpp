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

#include "steinrep/errors.hpp"
#include "steinrep/random.hpp"
#include "steinrep/testfns.hpp"

namespace steinrep {
namespace {

Vector fd_grad(const TestFunction& h, const Vector& z, double eps = 1e-6) {
  Vector g(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    Vector zp = z, zm = z;
    zp[k] += eps;
    zm[k] -= eps;
    g[k] = (h.value(zp) - h.value(zm)) / (2.0 * eps);
  }
  return g;
}

Matrix fd_hessian(const TestFunction& h, const Vector& z, double eps = 1e-5) {
  const std::size_t d = z.size();
  Matrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    Vector zp = z, zm = z;
    zp[k] += eps;
    zm[k] -= eps;
    const Vector gp = h.grad(zp), gm = h.grad(zm);
    for (std::size_t j = 0; j < d; ++j) out(j, k) = (gp[j] - gm[j]) / (2.0 * eps);
  }
  return out;
}

std::vector<Vector> random_probes(std::size_t d, std::size_t count, std::uint64_t seed) {
  std::vector<Vector> out;
  const RandomStream base(seed);
  for (std::size_t n = 0; n < count; ++n) {
    Vector z = standard_normal_vector(d, base.child(n)).value;
    out.push_back(2.0 * z);
  }
  return out;
}

void check_fd_consistency(const TestFunction& h, std::uint64_t seed) {
  for (const Vector& z : random_probes(h.dim(), 50, seed)) {
    bool near_kink = false;
    for (std::size_t k = 0; k < h.dim(); ++k) {
      for (double c : h.kinks(k)) near_kink |= std::abs(z[k] - c) < 1e-4;
    }
    if (near_kink) continue;
    const Vector g = h.grad(z);
    const Vector fd = fd_grad(h, z);
    for (std::size_t k = 0; k < h.dim(); ++k) {
      EXPECT_NEAR(g[k], fd[k], 1e-6 * std::max(1.0, std::abs(fd[k]))) << h.name();
    }
    if (!h.has_hessian()) continue;
    const Matrix hs = h.hessian(z);
    const Matrix fdh = fd_hessian(h, z);
    for (std::size_t i = 0; i < h.dim(); ++i) {
      for (std::size_t j = 0; j < h.dim(); ++j) {
        EXPECT_NEAR(hs(i, j), fdh(i, j), 1e-5 * std::max(1.0, std::abs(fdh(i, j)))) << h.name();
        EXPECT_EQ(hs(i, j), hs(j, i));
      }
    }
  }
}

TEST(Quadratic, Examples) {
  const TestFunction c5 = quadratic(Matrix(2, 2), Vector(2), 5.0);
  EXPECT_EQ(c5.value(Vector{1.0, -3.0}), 5.0);
  EXPECT_EQ(c5.grad(Vector{1.0, -3.0}), Vector(2));
  EXPECT_EQ(c5.hessian(Vector{1.0, -3.0}), Matrix(2, 2));

  const TestFunction sq = quadratic(Matrix{{1.0}}, Vector{0.0}, 0.0);
  EXPECT_EQ(sq.value(Vector{2.0}), 4.0);
  EXPECT_EQ(sq.grad(Vector{2.0})[0], 4.0);
  EXPECT_EQ(sq.hessian(Vector{2.0})(0, 0), 2.0);
  EXPECT_EQ(sq.smoothness(), Smoothness::C2);

  const TestFunction q2 = quadratic(Matrix{{1.0, 0.0}, {0.0, 2.0}}, Vector{1.0, 0.0}, 0.0);
  EXPECT_EQ(q2.value(Vector{1.0, 1.0}), 4.0);
  EXPECT_EQ(q2.grad(Vector{1.0, 1.0}), (Vector{3.0, 4.0}));
}

TEST(Quadratic, Errors) {
  EXPECT_THROW(quadratic(Matrix{{1.0, 0.5}, {0.0, 1.0}}, Vector(2), 0.0), AsymmetricA);
  EXPECT_THROW(quadratic(Matrix{{1.0, 0.0}, {0.0, 1.0}}, Vector(3), 0.0), DimensionMismatch);
}

TEST(AbsSum, Examples) {
  const TestFunction h = abs_sum(2);
  EXPECT_EQ(h.value(Vector{1.0, -2.0}), 3.0);
  EXPECT_EQ(h.grad(Vector{1.0, -2.0}), (Vector{1.0, -1.0}));
  EXPECT_EQ(h.smoothness(), Smoothness::LocallyAC);
  EXPECT_FALSE(h.has_hessian());
  EXPECT_THROW(h.hessian(Vector{1.0, 1.0}), SmoothnessViolation);
  EXPECT_FALSE(h.differentiable_at(Vector{0.0, 1.0}));
  EXPECT_TRUE(h.differentiable_at(Vector{0.5, 1.0}));
  EXPECT_EQ(h.grad(Vector{0.0, 1.0})[0], 0.0);
  ASSERT_EQ(h.kinks(0).size(), 1u);
  EXPECT_EQ(h.kinks(0)[0], 0.0);
}

TEST(LogSumExp, Examples) {
  const TestFunction h1 = log_sum_exp(Vector{1.0});
  EXPECT_NEAR(h1.value(Vector{0.7}), 0.7, 1e-15);
  EXPECT_NEAR(h1.grad(Vector{0.7})[0], 1.0, 1e-15);
  EXPECT_NEAR(h1.hessian(Vector{0.7})(0, 0), 0.0, 1e-15);

  const TestFunction h2 = log_sum_exp(Vector{1.0, 1.0});
  EXPECT_NEAR(h2.value(Vector{0.0, 0.0}), std::log(2.0), 1e-15);
  EXPECT_NEAR(h2.grad(Vector{0.0, 0.0})[0], 0.5, 1e-15);
  EXPECT_NEAR(h2.grad(Vector{0.0, 0.0})[1], 0.5, 1e-15);
}

TEST(LogSumExp, GradientBounded) {
  const Vector w{1.5, -0.5, 0.25};
  const TestFunction h = log_sum_exp(w);
  for (const Vector& z : random_probes(3, 50, 31)) {
    const Vector g = h.grad(z);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(std::abs(g[k]), std::abs(w[k]) + 1e-15);
  }
  // Stable for large arguments.
  EXPECT_NEAR(h.value(Vector{800.0, 0.0, 0.0}), 1200.0, 1e-9);
}

TEST(FiniteDifferences, AllShippedFunctions) {
  check_fd_consistency(quadratic(Matrix{{1.0, 0.3}, {0.3, -0.5}}, Vector{0.2, 1.0}, 0.1), 1);
  check_fd_consistency(abs_sum(2), 2);
  check_fd_consistency(log_sum_exp(Vector{1.0, -0.5}), 3);
  check_fd_consistency(log_sum_exp(Vector{0.3, 2.0, -1.0}), 4);
  check_fd_consistency(linear_function(Vector{0.5, -2.0}), 5);
  check_fd_consistency(constant_function(2, 3.0), 6);
}

TEST(TestFunction, SmoothFunctionsCannotDeclareKinks) {
  EXPECT_THROW(TestFunction(
                   "bad", 1, Smoothness::C2, [](const Vector&) { return 0.0; },
                   [](const Vector&) { return Vector(1); }, std::nullopt, {{0.0}}),
               DomainError);
}

}  // namespace
}  // namespace steinrep
