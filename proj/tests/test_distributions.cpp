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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "steinrep/distributions.hpp"
#include "steinrep/errors.hpp"
#include "steinrep/oracle.hpp"
#include "test_support.hpp"

namespace steinrep {
namespace {

using testing::SampleStats;

constexpr std::size_t kDraws = 1000000;

TEST(GaussianSample, Deterministic) {
  const GaussianParams p(Vector{0.0, 0.0}, Matrix::identity(2));
  const RandomStream s(2024);
  EXPECT_EQ(gaussian_sample(p, s).value, gaussian_sample(p, s).value);
  EXPECT_NE(gaussian_sample(p, s).value, gaussian_sample(p, s.child(1)).value);
}

TEST(GaussianSample, UnivariateMoments) {
  const GaussianParams p(Vector{3.0}, Matrix{{4.0}});
  SampleStats st;
  const RandomStream base(1);
  for (std::size_t n = 0; n < kDraws; ++n) st.push(gaussian_sample(p, base.child(n)).value[0]);
  EXPECT_NEAR(st.mean(), 3.0, 5.0 * st.se_mean());
  EXPECT_NEAR(st.variance(), 4.0, 5.0 * st.se_variance());
}

TEST(GaussianSample, BivariateCovariance) {
  const GaussianParams p(Vector{0.0, 0.0}, Matrix{{2.0, 1.0}, {1.0, 2.0}});
  std::vector<double> a, b;
  a.reserve(kDraws);
  b.reserve(kDraws);
  const RandomStream base(2);
  for (std::size_t n = 0; n < kDraws; ++n) {
    const Vector z = gaussian_sample(p, base.child(n)).value;
    a.push_back(z[0]);
    b.push_back(z[1]);
  }
  EXPECT_NEAR(testing::sample_covariance(a, a), 2.0, 5.0 * testing::se_covariance(a, a));
  EXPECT_NEAR(testing::sample_covariance(a, b), 1.0, 5.0 * testing::se_covariance(a, b));
  EXPECT_NEAR(testing::sample_covariance(b, b), 2.0, 5.0 * testing::se_covariance(b, b));
}

TEST(GaussianLogpdf, Examples) {
  const double log2pi = std::log(2.0 * std::numbers::pi);
  EXPECT_NEAR(gaussian_logpdf(GaussianParams(Vector{0.0}, Matrix{{1.0}}), Vector{0.0}),
              -0.5 * log2pi, 1e-15);
  EXPECT_NEAR(gaussian_logpdf(GaussianParams(Vector{0.4, -1.0}, Matrix::identity(2)),
                              Vector{0.4, -1.0}),
              -log2pi, 1e-15);
  EXPECT_NEAR(gaussian_logpdf(GaussianParams(Vector{1.0}, Matrix{{4.0}}), Vector{3.0}),
              -0.5 * std::log(8.0 * std::numbers::pi) - 0.5, 1e-15);
}

TEST(GaussianLogpdf, Normalises) {
  const GaussianParams p(Vector{0.5, -0.3}, Matrix{{1.5, 0.4}, {0.4, 0.7}});
  const double total = integrate_density([&](const Vector& z) { return gaussian_logpdf(p, z); },
                                         p.mu(), Vector{1.2, 0.8}, 400);
  EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(GaussianParams, RejectsMismatch) {
  EXPECT_THROW(GaussianParams(Vector{0.0, 0.0}, Matrix{{1.0}}), DimensionMismatch);
  EXPECT_THROW(GvmParams(Vector{0.0}, Vector{0.0, 1.0}, Matrix{{1.0}}), DimensionMismatch);
}

TEST(MixingSpec, ShapeValidation) {
  EXPECT_THROW(MixingSpec::inverse_gamma(1.0), InvalidShape);
  EXPECT_THROW(MixingSpec::inverse_gamma(0.5), InvalidShape);
  EXPECT_THROW(MixingSpec::inverse_gaussian(0.0), InvalidShape);
  EXPECT_NO_THROW(MixingSpec::inverse_gamma(1.01));
}

class MixingMomentsTest : public ::testing::TestWithParam<int> {};

MixingSpec mixing_by_index(int i) {
  switch (i) {
    case 0: return MixingSpec::half_normal_abs();
    case 1: return MixingSpec::exponential_unit();
    case 2: return MixingSpec::inverse_gamma(3.0);
    default: return MixingSpec::inverse_gaussian(1.5);
  }
}

TEST_P(MixingMomentsTest, DeclaredMomentsMatchDraws) {
  const MixingSpec m = mixing_by_index(GetParam());
  const MixingMoments mom = *m.moments();
  SampleStats u, v;
  const RandomStream base(100 + GetParam());
  for (std::size_t n = 0; n < kDraws; ++n) {
    const double w = mixing_sample(m, base.child(n)).value;
    u.push(m.u(w));
    v.push(m.v(w));
    ASSERT_GT(m.v(w), 0.0);
  }
  EXPECT_NEAR(v.mean(), mom.mean_v, 5.0 * v.se_mean() + 1e-15) << m.name();
  if (m.has_skew_weight()) {
    EXPECT_NEAR(u.mean(), mom.mean_u, 5.0 * u.se_mean()) << m.name();
    EXPECT_NEAR(u.variance(), mom.var_u, 5.0 * u.se_variance()) << m.name();
  } else {
    EXPECT_EQ(u.mean(), 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(Laws, MixingMomentsTest, ::testing::Values(0, 1, 2, 3));

TEST(MixingSpec, Examples) {
  EXPECT_NEAR(MixingSpec::half_normal_abs().moments()->mean_u, 0.7978845608028654, 1e-15);
  const auto e = *MixingSpec::exponential_unit().moments();
  EXPECT_EQ(e.mean_u, 1.0);
  EXPECT_EQ(e.var_u, 1.0);
  EXPECT_DOUBLE_EQ(MixingSpec::inverse_gamma(3.0).moments()->mean_v, 1.5);
}

TEST(GammaSample, Moments) {
  for (double shape : {0.5, 2.5}) {
    SampleStats st;
    const RandomStream base(7);
    for (std::size_t n = 0; n < 400000; ++n) st.push(gamma_sample(shape, base.child(n)).value);
    EXPECT_NEAR(st.mean(), shape, 5.0 * st.se_mean());
    EXPECT_NEAR(st.variance(), shape, 5.0 * st.se_variance());
  }
}

class GvmMomentTest : public ::testing::TestWithParam<int> {};

TEST_P(GvmMomentTest, MeanAndVarianceMatchMixtureFormula) {
  const MixingSpec m = mixing_by_index(GetParam());
  const double alpha = m.has_skew_weight() ? 0.8 : 0.0;
  const GvmParams p(Vector{0.3}, Vector{alpha}, Matrix{{1.7}});
  const MixingMoments mom = *m.moments();
  const double mean = 0.3 + mom.mean_u * alpha;
  const double var = mom.mean_v * 1.7 + mom.var_u * alpha * alpha;

  // The formula itself against nested quadrature.
  EXPECT_NEAR(expect_gvm(p, m, linear_function(Vector{1.0})), mean, 1e-8);
  EXPECT_NEAR(expect_gvm(p, m, quadratic(Matrix{{1.0}}, Vector{0.0}, 0.0)), var + mean * mean,
              1e-8);

  SampleStats st;
  const RandomStream base(300 + GetParam());
  for (std::size_t n = 0; n < kDraws; ++n) st.push(gvm_sample(p, m, base.child(n)).value.z[0]);
  EXPECT_NEAR(st.mean(), mean, 5.0 * st.se_mean()) << m.name();
  EXPECT_NEAR(st.variance(), var, 5.0 * st.se_variance()) << m.name();
}

INSTANTIATE_TEST_SUITE_P(Laws, GvmMomentTest, ::testing::Values(0, 1, 2, 3));

TEST(GvmSample, BivariateNigCovariance) {
  const MixingSpec m = MixingSpec::inverse_gaussian(2.0);
  const Vector alpha{0.5, -0.4};
  const Matrix sigma{{1.0, 0.3}, {0.3, 0.6}};
  const GvmParams p(Vector{0.1, 0.2}, alpha, sigma);
  const MixingMoments mom = *m.moments();
  const Matrix cov = mom.mean_v * sigma + mom.var_u * Matrix::outer(alpha, alpha);
  std::vector<double> a, b;
  const RandomStream base(17);
  SampleStats ma, mb;
  for (std::size_t n = 0; n < kDraws; ++n) {
    const Vector z = gvm_sample(p, m, base.child(n)).value.z;
    a.push_back(z[0]);
    b.push_back(z[1]);
    ma.push(z[0]);
    mb.push(z[1]);
  }
  EXPECT_NEAR(ma.mean(), 0.1 + alpha[0], 5.0 * ma.se_mean());
  EXPECT_NEAR(mb.mean(), 0.2 + alpha[1], 5.0 * mb.se_mean());
  EXPECT_NEAR(testing::sample_covariance(a, a), cov(0, 0), 5.0 * testing::se_covariance(a, a));
  EXPECT_NEAR(testing::sample_covariance(a, b), cov(0, 1), 5.0 * testing::se_covariance(a, b));
  EXPECT_NEAR(testing::sample_covariance(b, b), cov(1, 1), 5.0 * testing::se_covariance(b, b));
}

TEST(GvmSample, SkewAndStudentExamples) {
  SampleStats skew, student;
  const GvmParams ps(Vector{0.0}, Vector{1.0}, Matrix{{1.0}});
  const GvmParams pt(Vector{0.0}, Vector{0.0}, Matrix{{1.0}});
  const MixingSpec hn = MixingSpec::half_normal_abs();
  const MixingSpec ig = MixingSpec::inverse_gamma(3.0);
  const RandomStream base(55);
  for (std::size_t n = 0; n < kDraws; ++n) {
    skew.push(gvm_sample(ps, hn, base.child(n)).value.z[0]);
    student.push(gvm_sample(pt, ig, base.child(n)).value.z[0]);
  }
  EXPECT_NEAR(skew.mean(), std::sqrt(2.0 / std::numbers::pi), 5.0 * skew.se_mean());
  EXPECT_NEAR(student.variance(), 1.5, 5.0 * student.se_variance());
}

TEST(GvmSample, PointMassIsBitIdenticalToGaussian) {
  const Matrix sigma{{1.3, -0.2}, {-0.2, 0.9}};
  const GvmParams p(Vector{0.4, -0.1}, Vector{0.0, 0.0}, sigma);
  const GaussianParams g(Vector{0.4, -0.1}, sigma);
  const RandomStream base(99);
  for (std::uint64_t n = 0; n < 1000; ++n) {
    EXPECT_EQ(gvm_sample(p, MixingSpec::point_mass(), base.child(n)).value.z,
              gaussian_sample(g, base.child(n)).value);
  }
}

TEST(GvmSample, Deterministic) {
  const GvmParams p(Vector{0.0}, Vector{1.0}, Matrix{{1.0}});
  const RandomStream s(3, 1, 4);
  const auto a = gvm_sample(p, MixingSpec::inverse_gaussian(1.0), s).value;
  const auto b = gvm_sample(p, MixingSpec::inverse_gaussian(1.0), s).value;
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.z, b.z);
}

TEST(GvmSample, ConditionalLawGivenW) {
  // Stratify on the mixing draw: within each stratum the standardised residual
  // (z - mu - u(w) alpha) / sqrt(v(w)) must have variance Sigma.
  const MixingSpec m = MixingSpec::inverse_gaussian(1.0);
  const GvmParams p(Vector{0.5}, Vector{0.7}, Matrix{{2.0}});
  std::vector<std::pair<double, double>> draws;
  const RandomStream base(8);
  for (std::size_t n = 0; n < 400000; ++n) {
    const JointSample js = gvm_sample(p, m, base.child(n)).value;
    draws.emplace_back(js.w, (js.z[0] - 0.5 - 0.7 * m.u(js.w)) / std::sqrt(m.v(js.w)));
  }
  std::sort(draws.begin(), draws.end());
  const std::size_t bins = 4;
  for (std::size_t b = 0; b < bins; ++b) {
    SampleStats st;
    for (std::size_t k = b * draws.size() / bins; k < (b + 1) * draws.size() / bins; ++k) {
      st.push(draws[k].second);
    }
    EXPECT_NEAR(st.mean(), 0.0, 5.0 * st.se_mean());
    EXPECT_NEAR(st.variance(), 2.0, 5.0 * st.se_variance());
  }
}

}  // namespace
}  // namespace steinrep
