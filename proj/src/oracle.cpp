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

#include "steinrep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "steinrep/errors.hpp"

namespace steinrep {

namespace {

constexpr std::size_t kPanelOrder = 8;
constexpr std::size_t kMaxHermite = 200;
constexpr std::size_t kMaxOracleDim = 3;

struct Node {
  double z;
  double w;
};
using LineRule = std::vector<Node>;

const QuadratureRule& legendre8() {
  static const QuadratureRule rule = gauss_legendre_nodes(kPanelOrder);
  return rule;
}

enum class LineShape { Full, Lower, Upper, Finite };

LineShape shape_of(Interval d) {
  const bool lo = std::isfinite(d.lower);
  const bool hi = std::isfinite(d.upper);
  if (lo && hi) return LineShape::Finite;
  if (lo) return LineShape::Lower;
  if (hi) return LineShape::Upper;
  return LineShape::Full;
}

// t-range, forward map z(t) with dz/dt, and its inverse.
struct LineMap {
  LineShape shape;
  Interval d;
  double loc;
  double s;

  std::pair<double, double> t_range() const {
    return shape == LineShape::Full ? std::pair{-1.0, 1.0} : std::pair{0.0, 1.0};
  }
  std::pair<double, double> forward(double t) const {
    switch (shape) {
      case LineShape::Full: {
        const double q = 1.0 - t * t;
        return {loc + s * t / q, s * (1.0 + t * t) / (q * q)};
      }
      case LineShape::Lower: {
        const double q = 1.0 - t;
        return {d.lower + s * t / q, s / (q * q)};
      }
      case LineShape::Upper: {
        const double q = 1.0 - t;
        return {d.upper - s * t / q, s / (q * q)};
      }
      case LineShape::Finite:
        return {d.lower + (d.upper - d.lower) * t, d.upper - d.lower};
    }
    return {0.0, 0.0};
  }
  double inverse(double z) const {
    switch (shape) {
      case LineShape::Full: {
        const double x = (z - loc) / s;
        return 2.0 * x / (1.0 + std::sqrt(1.0 + 4.0 * x * x));
      }
      case LineShape::Lower: {
        const double y = (z - d.lower) / s;
        return y / (1.0 + y);
      }
      case LineShape::Upper: {
        const double y = (d.upper - z) / s;
        return y / (1.0 + y);
      }
      case LineShape::Finite: return (z - d.lower) / (d.upper - d.lower);
    }
    return 0.0;
  }
};

LineRule line_rule(Interval domain, double location, double scale,
                   const std::vector<double>& breakpoints, std::size_t points) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("quadrature scale must be positive and finite");
  }
  const LineMap map{shape_of(domain), domain, location, scale};
  const auto [t0, t1] = map.t_range();
  std::vector<double> cuts{t0};
  for (double c : breakpoints) {
    if (domain.contains(c)) cuts.push_back(map.inverse(c));
  }
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const std::size_t panels = std::max<std::size_t>(1, points / kPanelOrder);
  const QuadratureRule& gl = legendre8();
  LineRule rule;
  rule.reserve((panels + cuts.size()) * kPanelOrder);
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double a = cuts[seg];
    const double b = cuts[seg + 1];
    const auto np = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(static_cast<double>(panels) * (b - a) / (t1 - t0))));
    const double hw = (b - a) / static_cast<double>(np);
    for (std::size_t k = 0; k < np; ++k) {
      const double mid = a + (static_cast<double>(k) + 0.5) * hw;
      for (std::size_t g = 0; g < kPanelOrder; ++g) {
        const double t = mid + 0.5 * hw * gl.nodes[g];
        const auto [z, dz] = map.forward(t);
        if (!std::isfinite(z) || !std::isfinite(dz) || !domain.contains(z)) continue;
        rule.push_back({z, 0.5 * hw * gl.weights[g] * dz});
      }
    }
  }
  return rule;
}

// Gaussian with a lower Cholesky factor, used for conditional laws.
struct GaussCore {
  Vector mean;
  Matrix chol;
  double log_norm = 0.0;

  GaussCore(Vector m, Matrix l) : mean(std::move(m)), chol(std::move(l)) {
    const std::size_t d = mean.size();
    log_norm = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
    for (std::size_t k = 0; k < d; ++k) log_norm -= std::log(chol(k, k));
  }
  double logpdf(const Vector& z) const {
    const std::size_t d = mean.size();
    double q = 0.0;
    double y[kMaxOracleDim];
    for (std::size_t i = 0; i < d; ++i) {
      double acc = z[i] - mean[i];
      for (std::size_t j = 0; j < i; ++j) acc -= chol(i, j) * y[j];
      y[i] = acc / chol(i, i);
      q += y[i] * y[i];
    }
    return log_norm - 0.5 * q;
  }
};

void check_dim(std::size_t d, const TestFunction& h) {
  if (d == 0 || d > kMaxOracleDim) {
    throw DomainError("quadrature oracle supports dimensions 1.." + std::to_string(kMaxOracleDim) +
                      ", got " + std::to_string(d));
  }
  if (h.dim() != d) {
    throw DimensionMismatch("test function dimension " + std::to_string(h.dim()) +
                            " does not match distribution dimension " + std::to_string(d));
  }
}

bool use_hermite(const QuadratureSpec& spec, const TestFunction& h) {
  switch (spec.scheme) {
    case QuadratureScheme::GaussHermiteTensor: return true;
    case QuadratureScheme::MappedGaussLegendre: return false;
    case QuadratureScheme::Auto: return !h.has_kinks();
  }
  return true;
}

// Odometer over a tensor grid of per-axis rules.
template <class F>
double tensor_sum(const std::vector<LineRule>& axes, F&& f) {
  const std::size_t d = axes.size();
  for (const auto& a : axes) {
    if (a.empty()) return 0.0;
  }
  std::vector<std::size_t> idx(d, 0);
  Vector z(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      z[k] = axes[k][idx[k]].z;
      w *= axes[k][idx[k]].w;
    }
    total += w * f(z);
    std::size_t k = 0;
    while (k < d && ++idx[k] == axes[k].size()) idx[k++] = 0;
    if (k == d) break;
  }
  return total;
}

// Standardised Gauss-Hermite axis (weights sum to 1), cached per size since
// nested mixture quadrature asks for the same rule at every mixing node.
const LineRule& hermite_axis(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, LineRule> cache;
  const std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    const QuadratureRule gh = gauss_hermite_nodes(n);
    LineRule rule(gh.nodes.size());
    for (std::size_t a = 0; a < rule.size(); ++a) {
      rule[a] = {gh.nodes[a], gh.weights[a] / std::sqrt(std::numbers::pi)};
    }
    it = cache.emplace(n, std::move(rule)).first;
  }
  return it->second;
}

double gauss_expect_fixed(const GaussCore& g, const TestFunction& h, bool hermite,
                          std::size_t n) {
  const std::size_t d = g.mean.size();
  if (hermite) {
    std::vector<LineRule> axes(d, hermite_axis(std::min(n, kMaxHermite)));
    Vector z(d);
    return tensor_sum(axes, [&](const Vector& t) {
      for (std::size_t i = 0; i < d; ++i) {
        double acc = g.mean[i];
        for (std::size_t j = 0; j <= i; ++j) acc += std::numbers::sqrt2 * g.chol(i, j) * t[j];
        z[i] = acc;
      }
      return h.value(z);
    });
  }
  std::vector<LineRule> axes;
  axes.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    double var = 0.0;
    for (std::size_t j = 0; j <= k; ++j) var += g.chol(k, j) * g.chol(k, j);
    axes.push_back(line_rule(Interval{}, g.mean[k], std::sqrt(var), h.kinks(k), 4 * n));
  }
  return tensor_sum(axes, [&](const Vector& z) {
    const double lp = g.logpdf(z);
    return lp < -745.0 ? 0.0 : h.value(z) * std::exp(lp);
  });
}

// Mixing-variable rule in log coordinates: w = exp(x), x on the full line.
// The half-normal law is folded onto (0, inf).
LineRule mixing_rule(const MixingSpec& m, std::size_t points) {
  if (m.kind() == MixingKind::PointMass) return {{1.0, 1.0}};
  LineRule x = line_rule(Interval{}, 0.0, 2.0, {}, points);
  LineRule out;
  out.reserve(x.size());
  const double fold = m.kind() == MixingKind::HalfNormalAbs ? 2.0 : 1.0;
  for (const Node& nd : x) {
    const double w = std::exp(nd.z);
    if (!(w > 0.0) || !std::isfinite(w)) continue;
    const double lq = m.log_density(w);
    if (!std::isfinite(lq) || lq + nd.z < -745.0) continue;
    out.push_back({w, fold * nd.w * w * std::exp(lq)});
  }
  return out;
}

GaussCore conditional_core(const GvmParams& p, const MixingSpec& m, double w) {
  const double u = m.u(w);
  const double sv = std::sqrt(m.v(w));
  return GaussCore(p.mu() + u * p.alpha(), sv * p.sigma().cholesky_factor());
}

double gvm_expect_fixed(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                        bool hermite, std::size_t nz, std::size_t nw) {
  double total = 0.0;
  for (const Node& nd : mixing_rule(m, nw)) {
    total += nd.w * gauss_expect_fixed(conditional_core(p, m, nd.z), h, hermite, nz);
  }
  return total;
}

// Half-line supports (l, inf) are integrated in x = log(z - l), which absorbs
// power-law and logarithmic behaviour at l (e.g. gamma shape < 1).
LineRule support_rule(Interval s, double location, double scale, const std::vector<double>& kinks,
                      std::size_t points) {
  if (!std::isfinite(s.lower) || std::isfinite(s.upper)) {
    return line_rule(s, location, scale, kinks, points);
  }
  std::vector<double> log_kinks;
  for (double k : kinks) {
    if (k > s.lower) log_kinks.push_back(std::log(k - s.lower));
  }
  const double centre = std::log(std::max(location - s.lower, scale));
  LineRule rule = line_rule(Interval{}, centre, 2.0, log_kinks, points);
  for (Node& nd : rule) {
    const double e = nd.z > 700.0 ? 0.0 : std::exp(nd.z);
    nd.w = e == 0.0 ? 0.0 : nd.w * e;
    nd.z = s.lower + e;
  }
  return rule;
}

double ef_expect_fixed(const UnivariateEf& d, const TestFunction& h, std::size_t n) {
  const LineRule rule =
      support_rule(d.support(), d.location_hint(), d.scale_hint(), h.kinks(0), 8 * n);
  Vector z(1);
  double total = 0.0;
  for (const Node& nd : rule) {
    if (!(nd.z > d.support().lower) || nd.w == 0.0) continue;
    const double lp = d.logpdf(nd.z);
    if (lp < -745.0) continue;
    z[0] = nd.z;
    total += nd.w * h.value(z) * std::exp(lp);
  }
  return total;
}

double bivariate_expect_fixed(const BivariateEfMixture& m, const TestFunction& h, std::size_t n) {
  const UnivariateEf& marg = m.marginal();
  const LineRule outer =
      support_rule(marg.support(), marg.location_hint(), marg.scale_hint(), h.kinks(0), 4 * n);
  Vector z(2);
  double total = 0.0;
  for (const Node& a : outer) {
    if (a.w == 0.0 || !(a.z > marg.support().lower)) continue;
    const double lp1 = marg.logpdf(a.z);
    if (lp1 < -745.0) continue;
    const LineRule inner = support_rule(m.conditional_support(a.z), 0.0,
                                        m.conditional_scale_hint(a.z), h.kinks(1), 4 * n);
    z[0] = a.z;
    double acc = 0.0;
    for (const Node& b : inner) {
      if (b.w == 0.0 || !(b.z > m.conditional_support(a.z).lower)) continue;
      const double lp2 = m.cond_logpdf(a.z, b.z);
      if (lp2 < -745.0) continue;
      z[1] = b.z;
      acc += b.w * h.value(z) * std::exp(lp2);
    }
    total += a.w * std::exp(lp1) * acc;
  }
  return total;
}

void check_converged(double coarse, double fine, double tol, const std::string& what) {
  if (!std::isfinite(coarse) || !std::isfinite(fine) ||
      std::abs(fine - coarse) > tol * std::max(1.0, std::abs(fine))) {
    throw NotConverged(what + ": quadrature did not converge (" + std::to_string(coarse) +
                       " vs " + std::to_string(fine) + ")");
  }
}

std::size_t doubled_hermite(std::size_t n, bool hermite) {
  return hermite ? std::min(2 * n, kMaxHermite) : 2 * n;
}

Matrix displaced_sigma(const Matrix& s, const ParamSelector& sel, double delta) {
  Matrix out = s;
  out(sel.i, sel.j) += delta;
  if (sel.i != sel.j) out(sel.j, sel.i) += delta;
  return out;
}

SpdMatrix checked_spd(const Matrix& m) {
  try {
    return SpdMatrix(m);
  } catch (const NotPositiveDefinite& e) {
    throw NotSpd(std::string("finite-difference step leaves the SPD cone: ") + e.what());
  }
}

void check_selector(const ParamSelector& sel, std::size_t d) {
  if (sel.i >= d || sel.j >= d) {
    throw DimensionMismatch("parameter index out of range for " + sel.label());
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (points_per_axis < 8) throw InvalidConfig("points_per_axis must be >= 8");
  if (mixing_points < 8) throw InvalidConfig("mixing_points must be >= 8");
  if (!(target_tol >= 1e-10)) throw InvalidConfig("target_tol must be >= 1e-10");
}

double integrate_line(const std::function<double(double)>& f, Interval domain, double location,
                      double scale, const std::vector<double>& breakpoints, std::size_t points) {
  double total = 0.0;
  for (const Node& nd : line_rule(domain, location, scale, breakpoints, points)) {
    total += nd.w * f(nd.z);
  }
  return total;
}

double mixing_expectation(const MixingSpec& m, const std::function<double(double)>& g,
                          std::size_t points) {
  double total = 0.0;
  for (const Node& nd : mixing_rule(m, points)) total += nd.w * g(nd.z);
  return total;
}

double mixture_density_quadrature(const GvmParams& p, const MixingSpec& m, const Vector& z,
                                  const std::function<double(double)>& weight,
                                  std::size_t points) {
  return mixing_expectation(
      m,
      [&](double w) {
        const double lp = conditional_core(p, m, w).logpdf(z);
        return lp < -745.0 ? 0.0 : weight(w) * std::exp(lp);
      },
      points);
}

double mixture_density_quadrature(const GvmParams& p, const MixingSpec& m, const Vector& z,
                                  std::size_t points) {
  return mixture_density_quadrature(p, m, z, [](double) { return 1.0; }, points);
}

double integrate_density(const std::function<double(const Vector&)>& logpdf, const Vector& center,
                         const Vector& scales, std::size_t points_per_axis) {
  const std::size_t d = center.size();
  if (d == 0 || d > kMaxOracleDim || scales.size() != d) {
    throw DimensionMismatch("integrate_density needs matching center/scales of dimension 1..3");
  }
  std::vector<LineRule> axes;
  for (std::size_t k = 0; k < d; ++k) {
    axes.push_back(line_rule(Interval{}, center[k], scales[k], {}, points_per_axis));
  }
  return tensor_sum(axes, [&](const Vector& z) {
    const double lp = logpdf(z);
    return lp < -745.0 ? 0.0 : std::exp(lp);
  });
}

double expect_gaussian(const GaussianParams& p, const TestFunction& h, const QuadratureSpec& spec) {
  spec.validate();
  check_dim(p.dim(), h);
  const bool gh = use_hermite(spec, h);
  const GaussCore core(p.mu(), p.sigma().cholesky_factor());
  const std::size_t n = spec.points_per_axis;
  const double coarse = gauss_expect_fixed(core, h, gh, n);
  const double fine = gauss_expect_fixed(core, h, gh, doubled_hermite(n, gh));
  check_converged(coarse, fine, spec.target_tol, "gaussian expectation of " + h.name());
  return fine;
}

double expect_gvm(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                  const QuadratureSpec& spec) {
  spec.validate();
  check_dim(p.dim(), h);
  const bool gh = use_hermite(spec, h);
  const std::size_t n = spec.points_per_axis;
  const double coarse = gvm_expect_fixed(p, m, h, gh, n, spec.mixing_points);
  const double fine =
      gvm_expect_fixed(p, m, h, gh, doubled_hermite(n, gh), 2 * spec.mixing_points);
  check_converged(coarse, fine, spec.target_tol, m.name() + " expectation of " + h.name());
  return fine;
}

double expect_ef(const UnivariateEf& d, const TestFunction& h, const QuadratureSpec& spec) {
  spec.validate();
  check_dim(1, h);
  const double coarse = ef_expect_fixed(d, h, spec.points_per_axis);
  const double fine = ef_expect_fixed(d, h, 2 * spec.points_per_axis);
  check_converged(coarse, fine, spec.target_tol, d.name() + " expectation of " + h.name());
  return fine;
}

double expect_bivariate(const BivariateEfMixture& m, const TestFunction& h,
                        const QuadratureSpec& spec) {
  spec.validate();
  check_dim(2, h);
  const double coarse = bivariate_expect_fixed(m, h, spec.points_per_axis);
  const double fine = bivariate_expect_fixed(m, h, 2 * spec.points_per_axis);
  check_converged(coarse, fine, spec.target_tol, m.name() + " expectation of " + h.name());
  return fine;
}

std::string ParamSelector::label() const {
  switch (target) {
    case GradTarget::Sigma: return "sigma[" + std::to_string(i) + "," + std::to_string(j) + "]";
    case GradTarget::Lambda: return "lambda[" + std::to_string(i) + "]";
    default: return to_string(target) + "[" + std::to_string(i) + "]";
  }
}

double default_fd_step(double parameter_value) {
  return 1e-4 * std::max(1.0, std::abs(parameter_value));
}

namespace {

constexpr int kFdHalvings = 4;

double fd_tol(double target_tol, double d1, double d2) {
  return 10.0 * target_tol * std::max(1.0, std::abs((4.0 * d2 - d1) / 3.0));
}

}  // namespace

double fd_param_gradient(const ParamExpectation& expectation, const ParamSelector& sel, double eps,
                         double target_tol) {
  if (!(eps > 0.0)) throw InvalidConfig("finite-difference step must be positive");
  const double mult = (sel.target == GradTarget::Sigma && sel.i != sel.j) ? 2.0 : 1.0;
  auto central = [&](double h) {
    return (expectation(sel, h) - expectation(sel, -h)) / (2.0 * h * mult);
  };
  // Halve the step while the pair still disagrees; the gap shrinks as eps^2
  // until quadrature noise takes over.
  double d1 = central(eps);
  double d2 = central(0.5 * eps);
  for (int k = 0; k < kFdHalvings && std::abs(d1 - d2) > fd_tol(target_tol, d1, d2); ++k) {
    eps *= 0.5;
    d1 = d2;
    d2 = central(0.5 * eps);
  }
  const double rich = (4.0 * d2 - d1) / 3.0;
  if (!std::isfinite(rich) || std::abs(d1 - d2) > fd_tol(target_tol, d1, d2)) {
    throw NotConverged("finite differences for " + sel.label() + " disagree: " +
                       std::to_string(d1) + " vs " + std::to_string(d2));
  }
  return rich;
}

ParamExpectation gaussian_expectation(const GaussianParams& p, const TestFunction& h,
                                      const QuadratureSpec& spec) {
  expect_gaussian(p, h, spec);
  const bool gh = use_hermite(spec, h);
  const std::size_t n = spec.points_per_axis;
  return [p, h, gh, n](const ParamSelector& sel, double delta) {
    check_selector(sel, p.dim());
    switch (sel.target) {
      case GradTarget::Mu: {
        Vector mu = p.mu();
        mu[sel.i] += delta;
        return gauss_expect_fixed(GaussCore(mu, p.sigma().cholesky_factor()), h, gh, n);
      }
      case GradTarget::Sigma: {
        const SpdMatrix s = checked_spd(displaced_sigma(p.sigma().matrix(), sel, delta));
        return gauss_expect_fixed(GaussCore(p.mu(), s.cholesky_factor()), h, gh, n);
      }
      default: throw DomainError("Gaussian expectations have no " + sel.label() + " parameter");
    }
  };
}

ParamExpectation gvm_expectation(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                                 const QuadratureSpec& spec) {
  expect_gvm(p, m, h, spec);
  const bool gh = use_hermite(spec, h);
  const std::size_t nz = spec.points_per_axis;
  const std::size_t nw = spec.mixing_points;
  return [p, m, h, gh, nz, nw](const ParamSelector& sel, double delta) {
    check_selector(sel, p.dim());
    Vector mu = p.mu();
    Vector alpha = p.alpha();
    Matrix sigma = p.sigma().matrix();
    switch (sel.target) {
      case GradTarget::Mu: mu[sel.i] += delta; break;
      case GradTarget::Alpha: alpha[sel.i] += delta; break;
      case GradTarget::Sigma: sigma = displaced_sigma(sigma, sel, delta); break;
      default: throw DomainError("mixture expectations have no " + sel.label() + " parameter");
    }
    const GvmParams q(std::move(mu), std::move(alpha), checked_spd(sigma));
    return gvm_expect_fixed(q, m, h, gh, nz, nw);
  };
}

ParamExpectation ef_expectation(const UnivariateEf& d, const TestFunction& h,
                                const QuadratureSpec& spec) {
  expect_ef(d, h, spec);
  std::shared_ptr<const UnivariateEf> base = d.with_params(d.params());
  const std::size_t n = spec.points_per_axis;
  return [base, h, n](const ParamSelector& sel, double delta) {
    if (sel.target != GradTarget::Lambda || sel.i >= base->num_params()) {
      throw DomainError(base->name() + " has no parameter " + sel.label());
    }
    Vector lam = base->params();
    lam[sel.i] += delta;
    return ef_expect_fixed(*base->with_params(lam), h, n);
  };
}

ParamExpectation bivariate_expectation(const BivariateEfMixture& m, const TestFunction& h,
                                       const QuadratureSpec& spec) {
  expect_bivariate(m, h, spec);
  std::shared_ptr<const BivariateEfMixture> base = m.with_params(m.params());
  const std::size_t n = spec.points_per_axis;
  return [base, h, n](const ParamSelector& sel, double delta) {
    if (sel.target != GradTarget::Lambda || sel.i >= base->params().size()) {
      throw DomainError(base->name() + " has no parameter " + sel.label());
    }
    Vector lam = base->params();
    lam[sel.i] += delta;
    return bivariate_expect_fixed(*base->with_params(lam), h, n);
  };
}

Vector oracle_gradient(const ParamExpectation& expectation, GradTarget target, std::size_t dim,
                       const std::function<double(const ParamSelector&)>& param_value,
                       double target_tol, std::size_t lambda_index) {
  auto one = [&](ParamSelector sel) {
    return fd_param_gradient(expectation, sel, default_fd_step(param_value(sel)), target_tol);
  };
  switch (target) {
    case GradTarget::Lambda: return Vector{one({GradTarget::Lambda, lambda_index, 0})};
    case GradTarget::Sigma: {
      Vector out(dim * dim);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
          const double g = one({GradTarget::Sigma, i, j});
          out[i * dim + j] = g;
          out[j * dim + i] = g;
        }
      }
      return out;
    }
    default: {
      Vector out(dim);
      for (std::size_t i = 0; i < dim; ++i) out[i] = one({target, i, 0});
      return out;
    }
  }
}

Vector gaussian_oracle_gradient(const GaussianParams& p, const TestFunction& h, GradTarget target,
                                const QuadratureSpec& spec) {
  auto value = [&](const ParamSelector& s) {
    return s.target == GradTarget::Sigma ? p.sigma()(s.i, s.j) : p.mu()[s.i];
  };
  return oracle_gradient(gaussian_expectation(p, h, spec), target, p.dim(), value,
                         spec.target_tol);
}

Vector gvm_oracle_gradient(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                           GradTarget target, const QuadratureSpec& spec) {
  auto value = [&](const ParamSelector& s) {
    switch (s.target) {
      case GradTarget::Sigma: return p.sigma()(s.i, s.j);
      case GradTarget::Alpha: return p.alpha()[s.i];
      default: return p.mu()[s.i];
    }
  };
  return oracle_gradient(gvm_expectation(p, m, h, spec), target, p.dim(), value, spec.target_tol);
}

Vector ef_oracle_gradient(const UnivariateEf& d, std::size_t i, const TestFunction& h,
                          const QuadratureSpec& spec) {
  auto value = [&](const ParamSelector& s) { return d.params()[s.i]; };
  return oracle_gradient(ef_expectation(d, h, spec), GradTarget::Lambda, 1, value,
                         spec.target_tol, i);
}

Vector bivariate_oracle_gradient(const BivariateEfMixture& m, std::size_t i, const TestFunction& h,
                                 const QuadratureSpec& spec) {
  auto value = [&](const ParamSelector& s) { return m.params()[s.i]; };
  return oracle_gradient(bivariate_expectation(m, h, spec), GradTarget::Lambda, 2, value,
                         spec.target_tol, i);
}

namespace {

double quadratic_moment(const Matrix& a, const Vector& b, double c, const Vector& mean,
                        const Matrix& cov) {
  if (!a.is_square() || a.rows() != mean.size() || b.size() != mean.size()) {
    throw DimensionMismatch("quadratic coefficients do not match the distribution dimension");
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) trace += a(i, j) * cov(j, i);
  }
  return trace + dot(mean, a * mean) + dot(b, mean) + c;
}

}  // namespace

double closed_form_quadratic_expect(const GaussianParams& p, const Matrix& a, const Vector& b,
                                    double c) {
  return quadratic_moment(a, b, c, p.mu(), p.sigma().matrix());
}

double closed_form_quadratic_expect(const GvmParams& p, const MixingSpec& m, const Matrix& a,
                                    const Vector& b, double c) {
  const auto mom = m.moments();
  if (!mom) throw MissingMoments(m.name() + " has no finite second moments");
  const Vector mean = p.mu() + mom->mean_u * p.alpha();
  const Matrix cov =
      mom->mean_v * p.sigma().matrix() + mom->var_u * Matrix::outer(p.alpha(), p.alpha());
  return quadratic_moment(a, b, c, mean, cov);
}

}  // namespace steinrep
