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

#include "steinrep/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "steinrep/errors.hpp"

namespace steinrep {

std::string to_string(GradTarget t) {
  switch (t) {
    case GradTarget::Mu: return "mu";
    case GradTarget::Alpha: return "alpha";
    case GradTarget::Sigma: return "sigma";
    case GradTarget::Lambda: return "lambda";
  }
  return "unknown";
}

double GradEstimate::sample_variance(std::size_t i, std::size_t j) const {
  const double s = se(i, j);
  return s * s * static_cast<double>(n_samples);
}

Matrix GradEstimate::as_matrix() const {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = value(i, j);
  return m;
}

void EstimatorConfig::validate() const {
  if (n_samples < 2) {
    throw InvalidConfig("estimators need n_samples >= 2, got " + std::to_string(n_samples));
  }
}

namespace {

constexpr std::size_t kBlockSize = 2048;
constexpr std::uint64_t kComponentStreamBase = 0x636F6D70ULL << 32;  // "comp"

// Welford accumulator; blocks are merged with Chan's pairwise update.
struct Moments {
  double count = 0.0;
  std::vector<double> mean;
  std::vector<double> m2;

  explicit Moments(std::size_t width = 0) : mean(width, 0.0), m2(width, 0.0) {}

  void push(std::span<const double> x) {
    count += 1.0;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const double delta = x[k] - mean[k];
      mean[k] += delta / count;
      m2[k] += delta * (x[k] - mean[k]);
    }
  }

  void merge(const Moments& other) {
    if (other.count == 0.0) return;
    const double total = count + other.count;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const double delta = other.mean[k] - mean[k];
      mean[k] += delta * (other.count / total);
      m2[k] += other.m2[k] + delta * delta * (count * other.count / total);
    }
    count = total;
  }
};

GradEstimate shaped(GradEstimate e, GradTarget target, std::size_t rows, std::size_t cols,
                    std::string id) {
  e.target = target;
  e.rows = rows;
  e.cols = cols;
  e.estimator_id = std::move(id);
  return e;
}

void require_dim(const TestFunction& h, std::size_t d) {
  if (h.dim() != d) {
    throw DimensionMismatch("test function " + h.name() + " has dimension " +
                            std::to_string(h.dim()) + ", distribution has " + std::to_string(d));
  }
}

void require_hessian(const TestFunction& h, const char* estimator) {
  if (!h.has_hessian()) {
    throw SmoothnessViolation(std::string(estimator) + " needs a Hessian but " + h.name() +
                              " is only " + to_string(h.smoothness()));
  }
}

// out = scale * H, then optionally (out + out^T) / 2.
void write_sigma_term(double scale, const Matrix& hess, bool symmetrize, std::span<double> out) {
  const std::size_t d = hess.rows();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = scale * hess(i, j);
  if (!symmetrize) return;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double s = (out[i * d + j] + out[j * d + i]) / 2.0;
      out[i * d + j] = s;
      out[j * d + i] = s;
    }
}

// out = 0.5 * r grad^T, then optionally symmetrised.
void write_first_order_term(const Vector& r, const Vector& grad, bool symmetrize,
                            std::span<double> out) {
  write_sigma_term(0.5, Matrix::outer(r, grad), symmetrize, out);
}

GradEstimate combine_components(std::vector<GradEstimate> parts) {
  GradEstimate total = parts.front();
  for (std::size_t j = 1; j < parts.size(); ++j) {
    for (std::size_t k = 0; k < total.estimate.size(); ++k) {
      total.estimate[k] += parts[j].estimate[k];
      total.std_error[k] = std::hypot(total.std_error[k], parts[j].std_error[k]);
    }
  }
  return total;
}

const WeightComponent& sampleable(const WeightComponent& c) {
  if (!c.sampler) throw MissingSampler("component " + c.label + " has no sampler");
  return c;
}

}  // namespace

GradEstimate monte_carlo_mean(std::size_t width, std::size_t n_samples, RandomStream stream,
                              unsigned threads, const TermFn& term) {
  if (n_samples < 2) throw InvalidConfig("need at least two samples");
  const std::size_t n_blocks = (n_samples + kBlockSize - 1) / kBlockSize;
  std::vector<Moments> blocks(n_blocks, Moments(width));

  auto run_blocks = [&](std::size_t first, std::size_t step) {
    std::vector<double> buffer(width);
    for (std::size_t b = first; b < n_blocks; b += step) {
      const std::size_t begin = b * kBlockSize;
      const std::size_t end = std::min(n_samples, begin + kBlockSize);
      for (std::size_t n = begin; n < end; ++n) {
        std::fill(buffer.begin(), buffer.end(), 0.0);
        term(stream.child(n), buffer);
        blocks[b].push(buffer);
      }
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));
  if (workers <= 1) {
    run_blocks(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run_blocks, t, workers);
    for (auto& th : pool) th.join();
  }

  Moments total(width);
  for (const auto& b : blocks) total.merge(b);

  GradEstimate e;
  e.n_samples = n_samples;
  e.estimate = Vector(std::move(total.mean));
  e.std_error = Vector(width);
  const double n = static_cast<double>(n_samples);
  for (std::size_t k = 0; k < width; ++k) {
    e.std_error[k] = std::sqrt(std::max(0.0, total.m2[k]) / (n - 1.0)) / std::sqrt(n);
  }
  e.rows = width;
  e.cols = 1;
  return e;
}

GradEstimate score_grad_mu(const GaussianParams& p, const TestFunction& h,
                           const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, p.dim());
  auto term = [&](RandomStream s, std::span<double> out) {
    const Vector z = gaussian_sample(p, s).value;
    const Vector score = p.sigma().solve(z - p.mu());
    const double hz = h.value(z);
    for (std::size_t k = 0; k < score.size(); ++k) out[k] = score[k] * hz;
  };
  return shaped(monte_carlo_mean(p.dim(), cfg.n_samples, cfg.rng, cfg.threads, term),
                GradTarget::Mu, p.dim(), 1, "score");
}

GradEstimate bonnet_grad_mu(const GaussianParams& p, const TestFunction& h,
                            const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, p.dim());
  auto term = [&](RandomStream s, std::span<double> out) {
    const Vector g = h.grad(gaussian_sample(p, s).value);
    std::copy(g.begin(), g.end(), out.begin());
  };
  return shaped(monte_carlo_mean(p.dim(), cfg.n_samples, cfg.rng, cfg.threads, term),
                GradTarget::Mu, p.dim(), 1, "bonnet");
}

GradEstimate stein_first_order_sigma(const GaussianParams& p, const TestFunction& h,
                                     const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, p.dim());
  const std::size_t d = p.dim();
  auto term = [&](RandomStream s, std::span<double> out) {
    const Vector z = gaussian_sample(p, s).value;
    write_first_order_term(p.sigma().solve(z - p.mu()), h.grad(z), cfg.symmetrize_sigma, out);
  };
  return shaped(monte_carlo_mean(d * d, cfg.n_samples, cfg.rng, cfg.threads, term),
                GradTarget::Sigma, d, d, "stein-first-order");
}

GradEstimate price_grad_sigma(const GaussianParams& p, const TestFunction& h,
                              const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, p.dim());
  require_hessian(h, "price_grad_sigma");
  const std::size_t d = p.dim();
  auto term = [&](RandomStream s, std::span<double> out) {
    write_sigma_term(0.5, h.hessian(gaussian_sample(p, s).value), cfg.symmetrize_sigma, out);
  };
  return shaped(monte_carlo_mean(d * d, cfg.n_samples, cfg.rng, cfg.threads, term),
                GradTarget::Sigma, d, d, "price");
}

GradEstimate gvm_grad_mu(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                         const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, p.dim());
  auto term = [&](RandomStream s, std::span<double> out) {
    const Vector g = h.grad(gvm_sample(p, m, s).value.z);
    std::copy(g.begin(), g.end(), out.begin());
  };
  return shaped(monte_carlo_mean(p.dim(), cfg.n_samples, cfg.rng, cfg.threads, term),
                GradTarget::Mu, p.dim(), 1, "gvm-mu");
}

GradEstimate gvm_grad_alpha(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                            const EstimatorConfig& cfg) {
  if (cfg.marginalized) {
    return gvm_grad_alpha_marginalized(p, decomposition_for(p, m, WeightKind::U), h, cfg);
  }
  cfg.validate();
  require_dim(h, p.dim());
  auto term = [&](RandomStream s, std::span<double> out) {
    const JointSample js = gvm_sample(p, m, s).value;
    const double uw = m.u(js.w);
    const Vector g = h.grad(js.z);
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = uw * g[k];
  };
  return shaped(monte_carlo_mean(p.dim(), cfg.n_samples, cfg.rng, cfg.threads, term),
                GradTarget::Alpha, p.dim(), 1, "gvm-alpha");
}

GradEstimate gvm_grad_alpha_marginalized(const GvmParams& p, const WeightDecomposition& dec,
                                         const TestFunction& h, const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, p.dim());
  if (dec.kind() != WeightKind::U) throw DomainError("alpha gradient needs a u-decomposition");
  if (dec.dim() != p.dim()) throw DimensionMismatch("decomposition dimension");
  std::vector<GradEstimate> parts;
  for (std::size_t j = 0; j < dec.count(); ++j) {
    const WeightComponent& c = sampleable(dec[j]);
    auto term = [&](RandomStream s, std::span<double> out) {
      const Vector z = c.sampler(s).value;
      const double uj = c.weight(z);
      const Vector g = h.grad(z);
      for (std::size_t k = 0; k < g.size(); ++k) out[k] = uj * g[k];
    };
    parts.push_back(monte_carlo_mean(p.dim(), cfg.n_samples,
                                     cfg.rng.child(kComponentStreamBase + j), cfg.threads, term));
  }
  return shaped(combine_components(std::move(parts)), GradTarget::Alpha, p.dim(), 1,
                "gvm-alpha-marginalized");
}

GradEstimate gvm_grad_sigma(const GvmParams& p, const MixingSpec& m, const TestFunction& h,
                            const EstimatorConfig& cfg, SigmaMode mode) {
  if (cfg.marginalized && mode == SigmaMode::Hessian) {
    return gvm_grad_sigma_marginalized(p, decomposition_for(p, m, WeightKind::V), h, cfg);
  }
  cfg.validate();
  require_dim(h, p.dim());
  const std::size_t d = p.dim();
  if (mode == SigmaMode::Hessian) {
    require_hessian(h, "gvm_grad_sigma (hessian mode)");
    auto term = [&](RandomStream s, std::span<double> out) {
      const JointSample js = gvm_sample(p, m, s).value;
      write_sigma_term(0.5 * m.v(js.w), h.hessian(js.z), cfg.symmetrize_sigma, out);
    };
    return shaped(monte_carlo_mean(d * d, cfg.n_samples, cfg.rng, cfg.threads, term),
                  GradTarget::Sigma, d, d, "gvm-sigma");
  }
  auto term = [&](RandomStream s, std::span<double> out) {
    const JointSample js = gvm_sample(p, m, s).value;
    const double uw = m.u(js.w);
    Vector centred = js.z - p.mu();
    for (std::size_t k = 0; k < d; ++k) centred[k] -= uw * p.alpha()[k];
    write_first_order_term(p.sigma().solve(centred), h.grad(js.z), cfg.symmetrize_sigma, out);
  };
  return shaped(monte_carlo_mean(d * d, cfg.n_samples, cfg.rng, cfg.threads, term),
                GradTarget::Sigma, d, d, "gvm-sigma-first-order");
}

GradEstimate gvm_grad_sigma_marginalized(const GvmParams& p, const WeightDecomposition& dec,
                                         const TestFunction& h, const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, p.dim());
  require_hessian(h, "gvm_grad_sigma_marginalized");
  if (dec.kind() != WeightKind::V) throw DomainError("Sigma gradient needs a v-decomposition");
  if (dec.dim() != p.dim()) throw DimensionMismatch("decomposition dimension");
  const std::size_t d = p.dim();
  std::vector<GradEstimate> parts;
  for (std::size_t j = 0; j < dec.count(); ++j) {
    const WeightComponent& c = sampleable(dec[j]);
    auto term = [&](RandomStream s, std::span<double> out) {
      const Vector z = c.sampler(s).value;
      write_sigma_term(0.5 * c.weight(z), h.hessian(z), cfg.symmetrize_sigma, out);
    };
    parts.push_back(monte_carlo_mean(d * d, cfg.n_samples,
                                     cfg.rng.child(kComponentStreamBase + j), cfg.threads, term));
  }
  return shaped(combine_components(std::move(parts)), GradTarget::Sigma, d, d,
                "gvm-sigma-marginalized");
}

WeightDecomposition decomposition_for(const GvmParams& p, const MixingSpec& m, WeightKind kind) {
  if (kind == WeightKind::U) {
    switch (m.kind()) {
      case MixingKind::HalfNormalAbs: return skew_u_decomposition(p);
      case MixingKind::Exponential: return emg_u_decomposition(p);
      default: break;
    }
  } else {
    switch (m.kind()) {
      case MixingKind::InverseGamma: return student_v_decomposition(p, m.beta());
      case MixingKind::InverseGaussian: return nig_v_decomposition(p, m.beta());
      default: break;
    }
  }
  throw MissingSampler("no " + std::string(kind == WeightKind::U ? "u" : "v") +
                       "-decomposition ships for mixing law " + m.name());
}

GradEstimate implicit_grad_1d(const UnivariateEf& d, std::size_t i, const TestFunction& h,
                              const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, 1);
  if (i >= d.num_params()) throw DimensionMismatch("parameter index out of range");
  auto term = [&](RandomStream s, std::span<double> out) {
    const double z = d.sample(s).value;
    const double f = implicit_velocity_1d(d, i, z);
    out[0] = -(f * h.grad(Vector{z})[0]);
  };
  GradEstimate e = shaped(monte_carlo_mean(1, cfg.n_samples, cfg.rng, cfg.threads, term),
                          GradTarget::Lambda, 1, 1, "implicit");
  e.param_index = i;
  return e;
}

GradEstimate implicit_grad_bivariate(const BivariateEfMixture& m, std::size_t i,
                                     const TestFunction& h, const EstimatorConfig& cfg) {
  cfg.validate();
  require_dim(h, 2);
  if (i >= m.params().size()) throw DimensionMismatch("parameter index out of range");
  auto term = [&](RandomStream s, std::span<double> out) {
    const Vector z = m.sample(s).value;
    const Vector f = bivariate_velocities(m, i, z);
    const Vector g = h.grad(z);
    out[0] = -(f[0] * g[0] + f[1] * g[1]);
  };
  GradEstimate e = shaped(monte_carlo_mean(1, cfg.n_samples, cfg.rng, cfg.threads, term),
                          GradTarget::Lambda, 1, 1, "implicit-bivariate");
  e.param_index = i;
  return e;
}

}  // namespace steinrep
