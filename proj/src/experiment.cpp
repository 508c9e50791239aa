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

#include "steinrep/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "steinrep/errors.hpp"

namespace steinrep {

namespace {

using nlohmann::json;

const std::set<std::string> kGvmFamilies = {"skew-gaussian", "emg", "student-t", "nig"};

bool is_gvm(const std::string& family) { return kGvmFamilies.count(family) > 0; }
bool is_ef(const std::string& family) {
  return family == "ef-exponential" || family == "ef-gamma" || family == "ef-bivariate";
}

bool needs_hessian(const std::string& id) {
  return id == "price" || id == "gvm-sigma" || id == "gvm-sigma-marginalized";
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("unknown field '" + it.key() + "' in " + where);
    }
  }
}

std::vector<double> scalar_or_list(const json& j) {
  if (j.is_number()) return {j.get<double>()};
  return j.get<std::vector<double>>();
}

MixingSpec mixing_for(const ExperimentConfig& cfg) {
  if (cfg.family == "skew-gaussian") return MixingSpec::half_normal_abs();
  if (cfg.family == "emg") return MixingSpec::exponential_unit();
  if (cfg.family == "student-t") return MixingSpec::inverse_gamma(cfg.params.beta);
  if (cfg.family == "nig") return MixingSpec::inverse_gaussian(cfg.params.beta);
  throw ConfigError("family " + cfg.family + " is not a variance-mean mixture");
}

Matrix sigma_of(const ExperimentConfig& cfg) { return Matrix::from_rows(cfg.params.sigma); }

GaussianParams gaussian_of(const ExperimentConfig& cfg) {
  return GaussianParams(Vector(cfg.params.mu), sigma_of(cfg));
}

GvmParams gvm_of(const ExperimentConfig& cfg) {
  Vector alpha = cfg.params.alpha.empty() ? Vector(cfg.dim) : Vector(cfg.params.alpha);
  return GvmParams(Vector(cfg.params.mu), std::move(alpha), sigma_of(cfg));
}

std::unique_ptr<UnivariateEf> ef_of(const ExperimentConfig& cfg) {
  if (cfg.family == "ef-exponential") return std::make_unique<ExponentialEf>(cfg.params.lambda.at(0));
  return std::make_unique<GammaRateEf>(cfg.params.shape, cfg.params.lambda.at(0));
}

ExponentialPair::Coupling coupling_of(const std::string& name) {
  if (name == "independent") return ExponentialPair::Coupling::Independent;
  if (name == "scaled") return ExponentialPair::Coupling::Scaled;
  if (name == "shifted") return ExponentialPair::Coupling::Shifted;
  throw ConfigError("unknown coupling '" + name + "' (independent | scaled | shifted)");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ConfigError("malformed number '" + s + "' in result file");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

std::vector<std::string> data_lines(const std::string& csv, const char* header) {
  std::vector<std::string> lines;
  std::istringstream in(csv);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      if (line != header) throw ConfigError("unexpected header '" + line + "'");
      first = false;
      continue;
    }
    if (!line.empty()) lines.push_back(line);
  }
  if (first) throw ConfigError("empty result file");
  return lines;
}

// (coordinate label, flat index) pairs; Sigma reports the upper triangle.
std::vector<std::pair<std::string, std::size_t>> coordinates(const GradEstimate& e) {
  std::vector<std::pair<std::string, std::size_t>> out;
  if (e.target == GradTarget::Sigma) {
    for (std::size_t i = 0; i < e.rows; ++i)
      for (std::size_t j = i; j < e.cols; ++j)
        out.emplace_back(std::to_string(i) + "_" + std::to_string(j), i * e.cols + j);
  } else if (e.target == GradTarget::Lambda) {
    out.emplace_back(std::to_string(e.param_index), 0);
  } else {
    for (std::size_t i = 0; i < e.estimate.size(); ++i) out.emplace_back(std::to_string(i), i);
  }
  return out;
}

Vector oracle_for(const ExperimentConfig& cfg, const TestFunction& h, const GradEstimate& e) {
  const QuadratureSpec& q = cfg.quadrature;
  if (cfg.family == "gaussian") return gaussian_oracle_gradient(gaussian_of(cfg), h, e.target, q);
  if (is_gvm(cfg.family)) return gvm_oracle_gradient(gvm_of(cfg), mixing_for(cfg), h, e.target, q);
  if (cfg.family == "ef-bivariate") {
    const ExponentialPair m(cfg.params.lambda.at(0), coupling_of(cfg.params.coupling));
    return bivariate_oracle_gradient(m, e.param_index, h, q);
  }
  return ef_oracle_gradient(*ef_of(cfg), e.param_index, h, q);
}

}  // namespace

std::vector<std::string> estimators_for_family(const std::string& family) {
  if (family == "gaussian") return {"score", "bonnet", "stein-first-order", "price"};
  if (is_gvm(family)) {
    return {"gvm-mu",    "gvm-alpha",             "gvm-alpha-marginalized",
            "gvm-sigma", "gvm-sigma-first-order", "gvm-sigma-marginalized"};
  }
  if (family == "ef-exponential" || family == "ef-gamma") return {"implicit"};
  if (family == "ef-bivariate") return {"implicit-bivariate"};
  throw ConfigError("unknown family '" + family + "'");
}

TestFunction build_test_function(const TestFunctionSpec& spec, std::size_t dim) {
  if (spec.type == "quadratic") {
    Vector b = spec.b.empty() ? Vector(dim) : Vector(spec.b);
    return quadratic(Matrix::from_rows(spec.a), std::move(b), spec.c);
  }
  if (spec.type == "abs_sum") return abs_sum(dim);
  if (spec.type == "log_sum_exp") return log_sum_exp(Vector(spec.weights));
  if (spec.type == "constant") return constant_function(dim, spec.c);
  if (spec.type == "linear") return linear_function(Vector(spec.b));
  throw ConfigError("unknown test function type '" + spec.type + "'");
}

void ExperimentConfig::validate() const {
  const auto allowed = estimators_for_family(family);
  if (dim == 0) throw ConfigError("dim must be positive");
  if (n_samples < 2) throw ConfigError("n_samples must be at least 2");
  if (estimators.empty()) throw ConfigError("no estimators listed");
  if (oracle && dim > 2) throw ConfigError("the oracle supports dim <= 2");
  for (const auto& id : estimators) {
    if (std::find(allowed.begin(), allowed.end(), id) == allowed.end()) {
      throw ConfigError("estimator '" + id + "' is not available for family " + family);
    }
  }
  if (family == "gaussian" || is_gvm(family)) {
    if (params.mu.size() != dim) throw ConfigError("params.mu must have dim entries");
    if (params.sigma.size() != dim) throw ConfigError("params.sigma must be dim x dim");
    for (const auto& row : params.sigma) {
      if (row.size() != dim) throw ConfigError("params.sigma must be dim x dim");
    }
    if (!params.alpha.empty() && params.alpha.size() != dim) {
      throw ConfigError("params.alpha must have dim entries");
    }
  }
  if (family == "gaussian" && !params.alpha.empty()) {
    throw ConfigError("the gaussian family takes no alpha");
  }
  if (family == "student-t") {
    for (double a : params.alpha) {
      if (a != 0.0) throw ConfigError("NonzeroAlpha: student-t requires alpha = 0");
    }
  }
  if (family == "student-t" || family == "skew-gaussian" || family == "emg") {
    for (const auto& id : estimators) {
      const bool u_law = family != "student-t";
      if ((id == "gvm-alpha-marginalized" && !u_law) || (id == "gvm-sigma-marginalized" && u_law)) {
        throw ConfigError("MissingSampler: " + id + " has no weight decomposition for " + family);
      }
    }
  }
  if (family == "nig") {
    for (const auto& id : estimators) {
      if (id == "gvm-alpha-marginalized") {
        throw ConfigError("MissingSampler: gvm-alpha-marginalized has no decomposition for nig");
      }
    }
  }
  if (is_ef(family)) {
    const std::size_t want = family == "ef-bivariate" ? 2 : 1;
    if (dim != want) throw ConfigError(family + " requires dim = " + std::to_string(want));
    if (params.lambda.size() != 1) throw ConfigError(family + " takes a single lambda");
    if (family == "ef-bivariate") coupling_of(params.coupling);
  }
  const TestFunction h = build_test_function(this->h, dim);
  if (h.dim() != dim) throw ConfigError("test function dimension does not match dim");
  for (const auto& id : estimators) {
    if (needs_hessian(id) && !h.has_hessian()) {
      throw SmoothnessViolation(id + " requires a Hessian but " + h.name() + " is " +
                                to_string(h.smoothness()));
    }
  }
  quadrature.validate();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cannot parse config: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    reject_unknown(j,
                   {"family", "dim", "params", "h", "estimators", "n_samples", "seed", "oracle",
                    "symmetrize_sigma", "threads", "quadrature"},
                   "config");
    cfg.family = j.at("family").get<std::string>();
    cfg.dim = j.at("dim").get<std::size_t>();
    cfg.estimators = j.at("estimators").get<std::vector<std::string>>();
    cfg.n_samples = j.at("n_samples").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.oracle = get_or(j, "oracle", true);
    cfg.symmetrize_sigma = get_or(j, "symmetrize_sigma", true);
    cfg.threads = get_or(j, "threads", 1u);

    const json& p = j.at("params");
    reject_unknown(p, {"mu", "sigma", "alpha", "beta", "lambda", "shape", "coupling"}, "params");
    cfg.params.mu = get_or(p, "mu", std::vector<double>{});
    cfg.params.sigma = get_or(p, "sigma", std::vector<std::vector<double>>{});
    cfg.params.alpha = get_or(p, "alpha", std::vector<double>{});
    cfg.params.beta = get_or(p, "beta", 0.0);
    if (p.contains("lambda")) cfg.params.lambda = scalar_or_list(p.at("lambda"));
    cfg.params.shape = get_or(p, "shape", 0.0);
    cfg.params.coupling = get_or(p, "coupling", std::string("independent"));

    const json& h = j.at("h");
    reject_unknown(h, {"type", "A", "b", "c", "weights"}, "h");
    cfg.h.type = h.at("type").get<std::string>();
    cfg.h.a = get_or(h, "A", std::vector<std::vector<double>>{});
    cfg.h.b = get_or(h, "b", std::vector<double>{});
    cfg.h.c = get_or(h, "c", 0.0);
    cfg.h.weights = get_or(h, "weights", std::vector<double>{});

    if (j.contains("quadrature")) {
      const json& q = j.at("quadrature");
      reject_unknown(q, {"scheme", "points_per_axis", "mixing_points", "target_tol"}, "quadrature");
      const std::string scheme = get_or(q, "scheme", std::string("auto"));
      if (scheme == "auto") {
        cfg.quadrature.scheme = QuadratureScheme::Auto;
      } else if (scheme == "gauss-hermite-tensor") {
        cfg.quadrature.scheme = QuadratureScheme::GaussHermiteTensor;
      } else if (scheme == "mapped-gauss-legendre") {
        cfg.quadrature.scheme = QuadratureScheme::MappedGaussLegendre;
      } else {
        throw ConfigError("unknown quadrature scheme '" + scheme + "'");
      }
      cfg.quadrature.points_per_axis =
          get_or(q, "points_per_axis", cfg.quadrature.points_per_axis);
      cfg.quadrature.mixing_points = get_or(q, "mixing_points", cfg.quadrature.mixing_points);
      cfg.quadrature.target_tol = get_or(q, "target_tol", cfg.quadrature.target_tol);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<GradEstimate> run_estimators(const ExperimentConfig& cfg) {
  cfg.validate();
  const TestFunction h = build_test_function(cfg.h, cfg.dim);
  EstimatorConfig ec(cfg.n_samples, RandomStream(cfg.seed));
  ec.symmetrize_sigma = cfg.symmetrize_sigma;
  ec.threads = cfg.threads;

  std::vector<GradEstimate> out;
  out.reserve(cfg.estimators.size());
  if (cfg.family == "gaussian") {
    const GaussianParams p = gaussian_of(cfg);
    for (const auto& id : cfg.estimators) {
      if (id == "score") out.push_back(score_grad_mu(p, h, ec));
      else if (id == "bonnet") out.push_back(bonnet_grad_mu(p, h, ec));
      else if (id == "stein-first-order") out.push_back(stein_first_order_sigma(p, h, ec));
      else out.push_back(price_grad_sigma(p, h, ec));
    }
  } else if (is_gvm(cfg.family)) {
    const GvmParams p = gvm_of(cfg);
    const MixingSpec m = mixing_for(cfg);
    for (const auto& id : cfg.estimators) {
      if (id == "gvm-mu") {
        out.push_back(gvm_grad_mu(p, m, h, ec));
      } else if (id == "gvm-alpha") {
        out.push_back(gvm_grad_alpha(p, m, h, ec));
      } else if (id == "gvm-alpha-marginalized") {
        out.push_back(gvm_grad_alpha_marginalized(p, decomposition_for(p, m, WeightKind::U), h, ec));
      } else if (id == "gvm-sigma") {
        out.push_back(gvm_grad_sigma(p, m, h, ec, SigmaMode::Hessian));
      } else if (id == "gvm-sigma-first-order") {
        out.push_back(gvm_grad_sigma(p, m, h, ec, SigmaMode::FirstOrder));
      } else {
        out.push_back(gvm_grad_sigma_marginalized(p, decomposition_for(p, m, WeightKind::V), h, ec));
      }
    }
  } else if (cfg.family == "ef-bivariate") {
    const ExponentialPair m(cfg.params.lambda.at(0), coupling_of(cfg.params.coupling));
    for (std::size_t k = 0; k < cfg.estimators.size(); ++k) {
      out.push_back(implicit_grad_bivariate(m, 0, h, ec));
    }
  } else {
    const auto d = ef_of(cfg);
    for (std::size_t k = 0; k < cfg.estimators.size(); ++k) {
      out.push_back(implicit_grad_1d(*d, 0, h, ec));
    }
  }
  return out;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  const std::vector<GradEstimate> estimates = run_estimators(cfg);
  const TestFunction h = build_test_function(cfg.h, cfg.dim);
  std::map<std::string, Vector> oracle_cache;
  RunReport report;
  for (const GradEstimate& e : estimates) {
    const std::string target = to_string(e.target);
    const Vector* truth = nullptr;
    if (cfg.oracle) {
      const std::string key = target + "/" + std::to_string(e.param_index);
      auto it = oracle_cache.find(key);
      if (it == oracle_cache.end()) it = oracle_cache.emplace(key, oracle_for(cfg, h, e)).first;
      truth = &it->second;
    }
    for (const auto& [label, k] : coordinates(e)) {
      ResultRow row{e.estimator_id, target, label, e.estimate[k], e.std_error[k], {}, {}, {}};
      if (truth) {
        row.oracle = (*truth)[k];
        row.abs_error = std::abs(row.estimate - *row.oracle);
        row.z_score = *row.abs_error / std::max(row.std_error, kStdErrorFloor);
        if (!(*row.z_score <= kZThreshold)) report.passed = false;
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

VarianceReport compare_variance(const ExperimentConfig& cfg) {
  cfg.validate();
  std::map<std::string, std::size_t> per_target;
  const std::vector<GradEstimate> estimates = run_estimators(cfg);
  for (const auto& e : estimates) ++per_target[to_string(e.target)];
  const bool shared = std::any_of(per_target.begin(), per_target.end(),
                                  [](const auto& kv) { return kv.second >= 2; });
  if (!shared) throw ConfigError("compare-variance needs at least two estimators sharing a target");

  VarianceReport report;
  for (const GradEstimate& e : estimates) {
    for (const auto& [label, k] : coordinates(e)) {
      const double se = e.std_error[k];
      report.rows.push_back({e.estimator_id, to_string(e.target), label,
                             se * se * static_cast<double>(e.n_samples), se});
      if (e.estimator_id == "price" && cfg.h.type == "quadratic" && !(se <= kExactSeBound)) {
        report.passed = false;
      }
    }
  }
  return report;
}

std::string format_results(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kResultHeader) + "\n";
  for (const ResultRow& r : rows) {
    out += r.estimator_id + "," + r.target + "," + r.coord + "," + format_double(r.estimate) + "," +
           format_double(r.std_error) + "," + format_optional(r.oracle) + "," +
           format_optional(r.abs_error) + "," + format_optional(r.z_score) + "\n";
  }
  return out;
}

std::vector<ResultRow> parse_results(const std::string& csv) {
  std::vector<ResultRow> rows;
  for (const std::string& line : data_lines(csv, kResultHeader)) {
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw ConfigError("result row needs 8 fields: " + line);
    ResultRow r{f[0], f[1], f[2], parse_double(f[3]), parse_double(f[4]),
                parse_optional(f[5]), parse_optional(f[6]), parse_optional(f[7])};
    if (r.oracle.has_value() != r.z_score.has_value()) {
      throw ConfigError("z_score must be present exactly when oracle is: " + line);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string format_variance(const std::vector<VarianceRow>& rows) {
  std::string out = std::string(kVarianceHeader) + "\n";
  for (const VarianceRow& r : rows) {
    out += r.estimator_id + "," + r.target + "," + r.coord + "," + format_double(r.variance) +
           "," + format_double(r.std_error) + "\n";
  }
  return out;
}

std::vector<VarianceRow> parse_variance(const std::string& csv) {
  std::vector<VarianceRow> rows;
  for (const std::string& line : data_lines(csv, kVarianceHeader)) {
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw ConfigError("variance row needs 5 fields: " + line);
    rows.push_back({f[0], f[1], f[2], parse_double(f[3]), parse_double(f[4])});
  }
  return rows;
}

}  // namespace steinrep
