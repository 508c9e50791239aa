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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "steinrep/estimators.hpp"
#include "steinrep/oracle.hpp"

namespace steinrep {

struct TestFunctionSpec {
  std::string type;  // quadratic | abs_sum | log_sum_exp | constant | linear
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  double c = 0.0;
  std::vector<double> weights;
};

struct FamilyParams {
  std::vector<double> mu;
  std::vector<std::vector<double>> sigma;
  std::vector<double> alpha;
  double beta = 0.0;
  std::vector<double> lambda;
  double shape = 0.0;
  std::string coupling = "independent";
};

struct ExperimentConfig {
  std::string family;
  std::size_t dim = 0;
  FamilyParams params;
  TestFunctionSpec h;
  std::vector<std::string> estimators;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  bool oracle = true;
  bool symmetrize_sigma = true;
  unsigned threads = 1;
  QuadratureSpec quadrature;

  /// Checks family/estimator/test-function compatibility. Throws ConfigError,
  /// or SmoothnessViolation when an estimator needs a Hessian h lacks.
  void validate() const;
};

/// Parses a JSON document. Throws ConfigError on malformed input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Estimator ids understood by each family.
std::vector<std::string> estimators_for_family(const std::string& family);

TestFunction build_test_function(const TestFunctionSpec& spec, std::size_t dim);

struct ResultRow {
  std::string estimator_id;
  std::string target;
  std::string coord;
  double estimate = 0.0;
  double std_error = 0.0;
  std::optional<double> oracle;
  std::optional<double> abs_error;
  std::optional<double> z_score;

  bool operator==(const ResultRow&) const = default;
};

struct VarianceRow {
  std::string estimator_id;
  std::string target;
  std::string coord;
  double variance = 0.0;
  double std_error = 0.0;

  bool operator==(const VarianceRow&) const = default;
};

/// Threshold on z = |estimate - oracle| / max(std_error, kStdErrorFloor).
inline constexpr double kZThreshold = 4.0;
/// Standard errors below this are treated as the oracle's own accuracy.
inline constexpr double kStdErrorFloor = 1e-8;
/// Required std_error of Price terms on a quadratic.
inline constexpr double kExactSeBound = 1e-12;

struct RunReport {
  std::vector<ResultRow> rows;
  bool passed = true;
};

struct VarianceReport {
  std::vector<VarianceRow> rows;
  bool passed = true;  // false only when the exact-quadratic check fails
};

/// All estimators share the config's RandomStream, so draws are common.
std::vector<GradEstimate> run_estimators(const ExperimentConfig& cfg);
RunReport run_experiment(const ExperimentConfig& cfg);
/// Throws ConfigError unless at least two estimators share a target.
VarianceReport compare_variance(const ExperimentConfig& cfg);

std::string format_results(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results(const std::string& csv);
std::string format_variance(const std::vector<VarianceRow>& rows);
std::vector<VarianceRow> parse_variance(const std::string& csv);

inline constexpr const char* kResultHeader =
    "estimator_id,target,coord,estimate,std_error,oracle,abs_error,z_score";
inline constexpr const char* kVarianceHeader = "estimator_id,target,coord,variance,std_error";

}  // namespace steinrep
