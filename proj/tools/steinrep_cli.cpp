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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "steinrep/errors.hpp"
#include "steinrep/experiment.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitStatFail = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw steinrep::ConfigError("cannot write " + path);
  out << text;
}

steinrep::ExperimentConfig load(const std::string& path, const std::optional<std::int64_t>& seed) {
  steinrep::ExperimentConfig cfg = steinrep::load_config(path);
  if (seed) cfg.seed = static_cast<std::uint64_t>(*seed);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo gradient identities checked against quadrature oracles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::int64_t> seed;

  auto* run = app.add_subcommand("run", "Run estimators and compare them with the oracle");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--out", out_path, "Result CSV path (default stdout)");
  run->add_option("--seed", seed, "Override the config seed");

  auto* cmp = app.add_subcommand("compare-variance", "Report per-sample estimator variances");
  cmp->add_option("config", config_path, "JSON experiment config")->required();
  cmp->add_option("--out", out_path, "Variance CSV path (default stdout)");
  cmp->add_option("--seed", seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    const steinrep::ExperimentConfig cfg = load(config_path, seed);
    if (run->parsed()) {
      const steinrep::RunReport report = steinrep::run_experiment(cfg);
      emit(steinrep::format_results(report.rows), out_path);
      if (!report.passed) {
        std::cerr << "steinrep: at least one z-score exceeds " << steinrep::kZThreshold << "\n";
        return kExitStatFail;
      }
      return kExitPass;
    }
    const steinrep::VarianceReport report = steinrep::compare_variance(cfg);
    emit(steinrep::format_variance(report.rows), out_path);
    if (!report.passed) {
      std::cerr << "steinrep: price on a quadratic reported a nonzero standard error\n";
      return kExitStatFail;
    }
    return kExitPass;
  } catch (const steinrep::Error& e) {
    std::cerr << "steinrep: " << e.what() << "\n";
    return kExitUsage;
  }
}
