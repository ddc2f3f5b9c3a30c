// Copyright 2026 The gradissect Authors
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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gradissect/optimizers/optimizer.hpp"
#include "gradissect/optimizers/problem.hpp"
#include "gradissect/sqp/analysis.hpp"
#include "gradissect/sqp/figure2.hpp"
#include "gradissect/sqp/quadratic_problem.hpp"

namespace gradissect::harness {

enum class ExperimentKind { kFigure2, kFactors, kTheorem1, kWilson, kCustomRun, kSelftest };

std::string_view experiment_name(ExperimentKind kind);
/// Accepts "figure2", "factors", "theorem1", "wilson", "run", "selftest".
ExperimentKind parse_experiment(std::string_view name);

enum class ProblemKind { kSqp, kNoisyConvex };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kSqp;
  // sqp
  sqp::SpectrumSpec spectrum = sqp::SpectrumSpec::uniform(10, 0.1, 1.1);
  sqp::Orientation orientation = sqp::Orientation::kAxisAligned;
  double nu = 0.1;
  /// Seeds the spectrum and rotation draws.
  std::uint64_t seed = 0;
  // noisy_convex: A = diag(linspace(1, 4, dim))
  std::size_t dim = 10;
  double m_v = 1.0;
  double c_v = 0.0;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kCustomRun;
  ProblemSpec problem;
  std::vector<optimizers::OptimizerConfig> optimizers = {optimizers::OptimizerConfig{}};
  /// Empty: each optimizer runs at its own alpha.
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds = {1};
  std::int64_t steps = 100;
  std::int64_t eval_every = 1;
  std::string out = "out";
  std::size_t mc_samples = 1000;
  sqp::SsdDenominator denominator = sqp::SsdDenominator::kMonteCarlo;

  std::size_t figure2_dim = 100;
  std::vector<double> figure2_noise_levels = {0.0, 0.1, 4.0};
  /// Largest |mean_seed log10(final SGD suboptimality / final SSD
  /// suboptimality)| allowed on the ill-conditioned rotated problems.
  double figure2_rotated_band = 1.0;

  double theorem1_window_lo = 1e2;
  double theorem1_window_hi = 1e4;
  double theorem1_slope_threshold = -0.8;

  double factors_eta_max = 4.0;
  double factors_eta_step = 0.01;

  /// Throws ContractError on violated invariants.
  void validate() const;
};

/// Defaults for an experiment kind (protocol steps, seeds and so on).
ExperimentConfig default_config(ExperimentKind kind);

/// Starts from default_config of the "experiment" key (or `fallback`) and
/// applies every present key. Unknown keys throw ContractError.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentKind fallback);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Hex FNV-1a digest of the canonical JSON form, excluding "out".
std::string config_digest(const ExperimentConfig& config);

sqp::Figure2Config figure2_config(const ExperimentConfig& config);

std::unique_ptr<optimizers::StochasticProblem> build_problem(const ProblemSpec& spec);

/// theta_0 ~ N(0, I) from the problem seed for sqp, 3 * ones for noisy_convex.
RealVector initial_point(const ProblemSpec& spec);

}  // namespace gradissect::harness
