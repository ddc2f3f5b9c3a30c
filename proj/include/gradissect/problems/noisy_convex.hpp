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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gradissect/core/real_vector.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/optimizers/problem.hpp"
#include "gradissect/optimizers/run_record.hpp"

namespace gradissect::problems {

/// sigma_i^2 = c_v * grad_i^2 + m_v / d, so sum_i sigma_i^2 = c_v ||grad||^2 + m_v.
struct NoiseModel {
  double c_v = 0.0;
  double m_v = 0.0;
};

struct OracleDraw {
  RealVector g;
  RealVector true_grad;
  RealVector true_var;
};

/// f(theta) = 1/2 theta^T A theta with A symmetric positive definite and
/// gradients corrupted by independent Gaussian noise per coordinate.
class NoisyConvexProblem final : public optimizers::StochasticProblem {
 public:
  NoisyConvexProblem(Eigen::MatrixXd a, NoiseModel noise);

  const Eigen::MatrixXd& A() const { return a_; }
  const NoiseModel& noise() const { return noise_; }
  double mu() const { return mu_; }
  double l_smooth() const { return l_; }

  std::size_t dim() const override { return static_cast<std::size_t>(a_.rows()); }
  double loss(const RealVector& theta) const override;
  std::optional<double> optimal_loss() const override { return 0.0; }
  optimizers::GradientSample sample(const RealVector& theta, RngStream& rng,
                                    const optimizers::SampleRequest& request) const override;
  std::string hash() const override;

  RealVector gradient(const RealVector& theta) const;
  RealVector variance(const RealVector& theta) const;

 private:
  Eigen::MatrixXd a_;
  NoiseModel noise_;
  double mu_;
  double l_;
};

OracleDraw noisy_convex_oracle(const NoisyConvexProblem& p, const RealVector& theta, RngStream& rng);

/// diag(linspace(1, 4, d)) with constant noise m_v.
NoisyConvexProblem make_default_noisy_convex(std::size_t d = 10, double m_v = 1.0);

struct Theorem1Config {
  std::int64_t steps = 10000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
                                      11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  /// Defaults to 3 * ones(d).
  std::optional<RealVector> theta0;
  double window_lo = 1e2;
  double window_hi = 1e4;
  double slope_threshold = -0.8;
};

struct Theorem1Result {
  std::vector<RunRecord> runs;
  /// Seed-mean and standard error of the suboptimality at steps 0..steps.
  std::vector<double> mean_suboptimality;
  std::vector<double> std_error;
  double slope = 0.0;
  /// Largest (mean[t+1] - mean[t]) / std_error[t+1] over t; <= 3 means no
  /// increase beyond three standard errors.
  double max_increase_in_se = 0.0;
};

/// Idealized SVAG at alpha = 1/L from theta0, one run per seed.
Theorem1Result theorem1_experiment(const NoisyConvexProblem& p, const Theorem1Config& config,
                                   std::size_t workers = 1);

/// Least-squares slope of log(values[t]) against log(t) over lo <= t <= hi.
/// Throws DomainError on non-positive values inside the window or fewer
/// than two points.
double fit_loglog_slope(std::span<const double> values, double lo, double hi);

}  // namespace gradissect::problems
