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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "gradissect/core/real_vector.hpp"
#include "gradissect/estimators/factors.hpp"
#include "gradissect/estimators/moving_average.hpp"
#include "gradissect/optimizers/problem.hpp"
#include "gradissect/optimizers/schedule.hpp"

namespace gradissect::optimizers {

/// The update rules.
///
///   kSgd           theta -= a g
///   kSsd           theta -= a sign(g)
///   kMSgd          theta -= a m                 (m: debiased EMA of g)
///   kMSsd          theta -= a sign(m~)          (m~: raw EMA)
///   kSvag          theta -= a gamma * g         gamma = m^2/(m^2 + s)
///   kMSvag         theta -= a gamma * m         gamma = m^2/(m^2 + rho s)
///   kMSvagMb       as kMSvag, variance from per-example gradients
///   kAdam          theta -= a m / (sqrt(v) + eps), separate beta1/beta2
///   kAdamStar      theta -= a gamma * sign(m)   gamma = sqrt(m^2/(m^2 + rho s))
///   kIdealizedSvag theta -= a gamma * g         gamma from the exact gradient
///                                                and variance; for analysis only,
///                                                needs a variance oracle.
enum class Method {
  kSgd,
  kSsd,
  kMSgd,
  kMSsd,
  kSvag,
  kMSvag,
  kMSvagMb,
  kAdam,
  kAdamStar,
  kIdealizedSvag,
};

inline constexpr std::array<Method, 10> kAllMethods = {
    Method::kSgd,  Method::kSsd,    Method::kMSgd, Method::kMSsd,     Method::kSvag,
    Method::kMSvag, Method::kMSvagMb, Method::kAdam, Method::kAdamStar, Method::kIdealizedSvag};

std::string_view method_name(Method method);
/// Inverse of method_name; throws ContractError on unknown names.
Method parse_method(std::string_view name);

struct OptimizerConfig {
  Method method = Method::kSgd;
  double alpha = 1e-2;
  StepSizeSchedule schedule;
  /// Shared moving-average constant for every method except kAdam.
  double beta = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Mini-batch size requested from problems; kMSvagMb needs at least 2.
  std::size_t batch_size = 1;
  /// Diagnostic switch: replace every variance estimate by zero.
  bool zero_variance_estimate = false;
};

/// One optimizer run: configuration, iterate and internal averages.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, RealVector theta0);

  /// Advances one step with stochastic gradient g and returns the new
  /// iterate. Throws ContractError when `aux` lacks what the method needs.
  const RealVector& step(const RealVector& g, const StepAux& aux = {});

  const RealVector& theta() const { return theta_; }
  /// Number of completed steps.
  std::int64_t steps_taken() const { return t_; }
  const OptimizerConfig& config() const { return config_; }
  /// What this method needs from a problem per step.
  SampleRequest sample_request() const;

  /// Factors used in the last step, for variance-adapted methods.
  const std::optional<estimators::AdaptationFactors>& last_factors() const { return factors_; }

 private:
  void apply(double alpha, const RealVector& direction, const estimators::AdaptationFactors* f);
  RealVector variance_estimate(const estimators::Moments& mv) const;

  OptimizerConfig config_;
  RealVector theta_;
  std::int64_t t_ = 0;
  std::optional<estimators::EmaState> ema_;
  std::optional<estimators::MovingAverage> first_;
  std::optional<estimators::MovingAverage> second_;
  std::optional<estimators::MovingAverage> r_ema_;
  std::optional<estimators::AdaptationFactors> factors_;
};

}  // namespace gradissect::optimizers
