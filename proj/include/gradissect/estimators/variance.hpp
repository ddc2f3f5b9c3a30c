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

#include <cstdint>
#include <span>

#include "gradissect/core/real_vector.hpp"
#include "gradissect/estimators/moving_average.hpp"

namespace gradissect::estimators {

/// Variance shrinkage of the debiased average relative to a single sample:
///   rho(beta, t) = (1-beta)(1+beta^{t+1}) / ((1+beta)(1-beta^{t+1})),
/// which equals sum_s c(beta, t, s)^2. rho(beta, 0) == 1 and
/// rho -> (1-beta)/(1+beta) as t grows.
double rho(double beta, std::int64_t t);

/// Bias-corrected moving-average variance estimate
///   s_t = (v - m^2) / (1 - rho(beta, t)),
/// clamped at zero element-wise. Returns zeros at t = 0, where the
/// correction is undefined.
RealVector ma_variance_estimate(const RealVector& m, const RealVector& v, double beta,
                                std::int64_t t);

/// Variance of a mini-batch mean from its per-example gradients: the
/// unbiased sample variance divided by the batch size. Needs at least two
/// examples.
RealVector mb_variance_estimate(std::span<const RealVector> per_example_grads);

/// Variance of the debiased momentum m_t from mini-batch estimates.
///
/// `r_state` must average with decay beta^2. Folds s_mb into it and returns
/// rho(beta, t) * r_t. `t` must match the index of this observation.
RealVector mb_momentum_variance(MovingAverage& r_state, const RealVector& s_mb, double beta,
                                std::int64_t t);

}  // namespace gradissect::estimators
