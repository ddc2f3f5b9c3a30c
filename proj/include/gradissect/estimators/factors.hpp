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
#include <vector>

#include "gradissect/core/real_vector.hpp"

namespace gradissect::estimators {

/// Element-wise variance adaptation factors in [0, 1].
///
/// `no_update[i]` marks coordinates where both the squared mean and the
/// variance estimate are zero; the factor is 0 there and optimizers leave
/// the coordinate untouched.
struct AdaptationFactors {
  RealVector gamma;
  std::vector<bool> no_update;

  bool any_no_update() const;
};

/// gamma = m^2 / (m^2 + s).
AdaptationFactors factor_svag(const RealVector& m_sq, const RealVector& s_hat);

/// gamma = m^2 / (m^2 + rho(beta, t) s), for the momentum direction m.
AdaptationFactors factor_msvag(const RealVector& m_sq, const RealVector& s_hat, double beta,
                               std::int64_t t);

/// gamma = sqrt(m^2 / (m^2 + rho(beta, t) s)), applied to sign(m).
AdaptationFactors factor_adam_star(const RealVector& m_sq, const RealVector& s_hat, double beta,
                                   std::int64_t t);

/// Exact factors from a known mean and variance: p^2 / (p^2 + sigma^2).
/// Minimizes E||gamma * p_hat - p||^2.
AdaptationFactors factor_exact(const RealVector& mean, const RealVector& variance);

/// P[sign(X) = sign(mu)] for X ~ N(mu, sigma^2): 1/2 + 1/2 erf(|mu| / (sqrt(2) sigma)).
/// sigma = 0 gives 1 for mu != 0; mu = 0 gives 1/2 for sigma > 0; both zero
/// throws DomainError.
double success_probability(double mu, double sigma);

/// Optimal factor for a sign direction with success probability p: 2p - 1.
inline double optimal_sign_factor(double success_prob) { return 2.0 * success_prob - 1.0; }

/// Adam's update direction m / (sqrt(v) + eps). Coordinates with a zero
/// denominator are left at zero.
RealVector adam_direction(const RealVector& m, const RealVector& v, double eps);

/// The same direction written as sign times variance factor:
///   (1 + (v - m^2)/m^2)^{-1/2} * sign(m).
/// Requires m != 0 element-wise.
RealVector adam_sign_variance_direction(const RealVector& m, const RealVector& v);

struct FactorCurveRow {
  double eta;
  double erf_optimal;  // erf(1 / (sqrt(2) eta)), 1 at eta = 0
  double adam_style;   // (1 + eta^2)^{-1/2}
  double svag_style;   // (1 + eta^2)^{-1}
};

/// The three factor curves as functions of the relative standard deviation.
std::vector<FactorCurveRow> factor_curves(std::span<const double> eta_grid);

/// Evenly spaced grid lo, lo+step, ..., up to and including hi (within half a step).
std::vector<double> linear_grid(double lo, double hi, double step);

}  // namespace gradissect::estimators
