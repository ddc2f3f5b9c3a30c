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

#include <Eigen/Dense>

#include "gradissect/core/real_vector.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/sqp/quadratic_problem.hpp"

namespace gradissect::sqp {

/// Probability that each coordinate of a stochastic gradient has the sign of
/// the true gradient. Values lie in [1/2, 1].
RealVector success_probabilities(const QuadraticProblem& p, const RealVector& theta);

/// Expected one-step improvement of SGD at its optimal step size:
///   1/2 (grad^T grad)^2 / (grad^T Q grad + nu^2 sum lambda^3).
/// Throws DomainError at a zero gradient.
double improvement_sgd(const QuadraticProblem& p, const RealVector& theta);

/// Lower bound on the expected one-step improvement of sign descent:
///   1/2 (sum (2 rho_i - 1) |grad_i|)^2 / sum lambda_i * p_diag(Q).
double improvement_ssd_bound(const QuadraticProblem& p, const RealVector& theta);

/// Fraction of absolute mass on the diagonal, sum |q_ii| / sum |q_ij|.
double p_diag(const Eigen::MatrixXd& q);

/// sum lambda_k / sum lambda_k ||v_k||_1^2. A lower bound on p_diag(Q) that
/// is tight when one eigenvalue dominates; its average under random
/// rotations is close to pi / (2d).
double p_diag_eigenvector_bound(const Eigen::VectorXd& eigenvalues,
                                const Eigen::MatrixXd& eigenvectors);

enum class StepDirection { kSgd, kSsd };

/// How E[s^T Q s] is obtained for the sign direction.
enum class SsdDenominator {
  /// Exact when the signs are deterministic (nu = 0) or Q is diagonal,
  /// Monte-Carlo over sign vectors otherwise.
  kMonteCarlo,
  /// The upper bound sum |q_ij|.
  kAbsoluteBound,
};

/// Monte-Carlo (or exact, see SsdDenominator) value of E[s^T Q s] for
/// s = sign(g).
double expected_sign_quadratic_form(const QuadraticProblem& p, const RealVector& theta,
                                    std::size_t mc_samples, RngStream& rng,
                                    SsdDenominator mode = SsdDenominator::kMonteCarlo);

/// Step size alpha* minimizing E[L(theta - alpha z)] for z = g (sgd) or
/// z = sign(g) (ssd). The sgd value is closed-form; the ssd numerator is
/// exact and its denominator follows `mode`.
double optimal_step(const QuadraticProblem& p, const RealVector& theta, StepDirection direction,
                    std::size_t mc_samples, RngStream& rng,
                    SsdDenominator mode = SsdDenominator::kMonteCarlo);

}  // namespace gradissect::sqp
