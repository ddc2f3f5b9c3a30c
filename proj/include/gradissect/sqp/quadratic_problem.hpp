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
#include <string>

#include <Eigen/Dense>

#include "gradissect/core/real_vector.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/optimizers/problem.hpp"

namespace gradissect::sqp {

enum class SpectrumKind { kUniform, kStructured };

/// Eigenvalue distribution for generated problems.
///
/// kUniform draws every eigenvalue from [lo, hi]. kStructured draws exactly
/// floor(bulk_frac * dim) values from [bulk_lo, bulk_hi] and the rest from
/// [tail_lo, tail_hi].
struct SpectrumSpec {
  SpectrumKind kind = SpectrumKind::kUniform;
  std::size_t dim = 100;
  double lo = 0.1;
  double hi = 1.1;
  double bulk_lo = 1e-6;
  double bulk_hi = 1.0;
  double bulk_frac = 0.9;
  double tail_lo = 30.0;
  double tail_hi = 60.0;

  static SpectrumSpec uniform(std::size_t dim, double lo, double hi);
  static SpectrumSpec structured(std::size_t dim, double bulk_lo, double bulk_hi, double bulk_frac,
                                 double tail_lo, double tail_hi);

  /// Throws ContractError on non-positive or inverted bounds.
  void validate() const;
  Eigen::VectorXd sample(RngStream& rng) const;
};

enum class Orientation { kAxisAligned, kRandomRotation };

/// Stochastic quadratic problem
///   l(theta; x) = 1/2 (theta - x)^T Q (theta - x),   x ~ N(x*, nu^2 I),
/// with expected loss 1/2 (theta - x*)^T Q (theta - x*) + nu^2/2 tr(Q) and
/// stochastic gradients Q(theta - x) ~ N(Q(theta - x*), nu^2 Q Q).
/// Immutable after construction.
class QuadraticProblem final : public optimizers::StochasticProblem {
 public:
  /// Q = V diag(eigenvalues) V^T. V must be orthonormal.
  QuadraticProblem(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors, RealVector x_star,
                   double nu);

  /// Eigendecomposes a symmetric positive-definite Q.
  static QuadraticProblem from_matrix(const Eigen::MatrixXd& q, RealVector x_star, double nu);

  const Eigen::MatrixXd& Q() const { return q_; }
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  const Eigen::MatrixXd& eigenvectors() const { return v_; }
  const RealVector& x_star() const { return x_star_; }
  double nu() const { return nu_; }
  bool is_diagonal() const { return diagonal_; }

  double trace() const { return trace_; }
  double sum_cubed_eigenvalues() const { return sum_cubed_; }
  /// sqrt((QQ)_ii): per-coordinate gradient stddev divided by nu.
  const RealVector& gradient_scale() const { return grad_scale_; }
  /// nu * sqrt((QQ)_ii).
  RealVector gradient_stddev() const { return nu_ * grad_scale_; }

  /// Exact gradient Q(theta - x*).
  RealVector gradient(const RealVector& theta) const;
  /// One stochastic gradient Q(theta - x), x ~ N(x*, nu^2 I).
  RealVector sample_gradient(const RealVector& theta, RngStream& rng) const;
  /// `count` stochastic gradients as columns, drawn as grad + nu Q xi.
  Eigen::MatrixXd sample_gradients(const RealVector& theta, RngStream& rng, std::size_t count) const;

  std::size_t dim() const override { return x_star_.dim(); }
  double loss(const RealVector& theta) const override;
  std::optional<double> optimal_loss() const override { return 0.5 * nu_ * nu_ * trace_; }
  optimizers::GradientSample sample(const RealVector& theta, RngStream& rng,
                                    const optimizers::SampleRequest& request) const override;
  std::string hash() const override;

 private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd v_;
  RealVector x_star_;
  double nu_;
  bool diagonal_ = false;
  double trace_ = 0.0;
  double sum_cubed_ = 0.0;
  RealVector grad_scale_;
};

/// Haar-distributed rotation (orthonormal, det +1): QR of a Gaussian matrix
/// with the R-diagonal signs folded into Q, one column flipped if det = -1.
Eigen::MatrixXd haar_rotation(std::size_t dim, RngStream& rng);

/// Builds a problem with a sampled spectrum. The optimum defaults to the
/// origin.
QuadraticProblem build_problem(const SpectrumSpec& spec, Orientation orientation, double nu,
                               RngStream& rng);
QuadraticProblem build_problem(const Eigen::VectorXd& eigenvalues, Orientation orientation,
                               double nu, RngStream& rng, RealVector x_star);

}  // namespace gradissect::sqp
