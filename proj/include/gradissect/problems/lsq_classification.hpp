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
#include <vector>

#include <Eigen/Dense>

#include "gradissect/core/real_vector.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/optimizers/optimizer.hpp"

namespace gradissect::problems {

/// Binary least-squares classification, R(theta) = 1/(2n) ||X theta - y||^2
/// with labels in {-1, +1}.
///
/// A "Wilson instance" additionally has [X^T y]_i != 0 for every i and
/// X sign(X^T y) = c y for a scalar c, stored in `c`. On such instances
/// sign-based methods started at zero stay on the line through
/// sign(X^T y).
struct LsqClassification {
  Eigen::MatrixXd X;
  RealVector y;
  std::optional<double> c;

  std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(X.cols()); }

  double risk(const RealVector& theta) const;
  RealVector xty() const;
  /// Returns c if the Wilson condition holds exactly, nullopt otherwise.
  std::optional<double> wilson_constant() const;
};

/// Full-batch gradient (1/n) X^T (X theta - y).
RealVector lsq_gradient(const LsqClassification& p, const RealVector& theta);

/// Single row of ones with label +1; a Wilson instance with c = d.
LsqClassification make_wilson_all_ones(std::size_t d);

/// Brute-force search over n x d matrices with entries in {-1, 0, +1} and
/// label vectors in {-1, +1}^n, starting at an rng-chosen offset, for a
/// Wilson instance. With `require_non_proportional`, X^T y must also not be
/// parallel to sign(X^T y). Throws DomainError when the space is exhausted.
LsqClassification make_wilson_searched(std::size_t n, std::size_t d, RngStream& rng,
                                       bool require_non_proportional = false);

struct ProportionalityReport {
  bool proportional = true;
  /// Largest angle (radians) between a nonzero iterate and the line through
  /// sign(reference).
  double max_angle = 0.0;
};

/// Checks that every nonzero iterate is a scalar multiple of sign(reference)
/// up to `tolerance` radians.
ProportionalityReport check_sign_proportionality(std::span<const RealVector> trajectory,
                                                 const RealVector& reference,
                                                 double tolerance = 1e-10);

/// Iterates theta_0 = 0, theta_1, ..., theta_steps of a full-batch run.
std::vector<RealVector> full_batch_trajectory(const LsqClassification& p,
                                              const optimizers::OptimizerConfig& config,
                                              std::int64_t steps);

}  // namespace gradissect::problems
