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
#include <optional>
#include <string>
#include <vector>

#include "gradissect/core/real_vector.hpp"
#include "gradissect/core/rng.hpp"

namespace gradissect::optimizers {

/// Exact gradient and per-coordinate gradient variance at the current iterate.
struct VarianceOracle {
  RealVector true_grad;
  RealVector true_var;
};

/// Side information some update rules need in addition to the gradient.
struct StepAux {
  std::vector<RealVector> per_example_grads;
  std::optional<VarianceOracle> oracle;
};

/// What an optimizer asks a problem to produce per step.
struct SampleRequest {
  std::size_t batch_size = 1;
  bool per_example = false;
  bool oracle = false;
};

struct GradientSample {
  RealVector g;
  StepAux aux;
};

/// A stochastic objective the generic runner can optimize.
class StochasticProblem {
 public:
  virtual ~StochasticProblem() = default;

  virtual std::size_t dim() const = 0;
  virtual double loss(const RealVector& theta) const = 0;
  /// Minimum of loss(), when known in closed form.
  virtual std::optional<double> optimal_loss() const { return std::nullopt; }
  /// Mini-batch gradient at theta. Per-example gradients and the variance
  /// oracle are filled in when requested.
  virtual GradientSample sample(const RealVector& theta, RngStream& rng,
                                const SampleRequest& request) const = 0;
  /// Stable digest of the problem definition.
  virtual std::string hash() const = 0;
};

}  // namespace gradissect::optimizers
