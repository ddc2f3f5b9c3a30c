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

#include "gradissect/core/real_vector.hpp"

namespace gradissect::estimators {

/// Bias-corrected exponential moving average of a vector-valued sequence.
///
/// Mathematically this tracks the raw average
///   x~_t = decay * x~_{t-1} + (1 - decay) * x_t,   x~_{-1} = 0,
/// and exposes the debiased value x~_t / (1 - decay^{t+1}). The debiased value
/// is stored directly and advanced with the equivalent convex update
///   x_t = (1 - w_t) x_{t-1} + w_t x_t,   w_t = (1 - decay) / (1 - decay^{t+1}),
/// so the first observation (w_0 = 1) and decay = 0 reproduce the input
/// bit-exactly. raw() recovers x~_t.
class MovingAverage {
 public:
  MovingAverage(std::size_t dim, double decay);

  /// Folds in one observation and returns the debiased average.
  const RealVector& update(const RealVector& x);

  const RealVector& debiased() const { return mean_; }
  RealVector raw() const;

  double decay() const { return decay_; }
  /// Index of the last observation; -1 before the first.
  std::int64_t step() const { return step_; }
  std::size_t dim() const { return mean_.dim(); }

  /// Weight w_t given to observation t.
  static double weight(double decay, std::int64_t t);

 private:
  double decay_;
  std::int64_t step_ = -1;
  RealVector mean_;
};

struct Moments {
  RealVector m;
  RealVector v;
};

/// Paired first/second moment averages sharing one decay constant beta.
class EmaState {
 public:
  EmaState(std::size_t dim, double beta);

  /// m~ <- beta m~ + (1-beta) g, v~ <- beta v~ + (1-beta) g^2; returns the
  /// debiased (m, v).
  Moments update(const RealVector& g);

  const RealVector& m() const { return first_.debiased(); }
  const RealVector& v() const { return second_.debiased(); }
  RealVector m_tilde() const { return first_.raw(); }
  RealVector v_tilde() const { return second_.raw(); }

  double beta() const { return first_.decay(); }
  std::int64_t step() const { return first_.step(); }
  std::size_t dim() const { return first_.dim(); }

 private:
  MovingAverage first_;
  MovingAverage second_;
};

/// Implicit weight c(beta, t, s) of observation s in the debiased average at
/// step t. Sums to one over s = 0..t.
double ema_weight(double beta, std::int64_t t, std::int64_t s);

}  // namespace gradissect::estimators
