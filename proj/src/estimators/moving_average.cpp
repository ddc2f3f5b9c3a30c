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

#include "gradissect/estimators/moving_average.hpp"

#include <cmath>

#include "gradissect/core/error.hpp"

namespace gradissect::estimators {

MovingAverage::MovingAverage(std::size_t dim, double decay) : decay_(decay), mean_(dim) {
  require(decay >= 0.0 && decay < 1.0, "MovingAverage: decay must lie in [0, 1)");
}

double MovingAverage::weight(double decay, std::int64_t t) {
  return (1.0 - decay) / (1.0 - std::pow(decay, static_cast<double>(t + 1)));
}

const RealVector& MovingAverage::update(const RealVector& x) {
  check_same_dim(mean_, x, "MovingAverage::update");
  ++step_;
  const double w = weight(decay_, step_);
  const double keep = 1.0 - w;
  for (std::size_t i = 0; i < mean_.dim(); ++i) mean_[i] = keep * mean_[i] + w * x[i];
  return mean_;
}

RealVector MovingAverage::raw() const {
  if (step_ < 0) return RealVector::zeros(dim());
  return (1.0 - std::pow(decay_, static_cast<double>(step_ + 1))) * mean_;
}

EmaState::EmaState(std::size_t dim, double beta) : first_(dim, beta), second_(dim, beta) {}

Moments EmaState::update(const RealVector& g) {
  check_same_dim(first_.debiased(), g, "EmaState::update");
  first_.update(g);
  second_.update(square(g));
  return {first_.debiased(), second_.debiased()};
}

double ema_weight(double beta, std::int64_t t, std::int64_t s) {
  require(t >= 0 && s >= 0 && s <= t, "ema_weight: need 0 <= s <= t");
  return (1.0 - beta) / (1.0 - std::pow(beta, static_cast<double>(t + 1))) *
         std::pow(beta, static_cast<double>(t - s));
}

}  // namespace gradissect::estimators
