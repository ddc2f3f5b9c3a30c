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

#include "gradissect/estimators/variance.hpp"

#include <algorithm>
#include <cmath>

#include "gradissect/core/error.hpp"

namespace gradissect::estimators {

double rho(double beta, std::int64_t t) {
  require(beta >= 0.0 && beta < 1.0, "rho: beta must lie in [0, 1)");
  require(t >= 0, "rho: t must be non-negative");
  const double bt = std::pow(beta, static_cast<double>(t + 1));
  return ((1.0 - beta) * (1.0 + bt)) / ((1.0 + beta) * (1.0 - bt));
}

RealVector ma_variance_estimate(const RealVector& m, const RealVector& v, double beta,
                                std::int64_t t) {
  check_same_dim(m, v, "ma_variance_estimate");
  require(t >= 0, "ma_variance_estimate: t must be non-negative");
  RealVector s(m.dim());
  if (t == 0) return s;
  const double scale = 1.0 / (1.0 - rho(beta, t));
  for (std::size_t i = 0; i < m.dim(); ++i) s[i] = std::max(0.0, scale * (v[i] - m[i] * m[i]));
  return s;
}

RealVector mb_variance_estimate(std::span<const RealVector> per_example_grads) {
  const std::size_t batch = per_example_grads.size();
  require(batch >= 2, "mb_variance_estimate: batch size must be at least 2");
  const RealVector& shift = per_example_grads.front();
  const std::size_t dim = shift.dim();
  // Shifted-data two-moment accumulation; identical inputs give exact zeros.
  RealVector s1(dim);
  RealVector s2(dim);
  for (const RealVector& g : per_example_grads) {
    check_same_dim(shift, g, "mb_variance_estimate");
    for (std::size_t i = 0; i < dim; ++i) {
      const double d = g[i] - shift[i];
      s1[i] += d;
      s2[i] += d * d;
    }
  }
  const double n = static_cast<double>(batch);
  RealVector out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double sample_var = (s2[i] - s1[i] * s1[i] / n) / (n - 1.0);
    out[i] = std::max(0.0, sample_var) / n;
  }
  return out;
}

RealVector mb_momentum_variance(MovingAverage& r_state, const RealVector& s_mb, double beta,
                                std::int64_t t) {
  require(r_state.decay() == beta * beta, "mb_momentum_variance: r_state must decay with beta^2");
  require(r_state.step() + 1 == t, "mb_momentum_variance: step index out of sync");
  const RealVector& r = r_state.update(s_mb);
  return rho(beta, t) * r;
}

}  // namespace gradissect::estimators
