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

#include "gradissect/estimators/factors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gradissect/core/erf.hpp"
#include "gradissect/core/error.hpp"
#include "gradissect/estimators/variance.hpp"

namespace gradissect::estimators {

bool AdaptationFactors::any_no_update() const {
  return std::any_of(no_update.begin(), no_update.end(), [](bool b) { return b; });
}

namespace {

AdaptationFactors ratio_factors(const RealVector& m_sq, const RealVector& s_hat, double s_scale,
                                bool take_sqrt) {
  check_same_dim(m_sq, s_hat, "variance adaptation factors");
  AdaptationFactors out{RealVector(m_sq.dim()), std::vector<bool>(m_sq.dim(), false)};
  for (std::size_t i = 0; i < m_sq.dim(); ++i) {
    require(m_sq[i] >= 0.0 && s_hat[i] >= 0.0,
            "variance adaptation factors: inputs must be non-negative");
    const double denom = m_sq[i] + s_scale * s_hat[i];
    if (denom == 0.0) {
      out.no_update[i] = true;
      continue;
    }
    const double g = m_sq[i] / denom;
    out.gamma[i] = take_sqrt ? std::sqrt(g) : g;
  }
  return out;
}

}  // namespace

AdaptationFactors factor_svag(const RealVector& m_sq, const RealVector& s_hat) {
  return ratio_factors(m_sq, s_hat, 1.0, false);
}

AdaptationFactors factor_msvag(const RealVector& m_sq, const RealVector& s_hat, double beta,
                               std::int64_t t) {
  return ratio_factors(m_sq, s_hat, rho(beta, t), false);
}

AdaptationFactors factor_adam_star(const RealVector& m_sq, const RealVector& s_hat, double beta,
                                   std::int64_t t) {
  return ratio_factors(m_sq, s_hat, rho(beta, t), true);
}

AdaptationFactors factor_exact(const RealVector& mean, const RealVector& variance) {
  return ratio_factors(square(mean), variance, 1.0, false);
}

double success_probability(double mu, double sigma) {
  require(sigma >= 0.0, "success_probability: sigma must be non-negative");
  if (sigma == 0.0) {
    if (mu == 0.0) throw DomainError("success_probability: zero mean and zero variance");
    return 1.0;
  }
  return 0.5 + 0.5 * gradissect::erf(std::abs(mu) / (std::numbers::sqrt2 * sigma));
}

RealVector adam_direction(const RealVector& m, const RealVector& v, double eps) {
  check_same_dim(m, v, "adam_direction");
  RealVector out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double denom = std::sqrt(v[i]) + eps;
    if (denom != 0.0) out[i] = m[i] / denom;
  }
  return out;
}

RealVector adam_sign_variance_direction(const RealVector& m, const RealVector& v) {
  check_same_dim(m, v, "adam_sign_variance_direction");
  RealVector out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (m[i] == 0.0) throw DomainError("adam_sign_variance_direction: zero mean coordinate");
    const double m2 = m[i] * m[i];
    const double rel_var = (v[i] - m2) / m2;
    out[i] = std::sqrt(1.0 / (1.0 + rel_var)) * sign(m[i]);
  }
  return out;
}

std::vector<FactorCurveRow> factor_curves(std::span<const double> eta_grid) {
  std::vector<FactorCurveRow> rows;
  rows.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    require(eta >= 0.0, "factor_curves: eta must be non-negative");
    const double e2 = eta * eta;
    const double erf_opt = eta == 0.0 ? 1.0 : gradissect::erf(1.0 / (std::numbers::sqrt2 * eta));
    rows.push_back({eta, erf_opt, 1.0 / std::sqrt(1.0 + e2), 1.0 / (1.0 + e2)});
  }
  return rows;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
  require(step > 0.0 && hi >= lo, "linear_grid: need step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

}  // namespace gradissect::estimators
