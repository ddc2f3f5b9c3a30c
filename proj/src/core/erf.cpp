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

#include "gradissect/core/erf.hpp"

#include <cmath>
#include <numbers>

#include "gradissect/core/error.hpp"

namespace gradissect {

namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
constexpr double kSeriesCutoff = 3.0;
// erfc(6) ~ 2e-17, below half an ulp of 1.
constexpr double kSaturation = 6.0;

double erf_series(double x) {
  const double two_x2 = 2.0 * x * x;
  double term = x;
  double total = x;
  for (int n = 0; n < 200; ++n) {
    term *= two_x2 / (2.0 * n + 3.0);
    total += term;
    if (term < total * 1e-17) break;
  }
  return kTwoOverSqrtPi * std::exp(-x * x) * total;
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...))))
double erfc_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = kTiny;
    c = x + a / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) * std::numbers::inv_sqrtpi / f;
}

double erf_nonnegative(double x) {
  if (x < kSeriesCutoff) return erf_series(x);
  if (x >= kSaturation) return 1.0;
  return 1.0 - erfc_continued_fraction(x);
}

}  // namespace

double erf(double x) {
  if (!std::isfinite(x)) {
    if (std::isnan(x)) throw ContractError("erf: NaN input");
    return x > 0 ? 1.0 : -1.0;
  }
  return x < 0.0 ? -erf_nonnegative(-x) : erf_nonnegative(x);
}

double normal_cdf(double z) { return 0.5 * (1.0 + erf(z * std::numbers::sqrt2 / 2.0)); }

}  // namespace gradissect
