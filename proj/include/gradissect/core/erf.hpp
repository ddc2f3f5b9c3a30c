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

namespace gradissect {

/// Error function, absolute error below 1e-12 on the whole real line.
///
/// |x| < 3 uses the all-positive series
///   erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n (2x^2)^n x / (1*3*...*(2n+1)),
/// which has no cancellation. Larger |x| uses the Laplace continued fraction
/// for erfc evaluated by the modified Lentz method. erf(-x) == -erf(x) holds
/// exactly.
double erf(double x);

/// Standard normal CDF built on erf.
double normal_cdf(double z);

}  // namespace gradissect
