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
#include <functional>
#include <string>
#include <vector>

#include "gradissect/harness/config.hpp"
#include "gradissect/harness/experiments.hpp"

namespace gradissect::harness {

struct SelftestContext {
  std::size_t workers = 1;
  /// Band for the rotated ill-conditioned figure2 comparison.
  double figure2_rotated_band = 1.0;
};

struct CheckOutcome {
  bool pass = false;
  /// Headline number of the check (an error, a slope, a count); finite.
  double value = 0.0;
  std::string detail;
};

struct SelfCheck {
  int criterion = 0;
  std::string name;
  /// Excluded from selftest unless --full is given.
  bool full_only = false;
  std::function<CheckOutcome(const SelftestContext&)> run;
};

/// Acceptance checks 1 to 12 in criterion order.
const std::vector<SelfCheck>& check_registry();

/// Runs the registry (full_only checks only when `full`). One CSV record per
/// check: experiment "selftest/criterion-<n>", method = check name, loss
/// column = headline value, aux "pass".
ExperimentOutput experiment_selftest(const ExperimentConfig& config, std::size_t workers, bool full);

/// Largest gap between the erf-optimal and adam-style factor curves on the
/// grid 0, 0.001, ..., 10, from an independent high-precision evaluation.
inline constexpr double kFactorGapErfAdam = 0.064418266265515418;

}  // namespace gradissect::harness
