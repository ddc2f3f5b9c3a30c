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
#include <span>
#include <string>
#include <vector>

#include "gradissect/harness/config.hpp"
#include "gradissect/harness/grid.hpp"
#include "gradissect/optimizers/run_record.hpp"

namespace gradissect::harness {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Records written together to <out>/<stem>.csv.
struct OutputTable {
  std::string stem;
  std::vector<RunRecord> records;
  bool log_y = false;
};

struct ExperimentOutput {
  std::vector<OutputTable> tables;
  std::vector<CheckResult> checks;
  std::vector<GridFailure> failures;

  bool ok() const;
};

ExperimentOutput experiment_custom(const ExperimentConfig& config, std::size_t workers);
ExperimentOutput experiment_figure2(const ExperimentConfig& config, std::size_t workers);
/// The three factor curves on [0, eta_max]. Each curve is one record:
/// step = grid index, loss column = factor value, aux "eta".
ExperimentOutput experiment_factors(const ExperimentConfig& config);
ExperimentOutput experiment_theorem1(const ExperimentConfig& config, std::size_t workers);
ExperimentOutput experiment_wilson(const ExperimentConfig& config);

/// Dispatches on config.experiment. `full` only affects selftest.
ExperimentOutput run_experiment(const ExperimentConfig& config, std::size_t workers, bool full);

/// Orderings on final losses of a figure2 run:
///  - well-conditioned, nu = 0: sgd below ssd for every seed and orientation;
///  - ill-conditioned, axis-aligned, largest nu: ssd below sgd for every seed;
///  - ill-conditioned, rotated: |seed-mean log10(sgd / ssd suboptimality)|
///    within `rotated_band` for every nu.
/// Checks whose cells are absent from `records` pass as not applicable.
std::vector<CheckResult> figure2_checks(std::span<const RunRecord> records, double rotated_band);

/// Seed-mean log10(final sgd suboptimality / final ssd suboptimality) for a
/// figure2 label such as "figure2/ill/rotated/nu=4"; nullopt if absent.
std::optional<double> figure2_mean_log_ratio(std::span<const RunRecord> records, const std::string& label);

}  // namespace gradissect::harness
