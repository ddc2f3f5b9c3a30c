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

#include <cstdint>
#include <string>
#include <vector>

#include "gradissect/optimizers/run_record.hpp"
#include "gradissect/sqp/analysis.hpp"
#include "gradissect/sqp/quadratic_problem.hpp"

namespace gradissect::sqp {

/// SGD versus sign descent with locally optimal step sizes on generated
/// quadratics: two spectra x two orientations x noise levels x two methods,
/// per seed.
struct Figure2Config {
  std::size_t dim = 100;
  SpectrumSpec well_conditioned = SpectrumSpec::uniform(100, 0.1, 1.1);
  SpectrumSpec ill_conditioned = SpectrumSpec::structured(100, 1e-6, 1.0, 0.9, 30.0, 60.0);
  std::vector<double> noise_levels = {0.0, 0.1, 4.0};
  std::int64_t steps = 500;
  std::int64_t eval_every = 1;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t mc_samples = 1000;
  SsdDenominator denominator = SsdDenominator::kMonteCarlo;
};

/// Identifies one run. `spectrum` is "well" or "ill", `orientation` is
/// "axis" or "rotated", `method` is "sgd" or "ssd".
struct Figure2Cell {
  std::string spectrum;
  std::string orientation;
  double nu = 0.0;
  std::string method;
  std::uint64_t seed = 0;

  /// Experiment label written to CSV, e.g. "figure2/ill/axis/nu=4".
  std::string label() const;
};

/// All cells of the experiment in output order.
std::vector<Figure2Cell> figure2_cells(const Figure2Config& config);

/// Runs one cell. Records carry aux columns "suboptimality" and "alpha"
/// (the step size taken to reach the row's iterate; 0 at step 0).
RunRecord run_figure2_cell(const Figure2Config& config, const Figure2Cell& cell);

/// Runs every cell on up to `workers` threads; output order is that of
/// figure2_cells regardless of scheduling.
std::vector<RunRecord> figure2_experiment(const Figure2Config& config, std::size_t workers = 1);

}  // namespace gradissect::sqp
