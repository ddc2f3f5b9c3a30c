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
#include <span>
#include <string>
#include <vector>

#include "gradissect/harness/config.hpp"
#include "gradissect/optimizers/run_record.hpp"

namespace gradissect::harness {

struct GridCell {
  std::size_t optimizer_index = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;

  /// e.g. "m-svag/alpha=0.003/seed=2"; hashed into the cell's stream id.
  std::string key(const ExperimentConfig& config) const;
};

struct GridFailure {
  std::string cell_key;
  std::string message;
};

struct GridResult {
  std::vector<RunRecord> records;
  std::vector<GridFailure> failures;
};

/// Shortest decimal form of alpha used in labels.
std::string alpha_label(double alpha);

/// Cells in output order: optimizers, then alphas, then seeds.
std::vector<GridCell> grid_cells(const ExperimentConfig& config);

/// Runs every cell on the configured problem. A throwing cell is recorded
/// as a failure and the others continue. Output order is that of
/// grid_cells for any worker count.
GridResult grid_run(const ExperimentConfig& config, std::size_t workers = 1);

/// {1, 3, 6} x 10^m for m in [lo_exp, hi_exp], descending.
std::vector<double> default_alpha_ladder(int lo_exp, int hi_exp);

struct BestAlpha {
  std::string method;
  double alpha = 0.0;
  double mean_final_loss = 0.0;
};

/// Per method, the alpha whose seed-mean final loss is smallest. Reads the
/// alpha from the record's experiment label ("<experiment>/alpha=<a>").
std::vector<BestAlpha> best_alphas(std::span<const RunRecord> records);

}  // namespace gradissect::harness
