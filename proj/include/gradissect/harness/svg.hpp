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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gradissect/optimizers/run_record.hpp"

namespace gradissect::harness {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with axes and a legend. With `log_y`, non-positive values are
/// dropped.
std::string svg_plot(std::span<const PlotSeries> series, const std::string& title, bool log_y);

/// One series per (experiment, method): the seed-mean loss over the steps
/// all seeds share.
std::vector<PlotSeries> seed_mean_series(std::span<const RunRecord> records, const std::string& experiment);

/// Writes one SVG per distinct experiment label to dir/<stem>_<label>.svg
/// and returns the paths.
std::vector<std::filesystem::path> emit_svg(std::span<const RunRecord> records, const std::filesystem::path& dir,
                                            const std::string& stem, bool log_y);

}  // namespace gradissect::harness
