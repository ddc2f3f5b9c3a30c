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
#include <vector>

namespace gradissect::optimizers {

/// Step-size multiplier as a function of the step index. Either constant, or
/// multiplied by `factor` at each milestone (step >= milestone).
class StepSizeSchedule {
 public:
  StepSizeSchedule() = default;

  static StepSizeSchedule constant() { return {}; }
  static StepSizeSchedule piecewise(std::vector<std::int64_t> milestones, double factor);

  double multiplier(std::int64_t step) const;

  bool is_constant() const { return milestones_.empty(); }
  const std::vector<std::int64_t>& milestones() const { return milestones_; }
  double factor() const { return factor_; }

 private:
  std::vector<std::int64_t> milestones_;
  double factor_ = 1.0;
};

}  // namespace gradissect::optimizers
