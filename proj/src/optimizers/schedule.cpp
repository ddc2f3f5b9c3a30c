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

#include "gradissect/optimizers/schedule.hpp"

#include <algorithm>

#include "gradissect/core/error.hpp"

namespace gradissect::optimizers {

StepSizeSchedule StepSizeSchedule::piecewise(std::vector<std::int64_t> milestones, double factor) {
  require(factor > 0.0, "StepSizeSchedule: factor must be positive");
  require(std::is_sorted(milestones.begin(), milestones.end()),
          "StepSizeSchedule: milestones must be sorted");
  StepSizeSchedule s;
  s.milestones_ = std::move(milestones);
  s.factor_ = factor;
  return s;
}

double StepSizeSchedule::multiplier(std::int64_t step) const {
  double m = 1.0;
  for (std::int64_t milestone : milestones_) {
    if (step < milestone) break;
    m *= factor_;
  }
  return m;
}

}  // namespace gradissect::optimizers
