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

#include "gradissect/core/rng.hpp"
#include "gradissect/optimizers/optimizer.hpp"
#include "gradissect/optimizers/problem.hpp"
#include "gradissect/optimizers/run_record.hpp"

namespace gradissect::optimizers {

/// Runs `steps` optimizer steps on `problem`, drawing gradients from `rng`.
///
/// The loss is recorded at step 0, every `eval_every` steps and at the final
/// step. When the problem knows its minimum, an aux column "suboptimality"
/// holds loss - minimum.
RunRecord run(Optimizer& opt, const StochasticProblem& problem, std::int64_t steps, RngStream& rng,
              std::int64_t eval_every = 1, const std::string& experiment = "run");

}  // namespace gradissect::optimizers
