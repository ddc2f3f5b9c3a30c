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

#include "gradissect/optimizers/run.hpp"

#include <cmath>
#include <string>

#include "gradissect/core/error.hpp"

namespace gradissect {

void RunRecord::add_row(std::int64_t step, double loss, std::vector<double> aux) {
  if (!rows.empty() && step <= rows.back().step) {
    throw ContractError("RunRecord: steps must be strictly increasing");
  }
  if (!std::isfinite(loss)) throw DomainError("RunRecord: non-finite loss at step " + std::to_string(step));
  if (aux.size() != aux_names.size()) throw ContractError("RunRecord: aux arity mismatch");
  rows.push_back({step, loss, std::move(aux)});
}

}  // namespace gradissect

namespace gradissect::optimizers {

RunRecord run(Optimizer& opt, const StochasticProblem& problem, std::int64_t steps, RngStream& rng,
              std::int64_t eval_every, const std::string& experiment) {
  require(steps >= 1, "run: steps must be at least 1");
  require(eval_every >= 1, "run: eval_every must be at least 1");
  if (opt.theta().dim() != problem.dim()) throw DimensionError("run: optimizer/problem dimension mismatch");

  RunRecord record;
  record.meta.experiment = experiment;
  record.meta.method = std::string(method_name(opt.config().method));
  record.meta.problem_hash = problem.hash();
  record.meta.seed = rng.seed();

  const auto optimum = problem.optimal_loss();
  if (optimum) record.aux_names = {"suboptimality"};
  auto record_row = [&](std::int64_t step) {
    const double loss = problem.loss(opt.theta());
    if (optimum) {
      record.add_row(step, loss, {loss - *optimum});
    } else {
      record.add_row(step, loss);
    }
  };

  const SampleRequest request = opt.sample_request();
  record_row(0);
  for (std::int64_t t = 1; t <= steps; ++t) {
    const GradientSample sample = problem.sample(opt.theta(), rng, request);
    opt.step(sample.g, sample.aux);
    if (t % eval_every == 0 || t == steps) record_row(t);
  }
  return record;
}

}  // namespace gradissect::optimizers
