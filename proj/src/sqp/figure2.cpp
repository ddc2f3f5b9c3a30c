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

#include "gradissect/sqp/figure2.hpp"

#include <cstdio>

#include "gradissect/core/error.hpp"
#include "gradissect/core/parallel.hpp"
#include "gradissect/core/rng.hpp"

namespace gradissect::sqp {

std::string Figure2Cell::label() const {
  char nu_buf[32];
  std::snprintf(nu_buf, sizeof(nu_buf), "%g", nu);
  return "figure2/" + spectrum + "/" + orientation + "/nu=" + nu_buf;
}

std::vector<Figure2Cell> figure2_cells(const Figure2Config& config) {
  require(!config.seeds.empty(), "figure2: seeds must be non-empty");
  std::vector<Figure2Cell> cells;
  for (std::uint64_t seed : config.seeds) {
    for (const char* spectrum : {"well", "ill"}) {
      for (const char* orientation : {"axis", "rotated"}) {
        for (double nu : config.noise_levels) {
          for (const char* method : {"sgd", "ssd"}) {
            cells.push_back({spectrum, orientation, nu, method, seed});
          }
        }
      }
    }
  }
  return cells;
}

RunRecord run_figure2_cell(const Figure2Config& config, const Figure2Cell& cell) {
  require(config.steps >= 1 && config.eval_every >= 1, "figure2: steps and eval_every must be >= 1");
  require(cell.nu >= 0.0, "figure2: noise level must be non-negative");
  SpectrumSpec spec = cell.spectrum == "well" ? config.well_conditioned : config.ill_conditioned;
  spec.dim = config.dim;

  // Shared per seed: spectrum per spectrum kind, rotation per spectrum kind,
  // starting point for every cell.
  RngStream spectrum_rng(cell.seed, fnv1a("figure2/spectrum/" + cell.spectrum));
  RngStream rotation_rng(cell.seed, fnv1a("figure2/rotation/" + cell.spectrum));
  RngStream theta_rng(cell.seed, fnv1a("figure2/theta0"));
  RngStream run_rng(cell.seed, fnv1a(cell.label() + "/" + cell.method));

  const Eigen::VectorXd lambda = spec.sample(spectrum_rng);
  const Orientation orientation =
      cell.orientation == "axis" ? Orientation::kAxisAligned : Orientation::kRandomRotation;
  const QuadraticProblem problem =
      build_problem(lambda, orientation, cell.nu, rotation_rng, RealVector::zeros(config.dim));
  RealVector theta = gauss_sample(theta_rng, RealVector::zeros(config.dim), RealVector::ones(config.dim));

  const bool sgd = cell.method == "sgd";
  require(sgd || cell.method == "ssd", "figure2: method must be sgd or ssd");
  const StepDirection direction = sgd ? StepDirection::kSgd : StepDirection::kSsd;

  RunRecord record;
  record.meta.experiment = cell.label();
  record.meta.method = cell.method;
  record.meta.problem_hash = problem.hash();
  record.meta.seed = cell.seed;
  record.aux_names = {"suboptimality", "alpha"};
  const double floor = *problem.optimal_loss();
  auto add = [&](std::int64_t step, double alpha) {
    const double loss = problem.loss(theta);
    record.add_row(step, loss, {loss - floor, alpha});
  };

  add(0, 0.0);
  for (std::int64_t t = 1; t <= config.steps; ++t) {
    double alpha = 0.0;
    if (squared_norm(problem.gradient(theta)) > 0.0) {
      alpha = optimal_step(problem, theta, direction, config.mc_samples, run_rng, config.denominator);
    }
    const RealVector g = problem.sample_gradient(theta, run_rng);
    const RealVector dir = sgd ? g : sign(g);
    for (std::size_t i = 0; i < theta.dim(); ++i) theta[i] -= alpha * dir[i];
    if (t % config.eval_every == 0 || t == config.steps) add(t, alpha);
  }
  return record;
}

std::vector<RunRecord> figure2_experiment(const Figure2Config& config, std::size_t workers) {
  const std::vector<Figure2Cell> cells = figure2_cells(config);
  return parallel_map<RunRecord>(cells.size(), workers,
                                 [&](std::size_t i) { return run_figure2_cell(config, cells[i]); });
}

}  // namespace gradissect::sqp
