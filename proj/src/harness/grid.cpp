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

#include "gradissect/harness/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "gradissect/core/error.hpp"
#include "gradissect/core/parallel.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/optimizers/run.hpp"

namespace gradissect::harness {

namespace {

constexpr std::string_view kAlphaTag = "/alpha=";

std::string method_label(const ExperimentConfig& config, std::size_t index) {
  const auto name = std::string(optimizers::method_name(config.optimizers[index].method));
  for (std::size_t k = 0; k < config.optimizers.size(); ++k) {
    if (k != index && config.optimizers[k].method == config.optimizers[index].method) {
      return name + "#" + std::to_string(index);
    }
  }
  return name;
}

std::string cell_experiment(const ExperimentConfig& config, double alpha) {
  return std::string(experiment_name(config.experiment)) + std::string(kAlphaTag) + alpha_label(alpha);
}

}  // namespace

std::string alpha_label(double alpha) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), alpha);
  if (ec != std::errc()) throw ContractError("alpha_label: conversion failed");
  return std::string(buf, ptr);
}

std::string GridCell::key(const ExperimentConfig& config) const {
  return method_label(config, optimizer_index) + std::string(kAlphaTag) + alpha_label(alpha) +
         "/seed=" + std::to_string(seed);
}

std::vector<GridCell> grid_cells(const ExperimentConfig& config) {
  std::vector<GridCell> cells;
  for (std::size_t k = 0; k < config.optimizers.size(); ++k) {
    const std::vector<double> alphas =
        config.alphas.empty() ? std::vector<double>{config.optimizers[k].alpha} : config.alphas;
    for (double alpha : alphas) {
      for (std::uint64_t seed : config.seeds) cells.push_back({k, alpha, seed});
    }
  }
  return cells;
}

GridResult grid_run(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  const auto problem = build_problem(config.problem);
  const RealVector theta0 = initial_point(config.problem);
  const std::string digest = config_digest(config);
  const std::vector<GridCell> cells = grid_cells(config);

  using Outcome = std::pair<std::optional<RunRecord>, std::string>;
  const auto outcomes = parallel_map<Outcome>(cells.size(), workers, [&](std::size_t i) -> Outcome {
    const GridCell& cell = cells[i];
    try {
      optimizers::OptimizerConfig oc = config.optimizers[cell.optimizer_index];
      oc.alpha = cell.alpha;
      optimizers::Optimizer opt(oc, theta0);
      RngStream rng(cell.seed, fnv1a(cell.key(config)));
      RunRecord r = optimizers::run(opt, *problem, config.steps, rng, config.eval_every,
                                    cell_experiment(config, cell.alpha));
      r.meta.method = method_label(config, cell.optimizer_index);
      r.meta.config_digest = digest;
      return {std::move(r), {}};
    } catch (const std::exception& e) {
      return {std::nullopt, e.what()};
    }
  });

  GridResult result;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (outcomes[i].first) {
      result.records.push_back(*outcomes[i].first);
    } else {
      result.failures.push_back({cells[i].key(config), outcomes[i].second});
    }
  }
  return result;
}

std::vector<double> default_alpha_ladder(int lo_exp, int hi_exp) {
  require(lo_exp <= hi_exp, "default_alpha_ladder: lo_exp must not exceed hi_exp");
  std::vector<double> ladder;
  for (int m = hi_exp; m >= lo_exp; --m) {
    for (const char* mant : {"6", "3", "1"}) {
      const std::string text = std::string(mant) + "e" + std::to_string(m);
      double value = 0.0;
      std::from_chars(text.data(), text.data() + text.size(), value);
      ladder.push_back(value);
    }
  }
  return ladder;
}

std::vector<BestAlpha> best_alphas(std::span<const RunRecord> records) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::vector<std::string> methods;
  std::map<std::string, std::vector<std::pair<double, Acc>>> acc;
  for (const RunRecord& r : records) {
    const std::size_t tag = r.meta.experiment.rfind(kAlphaTag);
    if (tag == std::string::npos || r.rows.empty()) continue;
    const std::string a = r.meta.experiment.substr(tag + kAlphaTag.size());
    double alpha = 0.0;
    const auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), alpha);
    if (ec != std::errc() || ptr != a.data() + a.size()) continue;
    if (!acc.contains(r.meta.method)) methods.push_back(r.meta.method);
    auto& list = acc[r.meta.method];
    auto it = std::find_if(list.begin(), list.end(), [&](const auto& p) { return p.first == alpha; });
    if (it == list.end()) {
      list.push_back({alpha, {}});
      it = list.end() - 1;
    }
    it->second.sum += r.last().loss;
    ++it->second.n;
  }
  std::vector<BestAlpha> out;
  for (const std::string& m : methods) {
    BestAlpha best{m, 0.0, std::numeric_limits<double>::infinity()};
    for (const auto& [alpha, a] : acc[m]) {
      const double mean = a.sum / static_cast<double>(a.n);
      if (mean < best.mean_final_loss) best = {m, alpha, mean};
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace gradissect::harness
