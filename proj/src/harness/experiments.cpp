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

#include "gradissect/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "gradissect/core/error.hpp"
#include "gradissect/estimators/factors.hpp"
#include "gradissect/harness/selftest.hpp"
#include "gradissect/problems/lsq_classification.hpp"
#include "gradissect/problems/noisy_convex.hpp"
#include "gradissect/sqp/figure2.hpp"

namespace gradissect::harness {

namespace {

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

std::string nu_label(double nu) { return fmt("%g", nu); }

/// Final loss and final suboptimality keyed by (label, method, seed).
using FinalKey = std::tuple<std::string, std::string, std::uint64_t>;

std::map<FinalKey, std::pair<double, double>> final_values(std::span<const RunRecord> records) {
  std::map<FinalKey, std::pair<double, double>> out;
  for (const RunRecord& r : records) {
    if (r.rows.empty()) continue;
    const double subopt = r.aux_names.empty() ? r.last().loss : r.last().aux[0];
    out[{r.meta.experiment, r.meta.method, r.meta.seed}] = {r.last().loss, subopt};
  }
  return out;
}

std::vector<std::uint64_t> seeds_of(std::span<const RunRecord> records, const std::string& label) {
  std::vector<std::uint64_t> seeds;
  for (const RunRecord& r : records) {
    if (r.meta.experiment == label && std::find(seeds.begin(), seeds.end(), r.meta.seed) == seeds.end()) {
      seeds.push_back(r.meta.seed);
    }
  }
  return seeds;
}

std::vector<double> noise_levels_of(std::span<const RunRecord> records) {
  std::vector<double> levels;
  for (const RunRecord& r : records) {
    const std::size_t at = r.meta.experiment.rfind("/nu=");
    if (at == std::string::npos) continue;
    const double nu = std::stod(r.meta.experiment.substr(at + 4));
    if (std::find(levels.begin(), levels.end(), nu) == levels.end()) levels.push_back(nu);
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

/// Every seed of `label` has loss(first) < loss(second); nullopt if absent.
std::optional<std::string> ordering_violation(std::span<const RunRecord> records, const std::string& label,
                                              const std::string& first, const std::string& second,
                                              bool& applicable) {
  const auto finals = final_values(records);
  for (std::uint64_t seed : seeds_of(records, label)) {
    const auto a = finals.find({label, first, seed});
    const auto b = finals.find({label, second, seed});
    if (a == finals.end() || b == finals.end()) continue;
    applicable = true;
    if (!(a->second.first < b->second.first)) {
      return label + " seed " + std::to_string(seed) + ": " + first + " " + fmt("%.6g", a->second.first) +
             " >= " + second + " " + fmt("%.6g", b->second.first);
    }
  }
  return std::nullopt;
}

RunRecord thin(const RunRecord& r, std::int64_t every) {
  RunRecord out;
  out.meta = r.meta;
  out.aux_names = r.aux_names;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const RunRow& row = r.rows[i];
    if (row.step % every == 0 || i + 1 == r.rows.size()) out.rows.push_back(row);
  }
  return out;
}

}  // namespace

bool ExperimentOutput::ok() const {
  if (!failures.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ExperimentOutput experiment_custom(const ExperimentConfig& config, std::size_t workers) {
  GridResult grid = grid_run(config, workers);
  ExperimentOutput out;
  if (!grid.records.empty()) out.tables.push_back({"run", std::move(grid.records), true});
  out.failures = std::move(grid.failures);
  return out;
}

std::optional<double> figure2_mean_log_ratio(std::span<const RunRecord> records, const std::string& label) {
  const auto finals = final_values(records);
  double sum = 0.0;
  std::size_t n = 0;
  for (std::uint64_t seed : seeds_of(records, label)) {
    const auto a = finals.find({label, "sgd", seed});
    const auto b = finals.find({label, "ssd", seed});
    if (a == finals.end() || b == finals.end()) continue;
    constexpr double kTiny = 1e-300;
    sum += std::log10(std::max(a->second.second, kTiny)) - std::log10(std::max(b->second.second, kTiny));
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::vector<CheckResult> figure2_checks(std::span<const RunRecord> records, double rotated_band) {
  std::vector<CheckResult> checks;
  const std::vector<double> levels = noise_levels_of(records);

  {
    CheckResult c{"figure2 well-conditioned nu=0: sgd < ssd", true, "not applicable"};
    bool applicable = false;
    for (const char* orientation : {"axis", "rotated"}) {
      const std::string label = std::string("figure2/well/") + orientation + "/nu=0";
      if (auto v = ordering_violation(records, label, "sgd", "ssd", applicable)) {
        c.pass = false;
        c.detail = *v;
        break;
      }
    }
    if (applicable && c.pass) c.detail = "every seed";
    checks.push_back(c);
  }
  {
    CheckResult c{"figure2 ill-conditioned axis-aligned largest nu: ssd < sgd", true, "not applicable"};
    bool applicable = false;
    if (!levels.empty() && levels.back() > 0.0) {
      const std::string label = "figure2/ill/axis/nu=" + nu_label(levels.back());
      c.name = "figure2 ill-conditioned axis-aligned nu=" + nu_label(levels.back()) + ": ssd < sgd";
      if (auto v = ordering_violation(records, label, "ssd", "sgd", applicable)) {
        c.pass = false;
        c.detail = *v;
      }
    }
    if (applicable && c.pass) c.detail = "every seed";
    checks.push_back(c);
  }
  {
    CheckResult c{"figure2 ill-conditioned rotated: |mean log10(sgd/ssd)| <= " + fmt("%g", rotated_band), true,
                  "not applicable"};
    std::string detail;
    for (double nu : levels) {
      const std::string label = "figure2/ill/rotated/nu=" + nu_label(nu);
      const auto ratio = figure2_mean_log_ratio(records, label);
      if (!ratio) continue;
      detail += (detail.empty() ? "" : ", ") + ("nu=" + nu_label(nu) + ": " + fmt("%+.4f", *ratio));
      if (std::abs(*ratio) > rotated_band) c.pass = false;
    }
    if (!detail.empty()) c.detail = detail;
    checks.push_back(c);
  }
  return checks;
}

ExperimentOutput experiment_figure2(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  std::vector<RunRecord> records = sqp::figure2_experiment(figure2_config(config), workers);
  const std::string digest = config_digest(config);
  for (RunRecord& r : records) r.meta.config_digest = digest;
  ExperimentOutput out;
  out.checks = figure2_checks(records, config.figure2_rotated_band);
  out.tables.push_back({"figure2", std::move(records), true});
  return out;
}

ExperimentOutput experiment_factors(const ExperimentConfig& config) {
  config.validate();
  const auto grid = estimators::linear_grid(0.0, config.factors_eta_max, config.factors_eta_step);
  const auto rows = estimators::factor_curves(grid);
  const std::string digest = config_digest(config);
  std::vector<RunRecord> records;
  const std::pair<const char*, double estimators::FactorCurveRow::*> curves[] = {
      {"erf-optimal", &estimators::FactorCurveRow::erf_optimal},
      {"adam-style", &estimators::FactorCurveRow::adam_style},
      {"svag-style", &estimators::FactorCurveRow::svag_style},
  };
  CheckResult range{"factors lie in [0, 1]", true, "all grid points"};
  CheckResult monotone{"factors non-increasing in eta", true, "all curves"};
  for (const auto& [name, member] : curves) {
    RunRecord r;
    r.meta = {"factors", name, "", 0, digest};
    r.aux_names = {"eta"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = rows[i].*member;
      r.add_row(static_cast<std::int64_t>(i), v, {rows[i].eta});
      if (!(v >= 0.0 && v <= 1.0)) {
        range.pass = false;
        range.detail = std::string(name) + " at eta=" + fmt("%g", rows[i].eta);
      }
      if (i > 0 && v > rows[i - 1].*member) {
        monotone.pass = false;
        monotone.detail = std::string(name) + " increases at eta=" + fmt("%g", rows[i].eta);
      }
    }
    records.push_back(std::move(r));
  }
  ExperimentOutput out;
  out.checks = {range, monotone};
  out.tables.push_back({"factors", std::move(records), false});
  return out;
}

ExperimentOutput experiment_theorem1(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  require(config.problem.kind == ProblemKind::kNoisyConvex, "theorem1: problem kind must be noisy_convex");
  const auto problem = build_problem(config.problem);
  const auto& p = dynamic_cast<const problems::NoisyConvexProblem&>(*problem);
  problems::Theorem1Config tc;
  tc.steps = config.steps;
  tc.seeds = config.seeds;
  tc.window_lo = config.theorem1_window_lo;
  tc.window_hi = config.theorem1_window_hi;
  tc.slope_threshold = config.theorem1_slope_threshold;
  const problems::Theorem1Result res = problems::theorem1_experiment(p, tc, workers);

  const std::string digest = config_digest(config);
  std::vector<RunRecord> runs;
  for (const RunRecord& r : res.runs) {
    runs.push_back(thin(r, config.eval_every));
    runs.back().meta.config_digest = digest;
  }
  RunRecord summary;
  summary.meta = {"theorem1/mean", "idealized-svag", p.hash(), 0, digest};
  summary.aux_names = {"std_error"};
  for (std::size_t t = 0; t < res.mean_suboptimality.size(); ++t) {
    const auto step = static_cast<std::int64_t>(t);
    if (step % config.eval_every == 0 || t + 1 == res.mean_suboptimality.size()) {
      summary.add_row(step, res.mean_suboptimality[t], {res.std_error[t]});
    }
  }

  ExperimentOutput out;
  out.checks.push_back({"theorem1 tail slope <= " + fmt("%g", tc.slope_threshold),
                        res.slope <= tc.slope_threshold, "slope " + fmt("%.4f", res.slope)});
  out.checks.push_back({"theorem1 mean suboptimality never rises by more than 3 standard errors",
                        res.max_increase_in_se <= 3.0,
                        "largest rise " + fmt("%.3f", res.max_increase_in_se) + " standard errors"});
  out.tables.push_back({"theorem1", std::move(runs), true});
  out.tables.push_back({"theorem1_summary", {std::move(summary)}, true});
  return out;
}

ExperimentOutput experiment_wilson(const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t seed = config.seeds.front();
  RngStream rng_a(seed, fnv1a("wilson/searched"));
  RngStream rng_b(seed, fnv1a("wilson/searched-non-proportional"));
  const std::vector<std::pair<std::string, problems::LsqClassification>> instances = {
      {"all-ones-3", problems::make_wilson_all_ones(3)},
      {"searched-2x3", problems::make_wilson_searched(2, 3, rng_a)},
      {"searched-non-proportional-3x3", problems::make_wilson_searched(3, 3, rng_b, true)},
  };
  const std::string digest = config_digest(config);

  ExperimentOutput out;
  std::vector<RunRecord> records;
  CheckResult sign_prop{"wilson: sign descent and adam iterates proportional to sign(X^T y)", true, ""};
  CheckResult first_step{"wilson: m-svag first iterate equals -alpha grad R(0)", true, "every instance"};
  CheckResult non_prop{"wilson: m-svag first iterate not proportional on the non-proportional instance", true,
                       "not applicable"};
  double worst_angle = 0.0;
  for (const auto& [name, inst] : instances) {
    const RealVector reference = inst.xty();
    for (const auto& oc : config.optimizers) {
      const auto trajectory = problems::full_batch_trajectory(inst, oc, config.steps);
      RunRecord r;
      r.meta = {"wilson/" + name, std::string(optimizers::method_name(oc.method)), "", seed, digest};
      r.aux_names = {"angle"};
      for (std::size_t t = 0; t < trajectory.size(); ++t) {
        const RealVector one[] = {trajectory[t]};
        const double angle = problems::check_sign_proportionality(one, reference).max_angle;
        r.add_row(static_cast<std::int64_t>(t), inst.risk(trajectory[t]), {angle});
      }
      records.push_back(std::move(r));

      if (oc.method == optimizers::Method::kSsd || oc.method == optimizers::Method::kAdam) {
        const auto report = problems::check_sign_proportionality(trajectory, reference, 1e-10);
        worst_angle = std::max(worst_angle, report.max_angle);
        if (!report.proportional) {
          sign_prop.pass = false;
          sign_prop.detail = name + " " + std::string(optimizers::method_name(oc.method)) + ": angle " +
                             fmt("%.3g", report.max_angle);
        }
      }
      if (oc.method == optimizers::Method::kMSvag && trajectory.size() > 1) {
        const RealVector expected = (-oc.alpha) * problems::lsq_gradient(inst, RealVector::zeros(inst.dim()));
        if (!(trajectory[1] == expected)) {
          first_step.pass = false;
          first_step.detail = name + ": first iterate differs from -alpha grad R(0)";
        }
        if (name.find("non-proportional") != std::string::npos) {
          const RealVector one[] = {trajectory[1]};
          const double angle = problems::check_sign_proportionality(one, reference).max_angle;
          non_prop.pass = angle > 1e-6;
          non_prop.detail = "angle " + fmt("%.4g", angle);
        }
      }
    }
  }
  if (sign_prop.pass) sign_prop.detail = "largest angle " + fmt("%.3g", worst_angle);
  out.checks = {sign_prop, first_step, non_prop};
  out.tables.push_back({"wilson", std::move(records), false});
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config, std::size_t workers, bool full) {
  switch (config.experiment) {
    case ExperimentKind::kFigure2:
      return experiment_figure2(config, workers);
    case ExperimentKind::kFactors:
      return experiment_factors(config);
    case ExperimentKind::kTheorem1:
      return experiment_theorem1(config, workers);
    case ExperimentKind::kWilson:
      return experiment_wilson(config);
    case ExperimentKind::kCustomRun:
      return experiment_custom(config, workers);
    case ExperimentKind::kSelftest:
      return experiment_selftest(config, workers, full);
  }
  throw ContractError("run_experiment: unknown experiment");
}

}  // namespace gradissect::harness
