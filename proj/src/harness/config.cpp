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

#include "gradissect/harness/config.hpp"

#include <algorithm>
#include <cstdio>
#include <initializer_list>

#include "gradissect/core/error.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/problems/noisy_convex.hpp"

namespace gradissect::harness {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kExperimentNames[] = {
    {ExperimentKind::kFigure2, "figure2"},   {ExperimentKind::kFactors, "factors"},
    {ExperimentKind::kTheorem1, "theorem1"}, {ExperimentKind::kWilson, "wilson"},
    {ExperimentKind::kCustomRun, "run"},     {ExperimentKind::kSelftest, "selftest"},
};

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw ContractError(where + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ContractError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t last) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
  return seeds;
}

optimizers::OptimizerConfig with_method(optimizers::Method method) {
  optimizers::OptimizerConfig o;
  o.method = method;
  return o;
}

std::string orientation_name(sqp::Orientation o) {
  return o == sqp::Orientation::kAxisAligned ? "axis" : "rotated";
}

sqp::Orientation parse_orientation(const std::string& s) {
  if (s == "axis") return sqp::Orientation::kAxisAligned;
  if (s == "rotated") return sqp::Orientation::kRandomRotation;
  throw ContractError("config: orientation must be 'axis' or 'rotated', got '" + s + "'");
}

std::string denominator_name(sqp::SsdDenominator d) {
  return d == sqp::SsdDenominator::kMonteCarlo ? "monte_carlo" : "absolute_bound";
}

sqp::SsdDenominator parse_denominator(const std::string& s) {
  if (s == "monte_carlo") return sqp::SsdDenominator::kMonteCarlo;
  if (s == "absolute_bound") return sqp::SsdDenominator::kAbsoluteBound;
  throw ContractError("config: denominator must be 'monte_carlo' or 'absolute_bound', got '" + s + "'");
}

json spectrum_to_json(const sqp::SpectrumSpec& s) {
  if (s.kind == sqp::SpectrumKind::kUniform) {
    return {{"kind", "uniform"}, {"dim", s.dim}, {"lo", s.lo}, {"hi", s.hi}};
  }
  return {{"kind", "structured"}, {"dim", s.dim},         {"bulk_lo", s.bulk_lo},
          {"bulk_hi", s.bulk_hi}, {"bulk_frac", s.bulk_frac}, {"tail_lo", s.tail_lo},
          {"tail_hi", s.tail_hi}};
}

sqp::SpectrumSpec spectrum_from_json(const json& j, sqp::SpectrumSpec s) {
  check_keys(j, {"kind", "dim", "lo", "hi", "bulk_lo", "bulk_hi", "bulk_frac", "tail_lo", "tail_hi"},
             "config.problem.spectrum");
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform") {
      s.kind = sqp::SpectrumKind::kUniform;
    } else if (kind == "structured") {
      s.kind = sqp::SpectrumKind::kStructured;
    } else {
      throw ContractError("config: spectrum kind must be 'uniform' or 'structured', got '" + kind + "'");
    }
  }
  read(j, "dim", s.dim);
  read(j, "lo", s.lo);
  read(j, "hi", s.hi);
  read(j, "bulk_lo", s.bulk_lo);
  read(j, "bulk_hi", s.bulk_hi);
  read(j, "bulk_frac", s.bulk_frac);
  read(j, "tail_lo", s.tail_lo);
  read(j, "tail_hi", s.tail_hi);
  return s;
}

json problem_to_json(const ProblemSpec& p) {
  if (p.kind == ProblemKind::kSqp) {
    return {{"kind", "sqp"},
            {"spectrum", spectrum_to_json(p.spectrum)},
            {"orientation", orientation_name(p.orientation)},
            {"nu", p.nu},
            {"seed", p.seed}};
  }
  return {{"kind", "noisy_convex"}, {"dim", p.dim}, {"m_v", p.m_v}, {"c_v", p.c_v}};
}

ProblemSpec problem_from_json(const json& j, ProblemSpec p) {
  check_keys(j, {"kind", "spectrum", "orientation", "nu", "seed", "dim", "m_v", "c_v"}, "config.problem");
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sqp") {
      p.kind = ProblemKind::kSqp;
    } else if (kind == "noisy_convex") {
      p.kind = ProblemKind::kNoisyConvex;
    } else {
      throw ContractError("config: problem kind must be 'sqp' or 'noisy_convex', got '" + kind + "'");
    }
  }
  if (j.contains("spectrum")) p.spectrum = spectrum_from_json(j.at("spectrum"), p.spectrum);
  if (j.contains("orientation")) p.orientation = parse_orientation(j.at("orientation").get<std::string>());
  read(j, "nu", p.nu);
  read(j, "seed", p.seed);
  read(j, "dim", p.dim);
  read(j, "m_v", p.m_v);
  read(j, "c_v", p.c_v);
  return p;
}

json optimizer_to_json(const optimizers::OptimizerConfig& o) {
  json j = {{"method", std::string(optimizers::method_name(o.method))},
            {"alpha", o.alpha},
            {"beta", o.beta},
            {"beta1", o.beta1},
            {"beta2", o.beta2},
            {"epsilon", o.epsilon},
            {"batch_size", o.batch_size},
            {"zero_variance_estimate", o.zero_variance_estimate}};
  if (!o.schedule.is_constant()) {
    j["schedule"] = {{"milestones", o.schedule.milestones()}, {"factor", o.schedule.factor()}};
  }
  return j;
}

optimizers::OptimizerConfig optimizer_from_json(const json& j) {
  check_keys(j,
             {"method", "alpha", "beta", "beta1", "beta2", "epsilon", "batch_size",
              "zero_variance_estimate", "schedule"},
             "config.optimizers[]");
  optimizers::OptimizerConfig o;
  if (j.contains("method")) o.method = optimizers::parse_method(j.at("method").get<std::string>());
  read(j, "alpha", o.alpha);
  read(j, "beta", o.beta);
  read(j, "beta1", o.beta1);
  read(j, "beta2", o.beta2);
  read(j, "epsilon", o.epsilon);
  read(j, "batch_size", o.batch_size);
  read(j, "zero_variance_estimate", o.zero_variance_estimate);
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    check_keys(s, {"milestones", "factor"}, "config.optimizers[].schedule");
    o.schedule = optimizers::StepSizeSchedule::piecewise(
        s.value("milestones", std::vector<std::int64_t>{}), s.value("factor", 1.0));
  }
  return o;
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  for (const auto& [k, name] : kExperimentNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kExperimentNames) {
    if (n == name) return k;
  }
  throw ContractError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  require(!seeds.empty(), "config: seeds must be non-empty");
  require(steps >= 1, "config: steps must be at least 1");
  require(eval_every >= 1, "config: eval_every must be at least 1");
  require(mc_samples >= 1, "config: mc_samples must be at least 1");
  require(!optimizers.empty(), "config: optimizers must be non-empty");
  for (const auto& o : optimizers) {
    require(o.alpha > 0.0, "config: optimizer alpha must be positive");
    require(o.beta >= 0.0 && o.beta < 1.0, "config: beta must lie in [0, 1)");
    require(o.beta1 >= 0.0 && o.beta1 < 1.0 && o.beta2 >= 0.0 && o.beta2 < 1.0,
            "config: beta1 and beta2 must lie in [0, 1)");
    require(o.epsilon >= 0.0, "config: epsilon must be non-negative");
    require(o.batch_size >= 1, "config: batch_size must be at least 1");
  }
  for (double a : alphas) require(a > 0.0, "config: alphas must be positive");
  if (problem.kind == ProblemKind::kSqp) {
    problem.spectrum.validate();
    require(problem.nu >= 0.0, "config: nu must be non-negative");
  } else {
    require(problem.dim >= 1, "config: problem dim must be at least 1");
    require(problem.m_v >= 0.0 && problem.c_v >= 0.0, "config: m_v and c_v must be non-negative");
  }
  require(figure2_dim >= 1, "config: figure2.dim must be at least 1");
  require(!figure2_noise_levels.empty(), "config: figure2.noise_levels must be non-empty");
  for (double nu : figure2_noise_levels) require(nu >= 0.0, "config: noise levels must be non-negative");
  require(figure2_rotated_band >= 0.0, "config: figure2.rotated_band must be non-negative");
  require(theorem1_window_lo >= 1.0 && theorem1_window_hi > theorem1_window_lo,
          "config: theorem1 window must satisfy 1 <= lo < hi");
  require(factors_eta_step > 0.0 && factors_eta_max >= 0.0, "config: factors grid must have step > 0");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::kFigure2:
      c.steps = 500;
      c.seeds = seed_range(1, 10);
      c.optimizers = {with_method(optimizers::Method::kSgd), with_method(optimizers::Method::kSsd)};
      break;
    case ExperimentKind::kTheorem1:
      c.steps = 10000;
      c.seeds = seed_range(1, 20);
      c.problem.kind = ProblemKind::kNoisyConvex;
      c.optimizers = {with_method(optimizers::Method::kIdealizedSvag)};
      break;
    case ExperimentKind::kWilson:
      c.steps = 100;
      c.optimizers = {with_method(optimizers::Method::kSsd), with_method(optimizers::Method::kAdam),
                      with_method(optimizers::Method::kMSvag)};
      c.optimizers[1].epsilon = 0.0;
      break;
    case ExperimentKind::kFactors:
    case ExperimentKind::kCustomRun:
    case ExperimentKind::kSelftest:
      break;
  }
  return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentKind fallback) {
  try {
    check_keys(j,
               {"experiment", "problem", "optimizers", "alphas", "seeds", "steps", "eval_every", "out",
                "mc_samples", "denominator", "figure2", "theorem1", "factors"},
               "config");
    const ExperimentKind kind =
        j.contains("experiment") ? parse_experiment(j.at("experiment").get<std::string>()) : fallback;
    ExperimentConfig c = default_config(kind);
    if (j.contains("problem")) c.problem = problem_from_json(j.at("problem"), c.problem);
    if (j.contains("optimizers")) {
      c.optimizers.clear();
      for (const json& o : j.at("optimizers")) c.optimizers.push_back(optimizer_from_json(o));
    }
    read(j, "alphas", c.alphas);
    read(j, "seeds", c.seeds);
    read(j, "steps", c.steps);
    read(j, "eval_every", c.eval_every);
    read(j, "out", c.out);
    read(j, "mc_samples", c.mc_samples);
    if (j.contains("denominator")) c.denominator = parse_denominator(j.at("denominator").get<std::string>());
    if (j.contains("figure2")) {
      const json& f = j.at("figure2");
      check_keys(f, {"dim", "noise_levels", "rotated_band"}, "config.figure2");
      read(f, "dim", c.figure2_dim);
      read(f, "noise_levels", c.figure2_noise_levels);
      read(f, "rotated_band", c.figure2_rotated_band);
    }
    if (j.contains("theorem1")) {
      const json& t = j.at("theorem1");
      check_keys(t, {"window_lo", "window_hi", "slope_threshold"}, "config.theorem1");
      read(t, "window_lo", c.theorem1_window_lo);
      read(t, "window_hi", c.theorem1_window_hi);
      read(t, "slope_threshold", c.theorem1_slope_threshold);
    }
    if (j.contains("factors")) {
      const json& f = j.at("factors");
      check_keys(f, {"eta_max", "eta_step"}, "config.factors");
      read(f, "eta_max", c.factors_eta_max);
      read(f, "eta_step", c.factors_eta_step);
    }
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ContractError(std::string("config: ") + e.what());
  }
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  json opts = json::array();
  for (const auto& o : c.optimizers) opts.push_back(optimizer_to_json(o));
  return {{"experiment", std::string(experiment_name(c.experiment))},
          {"problem", problem_to_json(c.problem)},
          {"optimizers", opts},
          {"alphas", c.alphas},
          {"seeds", c.seeds},
          {"steps", c.steps},
          {"eval_every", c.eval_every},
          {"out", c.out},
          {"mc_samples", c.mc_samples},
          {"denominator", denominator_name(c.denominator)},
          {"figure2",
           {{"dim", c.figure2_dim},
            {"noise_levels", c.figure2_noise_levels},
            {"rotated_band", c.figure2_rotated_band}}},
          {"theorem1",
           {{"window_lo", c.theorem1_window_lo},
            {"window_hi", c.theorem1_window_hi},
            {"slope_threshold", c.theorem1_slope_threshold}}},
          {"factors", {{"eta_max", c.factors_eta_max}, {"eta_step", c.factors_eta_step}}}};
}

std::string config_digest(const ExperimentConfig& config) {
  json j = config_to_json(config);
  j.erase("out");
  const std::uint64_t h = fnv1a(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

sqp::Figure2Config figure2_config(const ExperimentConfig& config) {
  sqp::Figure2Config f;
  f.dim = config.figure2_dim;
  f.well_conditioned.dim = config.figure2_dim;
  f.ill_conditioned.dim = config.figure2_dim;
  f.noise_levels = config.figure2_noise_levels;
  f.steps = config.steps;
  f.eval_every = config.eval_every;
  f.seeds = config.seeds;
  f.mc_samples = config.mc_samples;
  f.denominator = config.denominator;
  return f;
}

std::unique_ptr<optimizers::StochasticProblem> build_problem(const ProblemSpec& spec) {
  if (spec.kind == ProblemKind::kNoisyConvex) {
    const Eigen::VectorXd diag = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(spec.dim), 1.0, 4.0);
    return std::make_unique<problems::NoisyConvexProblem>(diag.asDiagonal().toDenseMatrix(),
                                                          problems::NoiseModel{spec.c_v, spec.m_v});
  }
  RngStream rng(spec.seed, fnv1a("problem/sqp"));
  return std::make_unique<sqp::QuadraticProblem>(
      sqp::build_problem(spec.spectrum, spec.orientation, spec.nu, rng));
}

RealVector initial_point(const ProblemSpec& spec) {
  if (spec.kind == ProblemKind::kNoisyConvex) return 3.0 * RealVector::ones(spec.dim);
  RngStream rng(spec.seed, fnv1a("problem/theta0"));
  return gauss_sample(rng, RealVector::zeros(spec.spectrum.dim), RealVector::ones(spec.spectrum.dim));
}

}  // namespace gradissect::harness
