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

#include "gradissect/harness/selftest.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "gradissect/core/error.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/estimators/factors.hpp"
#include "gradissect/estimators/moving_average.hpp"
#include "gradissect/estimators/variance.hpp"
#include "gradissect/optimizers/optimizer.hpp"
#include "gradissect/problems/noisy_convex.hpp"
#include "gradissect/sqp/analysis.hpp"
#include "gradissect/sqp/quadratic_problem.hpp"

namespace gradissect::harness {

namespace {

using estimators::AdaptationFactors;
using optimizers::Method;
using optimizers::Optimizer;
using optimizers::OptimizerConfig;

std::string fmt(const char* format, double x) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

RngStream stream(const char* name) { return RngStream(20260101, fnv1a(name)); }

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const RealVector& x) {
  const double n = static_cast<double>(x.dim());
  const double mean = sum(x) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

CheckOutcome adam_decomposition(const SelftestContext&) {
  RngStream rng = stream("selftest/adam-decomposition");
  constexpr std::size_t n = 10000;
  RealVector m(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mi = 0.0;
    while (mi == 0.0) mi = rng.normal();
    m[i] = mi;
    v[i] = mi * mi * (1.0 + 9.0 * rng.uniform());
  }
  const RealVector a = estimators::adam_direction(m, v, 0.0);
  const RealVector b = estimators::adam_sign_variance_direction(m, v);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(a[i] - b[i]));
  return {err <= 1e-12, err, "max abs error " + fmt("%.3g", err) + " over 10^4 pairs"};
}

CheckOutcome bias_correction(const SelftestContext&) {
  double err = 0.0;
  for (double beta : {0.5, 0.9, 0.99}) {
    for (std::int64_t t = 0; t <= 20; ++t) {
      // Weights recovered by pushing unit impulses through the average.
      const auto len = static_cast<std::size_t>(t + 1);
      estimators::MovingAverage avg(len, beta);
      for (std::size_t s = 0; s < len; ++s) {
        RealVector impulse = RealVector::zeros(len);
        impulse[s] = 1.0;
        avg.update(impulse);
      }
      double brute = 0.0;
      for (double c : avg.debiased()) brute += c * c;
      err = std::max(err, std::abs(brute - estimators::rho(beta, t)));
    }
  }
  const bool exact_zero = estimators::rho(0.5, 0) == 1.0 && estimators::rho(0.9, 0) == 1.0 &&
                          estimators::rho(0.99, 0) == 1.0;
  const double limit_err = std::abs(estimators::rho(0.9, 500) - 1.0 / 19.0);
  const bool pass = err <= 1e-12 && exact_zero && limit_err <= 1e-9;
  return {pass, err,
          "max |sum c^2 - rho| " + fmt("%.3g", err) + ", rho(b,0)==1 " + (exact_zero ? "yes" : "no") +
              ", |rho(0.9,500)-1/19| " + fmt("%.3g", limit_err)};
}

CheckOutcome estimator_unbiasedness(const SelftestContext&) {
  RngStream rng = stream("selftest/unbiasedness");
  constexpr std::size_t replicates = 10000;
  constexpr double mu = 1.0;
  constexpr double sigma = 2.0;
  constexpr double beta = 0.9;
  constexpr std::int64_t t_final = 200;
  const RealVector mean = RealVector(replicates, mu);
  const RealVector sd = RealVector(replicates, sigma);

  estimators::EmaState ema(replicates, beta);
  estimators::Moments mv;
  for (std::int64_t t = 0; t <= t_final; ++t) mv = ema.update(gauss_sample(rng, mean, sd));
  const MeanSe ma = mean_se(estimators::ma_variance_estimate(mv.m, mv.v, beta, t_final));
  const double z_ma = std::abs(ma.mean - sigma * sigma) / ma.se;

  constexpr std::size_t batch = 32;
  std::vector<RealVector> grads;
  for (std::size_t k = 0; k < batch; ++k) grads.push_back(gauss_sample(rng, mean, sd));
  const MeanSe mb = mean_se(estimators::mb_variance_estimate(grads));
  const double target_mb = sigma * sigma / static_cast<double>(batch);
  const double z_mb = std::abs(mb.mean - target_mb) / mb.se;

  const double z = std::max(z_ma, z_mb);
  return {z <= 3.0, z,
          "moving-average mean " + fmt("%.5f", ma.mean) + " vs 4 (" + fmt("%.2f", z_ma) + " se), mini-batch mean " +
              fmt("%.6f", mb.mean) + " vs 0.125 (" + fmt("%.2f", z_mb) + " se)"};
}

double ternary_min(const std::function<double(double)>& f) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (f(a) < f(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return 0.5 * (lo + hi);
}

CheckOutcome variance_factor_optimality(const SelftestContext&) {
  RngStream rng = stream("selftest/variance-factor");
  double err = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    RealVector p(3), sigma(3);
    for (std::size_t i = 0; i < 3; ++i) {
      p[i] = rng.normal();
      sigma[i] = rng.uniform(0.1, 3.0);
    }
    // Closed-form expected squared distances, minimized coordinate-wise on [0, 1].
    std::array<double, 3> gamma{0.5, 0.5, 0.5}, gamma_sign{0.5, 0.5, 0.5};
    auto distance = [&](const std::array<double, 3>& g) {
      double d = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const double p2 = p[i] * p[i];
        d += g[i] * g[i] * (p2 + sigma[i] * sigma[i]) - 2.0 * g[i] * p2 + p2;
      }
      return d;
    };
    auto sign_distance = [&](const std::array<double, 3>& g) {
      double d = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        const double rho_i = 1.0 - 0.5 * std::erfc(std::abs(p[i]) / (std::numbers::sqrt2 * sigma[i]));
        d += g[i] * g[i] - 2.0 * g[i] * (2.0 * rho_i - 1.0) + 1.0;
      }
      return d;
    };
    for (std::size_t i = 0; i < 3; ++i) {
      gamma[i] = ternary_min([&](double x) {
        auto g = gamma;
        g[i] = x;
        return distance(g);
      });
      gamma_sign[i] = ternary_min([&](double x) {
        auto g = gamma_sign;
        g[i] = x;
        return sign_distance(g);
      });
    }
    const AdaptationFactors f = estimators::factor_exact(p, square(sigma));
    for (std::size_t i = 0; i < 3; ++i) {
      err = std::max(err, std::abs(gamma[i] - f.gamma[i]));
      const double opt_sign = estimators::optimal_sign_factor(estimators::success_probability(p[i], sigma[i]));
      err = std::max(err, std::abs(gamma_sign[i] - opt_sign));
    }
  }
  return {err <= 1e-4, err, "max |search - formula| " + fmt("%.3g", err) + " over 100 instances"};
}

CheckOutcome success_probability_mc(const SelftestContext&) {
  RngStream rng = stream("selftest/success-probability");
  constexpr std::size_t n = 100000;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double mu = (k % 2 == 0 ? 1.0 : -1.0) * rng.uniform(0.05, 2.0);
    const double sigma = rng.uniform(0.5, 3.0);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = mu + sigma * rng.normal();
      agree += (g > 0.0) == (mu > 0.0);
    }
    const double p = estimators::success_probability(mu, sigma);
    const double freq = static_cast<double>(agree) / static_cast<double>(n);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    worst = std::max(worst, std::abs(freq - p) / se);
  }
  return {worst <= 3.0, worst, "largest deviation " + fmt("%.2f", worst) + " Bernoulli se over 20 pairs"};
}

CheckOutcome improvement_formulas(const SelftestContext&) {
  RngStream rng = stream("selftest/improvement");
  constexpr std::size_t draws = 1000000;
  constexpr std::size_t chunk = 10000;
  double worst_rel = 0.0;
  double worst_gap = -std::numeric_limits<double>::infinity();
  for (int inst = 0; inst < 10; ++inst) {
    const std::size_t d = 2 + static_cast<std::size_t>(inst) % 9;
    const auto orientation = inst % 2 == 0 ? sqp::Orientation::kAxisAligned : sqp::Orientation::kRandomRotation;
    const double nu = rng.uniform(0.2, 1.5);
    const sqp::QuadraticProblem p = sqp::build_problem(sqp::SpectrumSpec::uniform(d, 0.1, 2.0), orientation, nu, rng);
    const RealVector theta = gauss_sample(rng, RealVector::zeros(d), RealVector(d, 2.0));
    const Eigen::VectorXd grad = p.gradient(theta).eigen();

    const double a_sgd = sqp::optimal_step(p, theta, sqp::StepDirection::kSgd, 1, rng);
    const double a_ssd = sqp::optimal_step(p, theta, sqp::StepDirection::kSsd, 100000, rng);
    double s1 = 0.0, s2 = 0.0, z1 = 0.0, z2 = 0.0;
    for (std::size_t done = 0; done < draws; done += chunk) {
      const Eigen::MatrixXd g = p.sample_gradients(theta, rng, chunk);
      const Eigen::MatrixXd s = g.unaryExpr([](double x) { return gradissect::sign(x); });
      const Eigen::MatrixXd qg = p.Q() * g;
      const Eigen::MatrixXd qs = p.Q() * s;
      for (Eigen::Index k = 0; k < g.cols(); ++k) {
        const double i_sgd = a_sgd * g.col(k).dot(grad) - 0.5 * a_sgd * a_sgd * g.col(k).dot(qg.col(k));
        const double i_ssd = a_ssd * s.col(k).dot(grad) - 0.5 * a_ssd * a_ssd * s.col(k).dot(qs.col(k));
        s1 += i_sgd;
        s2 += i_sgd * i_sgd;
        z1 += i_ssd;
        z2 += i_ssd * i_ssd;
      }
    }
    const double n = static_cast<double>(draws);
    const double mc_sgd = s1 / n;
    const double mc_ssd = z1 / n;
    const double se_ssd = std::sqrt(std::max(0.0, z2 / n - mc_ssd * mc_ssd) / n);
    worst_rel = std::max(worst_rel, std::abs(mc_sgd - sqp::improvement_sgd(p, theta)) /
                                        sqp::improvement_sgd(p, theta));
    worst_gap = std::max(worst_gap, (sqp::improvement_ssd_bound(p, theta) - mc_ssd) / se_ssd);
  }
  const bool pass = worst_rel <= 0.01 && worst_gap <= 3.0;
  return {pass, worst_rel,
          "sgd max relative error " + fmt("%.4f", worst_rel) + ", ssd bound minus MC at most " +
              fmt("%.2f", worst_gap) + " se"};
}

CheckOutcome figure2_orderings(const SelftestContext& ctx) {
  ExperimentConfig cfg = default_config(ExperimentKind::kFigure2);
  cfg.figure2_rotated_band = ctx.figure2_rotated_band;
  const ExperimentOutput out = experiment_figure2(cfg, ctx.workers);
  std::string detail;
  double failed = 0.0;
  for (const CheckResult& c : out.checks) {
    if (!c.pass) failed += 1.0;
    detail += (detail.empty() ? "" : "; ") + std::string(c.pass ? "ok " : "FAILED ") + c.name + " [" + c.detail + "]";
  }
  return {failed == 0.0, failed, detail};
}

CheckOutcome p_diag_bounds(const SelftestContext&) {
  RngStream rng = stream("selftest/p-diag");
  bool diag_exact = true;
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd lambda(20);
    for (Eigen::Index i = 0; i < 20; ++i) lambda[i] = std::exp(rng.uniform(-7.0, 7.0));
    diag_exact = diag_exact && sqp::p_diag(lambda.asDiagonal().toDenseMatrix()) == 1.0;
  }
  double min_scaled = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    Eigen::MatrixXd q;
    if (k % 2 == 0) {
      Eigen::VectorXd lambda(20);
      for (Eigen::Index i = 0; i < 20; ++i) lambda[i] = std::exp(rng.uniform(-7.0, 7.0));
      const Eigen::MatrixXd v = sqp::haar_rotation(20, rng);
      q = v * lambda.asDiagonal() * v.transpose();
    } else {
      Eigen::MatrixXd a(20, 20);
      for (Eigen::Index j = 0; j < 20; ++j) {
        for (Eigen::Index i = 0; i < 20; ++i) a(i, j) = rng.normal();
      }
      q = a * a.transpose() / 20.0 + 1e-3 * Eigen::MatrixXd::Identity(20, 20);
    }
    min_scaled = std::min(min_scaled, 20.0 * sqp::p_diag(q));
  }
  constexpr std::size_t d = 100;
  const sqp::SpectrumSpec spec = sqp::SpectrumSpec::uniform(d, 0.1, 1.1);
  double sum = 0.0, sum_bound = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::VectorXd lambda = spec.sample(rng);
    const Eigen::MatrixXd v = sqp::haar_rotation(d, rng);
    const Eigen::MatrixXd q = v * lambda.asDiagonal() * v.transpose();
    sum += static_cast<double>(d) * sqp::p_diag(q);
    sum_bound += static_cast<double>(d) * sqp::p_diag_eigenvector_bound(lambda, v);
  }
  const double mean = sum / 200.0;
  const double mean_bound = sum_bound / 200.0;
  const bool average_ok = std::abs(mean - 1.57) <= 0.3;
  const bool pass = diag_exact && min_scaled >= 1.0 && average_ok;
  return {pass, mean,
          std::string("diagonal exact ") + (diag_exact ? "yes" : "no") + ", min d*p_diag " + fmt("%.4f", min_scaled) +
              ", mean d*p_diag over Haar rotations of uniform(0.1,1.1) " + fmt("%.4f", mean) +
              " (target 1.57 +- 0.3), eigenvector-form value " + fmt("%.4f", mean_bound)};
}

CheckOutcome theorem1_convergence(const SelftestContext& ctx) {
  const ExperimentConfig cfg = default_config(ExperimentKind::kTheorem1);
  const auto problem = build_problem(cfg.problem);
  problems::Theorem1Config tc;
  tc.steps = cfg.steps;
  tc.seeds = cfg.seeds;
  const problems::Theorem1Result res = problems::theorem1_experiment(
      dynamic_cast<const problems::NoisyConvexProblem&>(*problem), tc, ctx.workers);
  const bool pass = res.slope <= tc.slope_threshold && res.max_increase_in_se <= 3.0;
  return {pass, res.slope,
          "tail slope " + fmt("%.4f", res.slope) + " over t in [1e2, 1e4] with " + std::to_string(tc.seeds.size()) +
              " seeds (threshold " + fmt("%g", tc.slope_threshold) + "), largest rise " +
              fmt("%.3f", res.max_increase_in_se) + " se"};
}

CheckOutcome wilson_construction(const SelftestContext&) {
  const ExperimentOutput out = experiment_wilson(default_config(ExperimentKind::kWilson));
  std::string detail;
  double failed = 0.0;
  for (const CheckResult& c : out.checks) {
    if (!c.pass) failed += 1.0;
    detail += (detail.empty() ? "" : "; ") + std::string(c.pass ? "ok " : "FAILED ") + c.name + " [" + c.detail + "]";
  }
  return {failed == 0.0, failed, detail};
}

CheckOutcome factor_curves(const SelftestContext&) {
  const auto grid = estimators::linear_grid(0.0, 10.0, 1e-3);
  const auto rows = estimators::factor_curves(grid);
  bool in_range = true, monotone = true;
  double gap = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    for (double v : {r.erf_optimal, r.adam_style, r.svag_style}) in_range = in_range && v >= 0.0 && v <= 1.0;
    if (i > 0) {
      const auto& q = rows[i - 1];
      monotone = monotone && r.erf_optimal <= q.erf_optimal && r.adam_style <= q.adam_style &&
                 r.svag_style <= q.svag_style;
    }
    gap = std::max(gap, std::abs(r.erf_optimal - r.adam_style));
  }
  const bool agree = rows.front().erf_optimal == 1.0 && rows.front().adam_style == 1.0 &&
                     rows.front().svag_style == 1.0;
  const double gap_err = std::abs(gap - kFactorGapErfAdam);
  const bool pass = in_range && monotone && agree && gap_err <= 1e-6;
  return {pass, gap_err,
          std::string("range ") + (in_range ? "ok" : "violated") + ", monotone " + (monotone ? "ok" : "violated") +
              ", agree at 0 " + (agree ? "yes" : "no") + ", max gap " + fmt("%.12f", gap) + " (oracle " +
              fmt("%.12f", kFactorGapErfAdam) + ")"};
}

/// Steps both optimizers on identical gradients drawn at the first one's
/// iterate; returns the first step at which the iterates differ, or -1.
std::int64_t lockstep(const sqp::QuadraticProblem& p, const RealVector& theta0, OptimizerConfig a,
                      OptimizerConfig b, std::uint64_t salt, std::size_t copies_for_b = 0) {
  Optimizer oa(std::move(a), theta0);
  Optimizer ob(std::move(b), theta0);
  RngStream rng(7, salt);
  for (std::int64_t t = 0; t < 100; ++t) {
    const RealVector g = p.sample_gradient(oa.theta(), rng);
    oa.step(g);
    optimizers::StepAux aux;
    if (copies_for_b > 0) aux.per_example_grads.assign(copies_for_b, g);
    ob.step(g, aux);
    if (!(oa.theta() == ob.theta())) return t;
  }
  return -1;
}

CheckOutcome equivalence_lattice(const SelftestContext&) {
  RngStream rng = stream("selftest/lattice");
  const sqp::QuadraticProblem p =
      sqp::build_problem(sqp::SpectrumSpec::uniform(10, 0.1, 1.1), sqp::Orientation::kRandomRotation, 0.5, rng);
  const RealVector theta0 = gauss_sample(rng, RealVector::zeros(10), RealVector::ones(10));
  auto cfg = [](Method m, double beta, bool zero_s = false, std::size_t batch = 1) {
    OptimizerConfig c;
    c.method = m;
    c.alpha = 0.05;
    c.beta = beta;
    c.zero_variance_estimate = zero_s;
    c.batch_size = batch;
    return c;
  };
  struct Pair {
    const char* name;
    OptimizerConfig a, b;
    std::size_t copies;
  };
  const Pair pairs[] = {
      {"m-sgd(beta=0) = sgd", cfg(Method::kMSgd, 0.0), cfg(Method::kSgd, 0.0), 0},
      {"m-ssd(beta=0) = ssd", cfg(Method::kMSsd, 0.0), cfg(Method::kSsd, 0.0), 0},
      {"m-svag(s=0) = m-sgd", cfg(Method::kMSvag, 0.9, true), cfg(Method::kMSgd, 0.9), 0},
      {"adam-star(s=0) = m-ssd", cfg(Method::kAdamStar, 0.9, true), cfg(Method::kMSsd, 0.9), 0},
      {"m-svag-mb(identical examples) = m-svag(s=0)", cfg(Method::kMSvag, 0.9, true),
       cfg(Method::kMSvagMb, 0.9, false, 4), 4},
  };
  double failed = 0.0;
  std::string detail;
  for (const Pair& pr : pairs) {
    const std::int64_t at = lockstep(p, theta0, pr.a, pr.b, fnv1a(pr.name), pr.copies);
    if (at >= 0) failed += 1.0;
    detail += (detail.empty() ? "" : "; ") + std::string(pr.name) +
              (at < 0 ? " bit-exact" : " differs at step " + std::to_string(at));
  }
  return {failed == 0.0, failed, detail};
}

}  // namespace

const std::vector<SelfCheck>& check_registry() {
  static const std::vector<SelfCheck> registry = {
      {1, "adam-decomposition", false, adam_decomposition},
      {2, "bias-correction-algebra", false, bias_correction},
      {3, "estimator-unbiasedness", false, estimator_unbiasedness},
      {4, "variance-adaptation-optimality", false, variance_factor_optimality},
      {5, "success-probability", false, success_probability_mc},
      {6, "expected-improvement", false, improvement_formulas},
      {7, "figure2-orderings", true, figure2_orderings},
      {8, "p-diag-bounds", false, p_diag_bounds},
      {9, "theorem1-convergence", false, theorem1_convergence},
      {10, "wilson-construction", false, wilson_construction},
      {11, "factor-curves", false, factor_curves},
      {12, "method-equivalence-lattice", false, equivalence_lattice},
  };
  return registry;
}

ExperimentOutput experiment_selftest(const ExperimentConfig& config, std::size_t workers, bool full) {
  const SelftestContext ctx{workers, config.figure2_rotated_band};
  const std::string digest = config_digest(config);
  ExperimentOutput out;
  std::vector<RunRecord> records;
  for (const SelfCheck& check : check_registry()) {
    if (check.full_only && !full) continue;
    const auto start = std::chrono::steady_clock::now();
    CheckOutcome o;
    try {
      o = check.run(ctx);
    } catch (const std::exception& e) {
      o = {false, 0.0, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string name = "criterion " + std::to_string(check.criterion) + " " + check.name;
    out.checks.push_back({name, o.pass, o.detail + " (" + fmt("%.2f", secs) + " s)"});
    RunRecord r;
    r.meta = {"selftest/criterion-" + std::to_string(check.criterion), check.name, "", 0, digest};
    r.aux_names = {"pass"};
    r.add_row(0, std::isfinite(o.value) ? o.value : 0.0, {o.pass ? 1.0 : 0.0});
    records.push_back(std::move(r));
  }
  out.tables.push_back({"selftest", std::move(records), false});
  return out;
}

}  // namespace gradissect::harness
