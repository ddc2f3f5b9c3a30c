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

#include "gradissect/problems/noisy_convex.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gradissect/core/error.hpp"
#include "gradissect/core/parallel.hpp"
#include "gradissect/optimizers/optimizer.hpp"
#include "gradissect/optimizers/run.hpp"

namespace gradissect::problems {

NoisyConvexProblem::NoisyConvexProblem(Eigen::MatrixXd a, NoiseModel noise)
    : a_(std::move(a)), noise_(noise) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) {
    throw DimensionError("NoisyConvexProblem: A must be square and non-empty");
  }
  if (!(a_ - a_.transpose()).isZero(0.0)) throw ContractError("NoisyConvexProblem: A must be symmetric");
  require(noise_.c_v >= 0.0 && noise_.m_v >= 0.0, "NoisyConvexProblem: noise constants must be >= 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a_, Eigen::EigenvaluesOnly);
  mu_ = eig.eigenvalues().minCoeff();
  l_ = eig.eigenvalues().maxCoeff();
  if (!(mu_ > 0.0)) throw DomainError("NoisyConvexProblem: A must be positive definite");
}

double NoisyConvexProblem::loss(const RealVector& theta) const {
  if (theta.dim() != dim()) throw DimensionError("NoisyConvexProblem::loss: dimension mismatch");
  return 0.5 * theta.eigen().dot(a_ * theta.eigen());
}

RealVector NoisyConvexProblem::gradient(const RealVector& theta) const {
  if (theta.dim() != dim()) throw DimensionError("NoisyConvexProblem::gradient: dimension mismatch");
  return RealVector(Eigen::VectorXd(a_ * theta.eigen()));
}

RealVector NoisyConvexProblem::variance(const RealVector& theta) const {
  const RealVector grad = gradient(theta);
  const double floor = noise_.m_v / static_cast<double>(dim());
  RealVector var(dim());
  for (std::size_t i = 0; i < dim(); ++i) var[i] = noise_.c_v * grad[i] * grad[i] + floor;
  return var;
}

optimizers::GradientSample NoisyConvexProblem::sample(const RealVector& theta, RngStream& rng,
                                                      const optimizers::SampleRequest& request) const {
  require(request.batch_size >= 1, "NoisyConvexProblem::sample: batch_size must be at least 1");
  const RealVector grad = gradient(theta);
  const RealVector sd = sqrt(variance(theta));
  const auto b = static_cast<double>(request.batch_size);
  optimizers::GradientSample out{RealVector::zeros(dim()), {}};
  if (request.batch_size == 1 && !request.per_example) {
    out.g = gauss_sample(rng, grad, sd);
  } else {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t k = 0; k < request.batch_size; ++k) {
      RealVector gk = gauss_sample(rng, grad, sd);
      sum += gk.eigen();
      if (request.per_example) out.aux.per_example_grads.push_back(std::move(gk));
    }
    out.g = RealVector(Eigen::VectorXd(sum / b));
  }
  if (request.oracle) {
    out.aux.oracle = optimizers::VarianceOracle{grad, (1.0 / b) * variance(theta)};
  }
  return out;
}

std::string NoisyConvexProblem::hash() const {
  std::uint64_t h = fnv1a(std::string_view(reinterpret_cast<const char*>(a_.data()),
                                           sizeof(double) * static_cast<std::size_t>(a_.size())));
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(&noise_.c_v), sizeof(double)), h);
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(&noise_.m_v), sizeof(double)), h);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

OracleDraw noisy_convex_oracle(const NoisyConvexProblem& p, const RealVector& theta, RngStream& rng) {
  RealVector grad = p.gradient(theta);
  RealVector var = p.variance(theta);
  RealVector g = gauss_sample(rng, grad, sqrt(var));
  return {std::move(g), std::move(grad), std::move(var)};
}

NoisyConvexProblem make_default_noisy_convex(std::size_t d, double m_v) {
  require(d >= 1, "make_default_noisy_convex: d must be at least 1");
  const Eigen::VectorXd diag = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(d), 1.0, 4.0);
  return NoisyConvexProblem(diag.asDiagonal().toDenseMatrix(), NoiseModel{0.0, m_v});
}

double fit_loglog_slope(std::span<const double> values, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 1; t < values.size(); ++t) {
    const auto tt = static_cast<double>(t);
    if (tt < lo || tt > hi) continue;
    if (!(values[t] > 0.0)) throw DomainError("fit_loglog_slope: non-positive value at t=" + std::to_string(t));
    const double x = std::log(tt);
    const double y = std::log(values[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw DomainError("fit_loglog_slope: fewer than two points in window");
  const auto nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

Theorem1Result theorem1_experiment(const NoisyConvexProblem& p, const Theorem1Config& config,
                                   std::size_t workers) {
  require(config.steps >= 1000, "theorem1_experiment: steps must be at least 1000");
  require(config.seeds.size() >= 2, "theorem1_experiment: at least two seeds required");
  const RealVector theta0 = config.theta0 ? *config.theta0 : 3.0 * RealVector::ones(p.dim());
  if (theta0.dim() != p.dim()) throw DimensionError("theorem1_experiment: theta0 dimension mismatch");

  optimizers::OptimizerConfig oc;
  oc.method = optimizers::Method::kIdealizedSvag;
  oc.alpha = 1.0 / p.l_smooth();

  Theorem1Result result;
  result.runs = parallel_map<RunRecord>(config.seeds.size(), workers, [&](std::size_t k) {
    RngStream rng(config.seeds[k], fnv1a("theorem1"));
    optimizers::Optimizer opt(oc, theta0);
    return optimizers::run(opt, p, config.steps, rng, 1, "theorem1");
  });

  const auto n_steps = static_cast<std::size_t>(config.steps) + 1;
  const auto s = static_cast<double>(config.seeds.size());
  result.mean_suboptimality.assign(n_steps, 0.0);
  result.std_error.assign(n_steps, 0.0);
  for (std::size_t t = 0; t < n_steps; ++t) {
    double sum = 0.0, sum_sq = 0.0;
    for (const RunRecord& r : result.runs) {
      const double e = r.rows[t].aux[0];
      sum += e;
      sum_sq += e * e;
    }
    const double mean = sum / s;
    const double var = std::max(0.0, (sum_sq - s * mean * mean) / (s - 1.0));
    result.mean_suboptimality[t] = mean;
    result.std_error[t] = std::sqrt(var / s);
  }
  result.slope = fit_loglog_slope(result.mean_suboptimality, config.window_lo, config.window_hi);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t + 1 < n_steps; ++t) {
    const double rise = result.mean_suboptimality[t + 1] - result.mean_suboptimality[t];
    const double se = result.std_error[t + 1];
    const double z = se > 0.0 ? rise / se : (rise > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    worst = std::max(worst, z);
  }
  result.max_increase_in_se = worst;
  return result;
}

}  // namespace gradissect::problems
