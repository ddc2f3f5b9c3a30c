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

#include "gradissect/problems/lsq_classification.hpp"

#include <cmath>
#include <string>

#include "gradissect/core/error.hpp"

namespace gradissect::problems {

double LsqClassification::risk(const RealVector& theta) const {
  if (theta.dim() != dim()) throw DimensionError("LsqClassification::risk: dimension mismatch");
  const Eigen::VectorXd r = X * theta.eigen() - y.eigen();
  return 0.5 * r.squaredNorm() / static_cast<double>(n());
}

RealVector LsqClassification::xty() const {
  return RealVector(Eigen::VectorXd(X.transpose() * y.eigen()));
}

std::optional<double> LsqClassification::wilson_constant() const {
  const RealVector a = xty();
  for (double v : a) {
    if (v == 0.0) return std::nullopt;
  }
  const Eigen::VectorXd r = X * sign(a).eigen();
  // y_i is +-1, so c = r_0 / y_0 = r_0 * y_0.
  const double c = r[0] * y[0];
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r[i] != c * y[static_cast<std::size_t>(i)]) return std::nullopt;
  }
  return c;
}

RealVector lsq_gradient(const LsqClassification& p, const RealVector& theta) {
  if (theta.dim() != p.dim()) throw DimensionError("lsq_gradient: dimension mismatch");
  const Eigen::VectorXd r = p.X * theta.eigen() - p.y.eigen();
  return RealVector(Eigen::VectorXd(p.X.transpose() * r / static_cast<double>(p.n())));
}

LsqClassification make_wilson_all_ones(std::size_t d) {
  require(d >= 1, "make_wilson_all_ones: d must be at least 1");
  LsqClassification p{Eigen::MatrixXd::Ones(1, static_cast<Eigen::Index>(d)), RealVector{1.0},
                      std::nullopt};
  p.c = p.wilson_constant();
  return p;
}

namespace {

std::uint64_t ipow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

bool parallel_to_sign(const RealVector& a) {
  const double first = std::abs(a[0]);
  for (double v : a) {
    if (std::abs(v) != first) return false;
  }
  return true;
}

}  // namespace

LsqClassification make_wilson_searched(std::size_t n, std::size_t d, RngStream& rng,
                                       bool require_non_proportional) {
  require(n >= 1 && d >= 1, "make_wilson_searched: n and d must be at least 1");
  require(n * d <= 16 && n <= 16, "make_wilson_searched: search space too large (n*d <= 16)");
  const std::uint64_t n_matrices = ipow(3, n * d);
  const std::uint64_t n_labels = std::uint64_t{1} << n;
  const std::uint64_t total = n_matrices * n_labels;
  const std::uint64_t offset = rng.next_u64() % total;

  LsqClassification p{Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)),
                      RealVector(n), std::nullopt};
  for (std::uint64_t k = 0; k < total; ++k) {
    const std::uint64_t idx = (offset + k) % total;
    std::uint64_t code = idx / n_labels;
    const std::uint64_t labels = idx % n_labels;
    for (Eigen::Index j = 0; j < p.X.cols(); ++j) {
      for (Eigen::Index i = 0; i < p.X.rows(); ++i) {
        p.X(i, j) = static_cast<double>(code % 3) - 1.0;
        code /= 3;
      }
    }
    for (std::size_t i = 0; i < n; ++i) p.y[i] = (labels >> i) & 1U ? 1.0 : -1.0;
    const auto c = p.wilson_constant();
    if (!c) continue;
    if (require_non_proportional && parallel_to_sign(p.xty())) continue;
    p.c = c;
    return p;
  }
  throw DomainError("make_wilson_searched: no instance among " + std::to_string(total) +
                    " candidates (" + std::to_string(n) + "x" + std::to_string(d) +
                    " matrices over {-1,0,1} times label vectors" +
                    (require_non_proportional ? ", non-proportional" : "") + ")");
}

ProportionalityReport check_sign_proportionality(std::span<const RealVector> trajectory,
                                                 const RealVector& reference, double tolerance) {
  require(squared_norm(reference) > 0.0, "check_sign_proportionality: reference must be nonzero");
  const Eigen::VectorXd s = sign(reference).eigen().normalized();
  ProportionalityReport report;
  for (const RealVector& theta : trajectory) {
    check_same_dim(theta, reference, "check_sign_proportionality");
    if (squared_norm(theta) == 0.0) continue;
    const double along = theta.eigen().dot(s);
    const double perp = (theta.eigen() - along * s).norm();
    const double angle = std::atan2(perp, std::abs(along));
    report.max_angle = std::max(report.max_angle, angle);
  }
  report.proportional = report.max_angle <= tolerance;
  return report;
}

std::vector<RealVector> full_batch_trajectory(const LsqClassification& p,
                                              const optimizers::OptimizerConfig& config,
                                              std::int64_t steps) {
  require(steps >= 0, "full_batch_trajectory: steps must be non-negative");
  optimizers::Optimizer opt(config, RealVector::zeros(p.dim()));
  std::vector<RealVector> out{opt.theta()};
  for (std::int64_t t = 0; t < steps; ++t) {
    opt.step(lsq_gradient(p, opt.theta()));
    out.push_back(opt.theta());
  }
  return out;
}

}  // namespace gradissect::problems
