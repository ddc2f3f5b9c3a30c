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

#include "gradissect/sqp/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "gradissect/core/error.hpp"
#include "gradissect/estimators/factors.hpp"

namespace gradissect::sqp {

namespace {

RealVector nonzero_gradient(const QuadraticProblem& p, const RealVector& theta, const char* where) {
  RealVector grad = p.gradient(theta);
  if (squared_norm(grad) == 0.0) throw DomainError(std::string(where) + ": zero gradient");
  return grad;
}

double sign_numerator(const QuadraticProblem& p, const RealVector& grad) {
  const RealVector sd = p.gradient_stddev();
  double num = 0.0;
  for (std::size_t i = 0; i < grad.dim(); ++i) {
    if (grad[i] == 0.0) continue;  // contributes (2 rho - 1) * 0
    const double rho = estimators::success_probability(grad[i], sd[i]);
    num += (2.0 * rho - 1.0) * std::abs(grad[i]);
  }
  return num;
}

}  // namespace

RealVector success_probabilities(const QuadraticProblem& p, const RealVector& theta) {
  const RealVector grad = p.gradient(theta);
  const RealVector sd = p.gradient_stddev();
  RealVector rho(grad.dim());
  for (std::size_t i = 0; i < grad.dim(); ++i) {
    rho[i] = estimators::success_probability(grad[i], sd[i]);
  }
  return rho;
}

double improvement_sgd(const QuadraticProblem& p, const RealVector& theta) {
  const RealVector grad = nonzero_gradient(p, theta, "improvement_sgd");
  const double gg = squared_norm(grad);
  const double gqg = grad.eigen().dot(p.Q() * grad.eigen());
  return 0.5 * gg * gg / (gqg + p.nu() * p.nu() * p.sum_cubed_eigenvalues());
}

double improvement_ssd_bound(const QuadraticProblem& p, const RealVector& theta) {
  const RealVector grad = nonzero_gradient(p, theta, "improvement_ssd_bound");
  const double num = sign_numerator(p, grad);
  return 0.5 * num * num / p.trace() * p_diag(p.Q());
}

double p_diag(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) throw DimensionError("p_diag: matrix must be square");
  const double diag = q.diagonal().cwiseAbs().sum();
  double off = 0.0;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      if (i != j) off += std::abs(q(i, j));
    }
  }
  const double total = diag + off;
  if (total == 0.0) throw DomainError("p_diag: all-zero matrix");
  return diag / total;
}

double p_diag_eigenvector_bound(const Eigen::VectorXd& eigenvalues,
                                const Eigen::MatrixXd& eigenvectors) {
  if (eigenvectors.cols() != eigenvalues.size()) {
    throw DimensionError("p_diag_eigenvector_bound: one eigenvector per eigenvalue required");
  }
  const Eigen::VectorXd l1 = eigenvectors.cwiseAbs().colwise().sum().transpose();
  return eigenvalues.sum() / eigenvalues.dot(l1.cwiseProduct(l1));
}

double expected_sign_quadratic_form(const QuadraticProblem& p, const RealVector& theta,
                                    std::size_t mc_samples, RngStream& rng, SsdDenominator mode) {
  if (mode == SsdDenominator::kAbsoluteBound) return p.Q().cwiseAbs().sum();
  // s_i^2 = 1, so the diagonal contributes tr(Q) exactly.
  if (p.is_diagonal()) return p.trace();
  if (p.nu() == 0.0) {
    const Eigen::VectorXd s = sign(p.gradient(theta)).eigen();
    return s.dot(p.Q() * s);
  }
  require(mc_samples >= 1, "expected_sign_quadratic_form: mc_samples must be at least 1");
  constexpr std::size_t kChunk = 64;
  double total = 0.0;
  Eigen::MatrixXd qs;
  for (std::size_t done = 0; done < mc_samples; done += kChunk) {
    const std::size_t n = std::min(kChunk, mc_samples - done);
    Eigen::MatrixXd s = p.sample_gradients(theta, rng, n);
    s = s.unaryExpr([](double x) { return gradissect::sign(x); });
    qs.noalias() = p.Q() * s;
    total += s.cwiseProduct(qs).sum();
  }
  return total / static_cast<double>(mc_samples);
}

double optimal_step(const QuadraticProblem& p, const RealVector& theta, StepDirection direction,
                    std::size_t mc_samples, RngStream& rng, SsdDenominator mode) {
  const RealVector grad = nonzero_gradient(p, theta, "optimal_step");
  if (direction == StepDirection::kSgd) {
    const double gqg = grad.eigen().dot(p.Q() * grad.eigen());
    return squared_norm(grad) / (gqg + p.nu() * p.nu() * p.sum_cubed_eigenvalues());
  }
  require(mc_samples >= 1, "optimal_step: mc_samples must be at least 1 for ssd");
  return sign_numerator(p, grad) / expected_sign_quadratic_form(p, theta, mc_samples, rng, mode);
}

}  // namespace gradissect::sqp
