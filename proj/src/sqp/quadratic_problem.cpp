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

#include "gradissect/sqp/quadratic_problem.hpp"

#include <cmath>
#include <cstdio>
#include <string_view>

#include "gradissect/core/error.hpp"

namespace gradissect::sqp {

SpectrumSpec SpectrumSpec::uniform(std::size_t dim, double lo, double hi) {
  SpectrumSpec s;
  s.kind = SpectrumKind::kUniform;
  s.dim = dim;
  s.lo = lo;
  s.hi = hi;
  return s;
}

SpectrumSpec SpectrumSpec::structured(std::size_t dim, double bulk_lo, double bulk_hi,
                                      double bulk_frac, double tail_lo, double tail_hi) {
  SpectrumSpec s;
  s.kind = SpectrumKind::kStructured;
  s.dim = dim;
  s.bulk_lo = bulk_lo;
  s.bulk_hi = bulk_hi;
  s.bulk_frac = bulk_frac;
  s.tail_lo = tail_lo;
  s.tail_hi = tail_hi;
  return s;
}

void SpectrumSpec::validate() const {
  require(dim >= 1, "SpectrumSpec: dim must be at least 1");
  if (kind == SpectrumKind::kUniform) {
    require(lo > 0.0 && hi >= lo, "SpectrumSpec: need 0 < lo <= hi");
  } else {
    require(bulk_lo > 0.0 && bulk_hi >= bulk_lo, "SpectrumSpec: need 0 < bulk_lo <= bulk_hi");
    require(tail_lo > 0.0 && tail_hi >= tail_lo, "SpectrumSpec: need 0 < tail_lo <= tail_hi");
    require(bulk_frac > 0.0 && bulk_frac < 1.0, "SpectrumSpec: bulk_frac must lie in (0, 1)");
  }
}

Eigen::VectorXd SpectrumSpec::sample(RngStream& rng) const {
  validate();
  Eigen::VectorXd lambda(static_cast<Eigen::Index>(dim));
  if (kind == SpectrumKind::kUniform) {
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda[i] = rng.uniform(lo, hi);
    return lambda;
  }
  const auto n_bulk = static_cast<Eigen::Index>(std::floor(bulk_frac * static_cast<double>(dim)));
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    lambda[i] = i < n_bulk ? rng.uniform(bulk_lo, bulk_hi) : rng.uniform(tail_lo, tail_hi);
  }
  return lambda;
}

QuadraticProblem::QuadraticProblem(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenvectors,
                                   RealVector x_star, double nu)
    : lambda_(std::move(eigenvalues)), v_(std::move(eigenvectors)), x_star_(std::move(x_star)), nu_(nu) {
  const Eigen::Index d = lambda_.size();
  require(d >= 1, "QuadraticProblem: empty spectrum");
  if (v_.rows() != d || v_.cols() != d || static_cast<Eigen::Index>(x_star_.dim()) != d) {
    throw DimensionError("QuadraticProblem: eigenvectors/x_star do not match the spectrum");
  }
  require(nu >= 0.0, "QuadraticProblem: nu must be non-negative");
  require((lambda_.array() > 0.0).all(), "QuadraticProblem: eigenvalues must be positive");
  const double ortho_err = (v_.transpose() * v_ - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  require(ortho_err <= 1e-10, "QuadraticProblem: eigenvectors are not orthonormal");

  q_ = v_ * lambda_.asDiagonal() * v_.transpose();
  q_ = 0.5 * (q_ + q_.transpose()).eval();
  diagonal_ = (q_ - Eigen::MatrixXd(q_.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (v_.isIdentity(0.0)) {
    q_ = lambda_.asDiagonal();
    diagonal_ = true;
  }
  trace_ = lambda_.sum();
  sum_cubed_ = lambda_.array().cube().sum();
  // (QQ)_ii = sum_k lambda_k^2 V_ik^2
  grad_scale_ = RealVector(Eigen::VectorXd(
      (v_.array().square().matrix() * lambda_.array().square().matrix()).array().sqrt()));
}

QuadraticProblem QuadraticProblem::from_matrix(const Eigen::MatrixXd& q, RealVector x_star,
                                               double nu) {
  if (q.rows() != q.cols()) throw DimensionError("QuadraticProblem::from_matrix: Q must be square");
  const double asym = (q - q.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10, "QuadraticProblem::from_matrix: Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
  require(eig.info() == Eigen::Success, "QuadraticProblem::from_matrix: eigendecomposition failed");
  QuadraticProblem p(eig.eigenvalues(), eig.eigenvectors(), std::move(x_star), nu);
  p.q_ = 0.5 * (q + q.transpose());
  p.diagonal_ = (p.q_ - Eigen::MatrixXd(p.q_.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  return p;
}

RealVector QuadraticProblem::gradient(const RealVector& theta) const {
  check_same_dim(theta, x_star_, "QuadraticProblem::gradient");
  return RealVector(Eigen::VectorXd(q_ * (theta.eigen() - x_star_.eigen())));
}

double QuadraticProblem::loss(const RealVector& theta) const {
  check_same_dim(theta, x_star_, "QuadraticProblem::loss");
  const Eigen::VectorXd r = theta.eigen() - x_star_.eigen();
  return 0.5 * r.dot(q_ * r) + 0.5 * nu_ * nu_ * trace_;
}

RealVector QuadraticProblem::sample_gradient(const RealVector& theta, RngStream& rng) const {
  check_same_dim(theta, x_star_, "QuadraticProblem::sample_gradient");
  const RealVector x = gauss_sample(rng, x_star_, RealVector(dim(), nu_));
  return RealVector(Eigen::VectorXd(q_ * (theta.eigen() - x.eigen())));
}

Eigen::MatrixXd QuadraticProblem::sample_gradients(const RealVector& theta, RngStream& rng,
                                                   std::size_t count) const {
  check_same_dim(theta, x_star_, "QuadraticProblem::sample_gradients");
  const auto d = static_cast<Eigen::Index>(dim());
  const auto n = static_cast<Eigen::Index>(count);
  Eigen::MatrixXd xi(d, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) xi(i, j) = rng.normal();
  }
  Eigen::MatrixXd g = nu_ * (q_ * xi);
  g.colwise() += gradient(theta).eigen();
  return g;
}

optimizers::GradientSample QuadraticProblem::sample(const RealVector& theta, RngStream& rng,
                                                    const optimizers::SampleRequest& request) const {
  require(request.batch_size >= 1, "QuadraticProblem::sample: batch_size must be at least 1");
  optimizers::GradientSample out;
  if (request.batch_size == 1 && !request.per_example) {
    out.g = sample_gradient(theta, rng);
  } else {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t k = 0; k < request.batch_size; ++k) {
      RealVector gk = sample_gradient(theta, rng);
      mean += gk.eigen();
      if (request.per_example) out.aux.per_example_grads.push_back(std::move(gk));
    }
    out.g = RealVector(Eigen::VectorXd(mean / static_cast<double>(request.batch_size)));
  }
  if (request.oracle) {
    const RealVector sd = gradient_stddev();
    out.aux.oracle = optimizers::VarianceOracle{
        gradient(theta), (1.0 / static_cast<double>(request.batch_size)) * square(sd)};
  }
  return out;
}

std::string QuadraticProblem::hash() const {
  std::uint64_t h = fnv1a(std::string_view(reinterpret_cast<const char*>(q_.data()),
                                           sizeof(double) * static_cast<std::size_t>(q_.size())));
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(x_star_.begin()),
                             sizeof(double) * x_star_.dim()),
            h);
  h = fnv1a(std::string_view(reinterpret_cast<const char*>(&nu_), sizeof(nu_)), h);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Eigen::MatrixXd haar_rotation(std::size_t dim, RngStream& rng) {
  require(dim >= 1, "haar_rotation: dim must be at least 1");
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

QuadraticProblem build_problem(const Eigen::VectorXd& eigenvalues, Orientation orientation,
                               double nu, RngStream& rng, RealVector x_star) {
  const auto d = eigenvalues.size();
  if (orientation == Orientation::kAxisAligned) {
    return QuadraticProblem(eigenvalues, Eigen::MatrixXd::Identity(d, d), std::move(x_star), nu);
  }
  return QuadraticProblem(eigenvalues, haar_rotation(static_cast<std::size_t>(d), rng),
                          std::move(x_star), nu);
}

QuadraticProblem build_problem(const SpectrumSpec& spec, Orientation orientation, double nu,
                               RngStream& rng) {
  const Eigen::VectorXd lambda = spec.sample(rng);
  return build_problem(lambda, orientation, nu, rng, RealVector::zeros(spec.dim));
}

}  // namespace gradissect::sqp
