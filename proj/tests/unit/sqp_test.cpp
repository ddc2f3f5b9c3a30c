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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "gradissect/core/error.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/sqp/analysis.hpp"
#include "gradissect/sqp/figure2.hpp"
#include "gradissect/sqp/quadratic_problem.hpp"

namespace gd = gradissect;
namespace sqp = gradissect::sqp;

namespace {

sqp::QuadraticProblem rotated(std::size_t d, double nu, std::uint64_t seed) {
  gd::RngStream rng(seed, gd::fnv1a("sqp-test"));
  return sqp::build_problem(sqp::SpectrumSpec::uniform(d, 0.2, 2.0), sqp::Orientation::kRandomRotation, nu,
                            rng);
}

gd::RealVector point(std::size_t d, std::uint64_t seed) {
  gd::RngStream rng(seed, gd::fnv1a("sqp-test/theta"));
  gd::RealVector t(d);
  for (double& x : t) x = rng.normal();
  return t;
}

}  // namespace

TEST_CASE("haar rotations are orthonormal with unit determinant") {
  gd::RngStream rng(1, 1);
  for (std::size_t d : {1u, 2u, 5u, 40u}) {
    const Eigen::MatrixXd r = sqp::haar_rotation(d, rng);
    const auto n = static_cast<Eigen::Index>(d);
    CHECK((r.transpose() * r - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("haar first column is uniform on the sphere") {
  // E[r_11^2] = 1/d and E[r_11] = 0 for a Haar rotation.
  gd::RngStream rng(2, 2);
  const int n = 4000;
  const std::size_t d = 4;
  double m1 = 0.0, m2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = sqp::haar_rotation(d, rng)(0, 0);
    m1 += x / n;
    m2 += x * x / n;
  }
  CHECK(std::abs(m1) < 4.0 * std::sqrt(0.25 / n));
  CHECK(std::abs(m2 - 0.25) < 0.02);
}

TEST_CASE("spectrum draws") {
  gd::RngStream rng(3, 3);
  const auto spec = sqp::SpectrumSpec::structured(100, 1e-6, 1.0, 0.9, 30.0, 60.0);
  const Eigen::VectorXd lambda = spec.sample(rng);
  const auto bulk = std::count_if(lambda.begin(), lambda.end(), [](double x) { return x <= 1.0; });
  CHECK(bulk == 90);
  CHECK(lambda.minCoeff() >= 1e-6);
  CHECK(lambda.maxCoeff() <= 60.0);
  CHECK_THROWS_AS(sqp::SpectrumSpec::uniform(3, 2.0, 1.0).validate(), gd::ContractError);
  CHECK_THROWS_AS(sqp::SpectrumSpec::uniform(3, 0.0, 1.0).validate(), gd::ContractError);
  CHECK_THROWS_AS(sqp::SpectrumSpec::structured(10, 0.1, 1.0, 1.0, 2.0, 3.0).validate(), gd::ContractError);
}

TEST_CASE("quadratic problem basics") {
  const auto p = rotated(6, 0.7, 4);
  const Eigen::MatrixXd q = p.eigenvectors() * p.eigenvalues().asDiagonal() * p.eigenvectors().transpose();
  CHECK((q - p.Q()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p.loss(p.x_star()) == doctest::Approx(*p.optimal_loss()));
  CHECK(*p.optimal_loss() == doctest::Approx(0.5 * 0.49 * p.Q().trace()));
  CHECK(p.trace() == doctest::Approx(p.eigenvalues().sum()));
  CHECK(p.sum_cubed_eigenvalues() == doctest::Approx(p.eigenvalues().array().cube().sum()));
  const gd::RealVector th = point(6, 1);
  const Eigen::VectorXd delta = th.eigen() - p.x_star().eigen();
  CHECK(p.loss(th) == doctest::Approx(0.5 * delta.dot(p.Q() * delta) + *p.optimal_loss()));
  CHECK(p.gradient(th).eigen().isApprox(p.Q() * delta));
  CHECK_FALSE(p.is_diagonal());
  CHECK(p.hash() == rotated(6, 0.7, 4).hash());
  CHECK(p.hash() != rotated(6, 0.7, 5).hash());
}

TEST_CASE("stochastic gradients have mean grad and covariance nu^2 Q Q") {
  const auto p = rotated(3, 0.8, 5);
  const gd::RealVector th = point(3, 2);
  gd::RngStream rng(4, 4);
  const std::size_t n = 200000;
  const Eigen::MatrixXd g = p.sample_gradients(th, rng, n);
  const Eigen::VectorXd mean = g.rowwise().mean();
  const Eigen::MatrixXd centered = g.colwise() - mean;
  const Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(n - 1);
  const Eigen::MatrixXd target = 0.64 * p.Q() * p.Q();
  const double scale = target.cwiseAbs().maxCoeff();
  CHECK((mean - p.gradient(th).eigen()).cwiseAbs().maxCoeff() < 5.0 * std::sqrt(scale / n));
  CHECK((cov - target).cwiseAbs().maxCoeff() < 0.02 * scale);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(p.gradient_stddev()[i] == doctest::Approx(std::sqrt(target(static_cast<Eigen::Index>(i),
                                                                      static_cast<Eigen::Index>(i)))));
  }
}

TEST_CASE("success probabilities match sign-agreement frequencies") {
  const auto p = rotated(5, 1.2, 6);
  const gd::RealVector th = point(5, 3);
  const gd::RealVector rho = sqp::success_probabilities(p, th);
  gd::RngStream rng(5, 5);
  const std::size_t n = 100000;
  const Eigen::MatrixXd g = p.sample_gradients(th, rng, n);
  const gd::RealVector grad = p.gradient(th);
  for (Eigen::Index i = 0; i < 5; ++i) {
    double agree = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j) agree += gd::sign(g(i, j)) == gd::sign(grad[static_cast<std::size_t>(i)]);
    const double r = rho[static_cast<std::size_t>(i)];
    CHECK(r >= 0.5);
    CHECK(r <= 1.0);
    CHECK(std::abs(agree / n - r) <= 3.0 * std::sqrt(r * (1.0 - r) / n) + 1e-12);
  }
}

TEST_CASE("sgd optimal step and improvement") {
  const auto p = rotated(7, 0.5, 7);
  const gd::RealVector th = point(7, 4);
  const Eigen::VectorXd g = p.gradient(th).eigen();
  const Eigen::MatrixXd q = p.Q();
  const double denom = g.dot(q * g) + 0.25 * (q * q * q).trace();
  gd::RngStream rng(0, 0);
  CHECK(sqp::optimal_step(p, th, sqp::StepDirection::kSgd, 0, rng) == doctest::Approx(g.squaredNorm() / denom));
  CHECK(sqp::improvement_sgd(p, th) == doctest::Approx(0.5 * g.squaredNorm() * g.squaredNorm() / denom));
  CHECK_THROWS_AS(sqp::improvement_sgd(p, p.x_star()), gd::DomainError);
}

TEST_CASE("ssd optimal step on a noiseless diagonal problem") {
  gd::RngStream rng(8, 8);
  const Eigen::VectorXd lambda = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
  const auto p = sqp::build_problem(lambda, sqp::Orientation::kAxisAligned, 0.0, rng, gd::RealVector::zeros(4));
  CHECK(p.is_diagonal());
  const gd::RealVector th{1.0, -2.0, 0.5, 3.0};
  const gd::RealVector g = p.gradient(th);
  const double expect = (std::abs(g[0]) + std::abs(g[1]) + std::abs(g[2]) + std::abs(g[3])) / 10.0;
  CHECK(sqp::expected_sign_quadratic_form(p, th, 1, rng) == 10.0);
  CHECK(sqp::optimal_step(p, th, sqp::StepDirection::kSsd, 1, rng) == doctest::Approx(expect));
}

TEST_CASE("sign quadratic form estimators") {
  const auto p = rotated(6, 0.9, 9);
  const gd::RealVector th = point(6, 5);
  gd::RngStream rng(9, 9);
  const double mc = sqp::expected_sign_quadratic_form(p, th, 20000, rng);
  const double bound =
      sqp::expected_sign_quadratic_form(p, th, 1, rng, sqp::SsdDenominator::kAbsoluteBound);
  CHECK(bound == doctest::Approx(p.Q().cwiseAbs().sum()));
  CHECK(mc <= bound);
  CHECK(mc >= 2.0 * p.trace() - bound);

  // Without noise the sign pattern is fixed.
  gd::RngStream r2(1, 2);
  const auto noiseless = sqp::QuadraticProblem::from_matrix(p.Q(), p.x_star(), 0.0);
  const Eigen::VectorXd s = gd::sign(noiseless.gradient(th)).eigen();
  CHECK(sqp::expected_sign_quadratic_form(noiseless, th, 5, r2) == doctest::Approx(s.dot(p.Q() * s)));
}

TEST_CASE("ssd bound stays below the simulated improvement") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto p = rotated(4, 0.6, 20 + seed);
    const gd::RealVector th = point(4, seed);
    gd::RngStream rng(seed, 77);
    const double alpha = sqp::optimal_step(p, th, sqp::StepDirection::kSsd, 20000, rng);
    const Eigen::MatrixXd g = p.sample_gradients(th, rng, 40000);
    const double base = p.loss(th);
    double sum = 0.0, sum_sq = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      gd::RealVector step(4);
      for (std::size_t i = 0; i < 4; ++i) step[i] = gd::sign(g(static_cast<Eigen::Index>(i), j));
      const double imp = base - p.loss(th - alpha * step);
      sum += imp;
      sum_sq += imp * imp;
    }
    const double n = static_cast<double>(g.cols());
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(sqp::improvement_ssd_bound(p, th) <= mean + 3.0 * se);
  }
}

TEST_CASE("ssd bound is invariant under a joint coordinate permutation") {
  const auto p = rotated(5, 0.4, 30);
  const gd::RealVector th = point(5, 6);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
  perm.indices() << 3, 0, 4, 1, 2;
  const Eigen::MatrixXd qp = perm * p.Q() * perm.transpose();
  const auto pp = sqp::QuadraticProblem::from_matrix(qp, gd::RealVector(perm * p.x_star().eigen()), 0.4);
  const gd::RealVector thp(perm * th.eigen());
  CHECK(sqp::improvement_ssd_bound(pp, thp) == doctest::Approx(sqp::improvement_ssd_bound(p, th)).epsilon(1e-10));
  CHECK(sqp::improvement_sgd(pp, thp) == doctest::Approx(sqp::improvement_sgd(p, th)).epsilon(1e-10));
}

TEST_CASE("p_diag") {
  CHECK(sqp::p_diag(Eigen::Vector3d(1.0, 2e-9, 7e5).asDiagonal().toDenseMatrix()) == 1.0);
  Eigen::Matrix2d q;
  q << 1.0, -1.0, -1.0, 1.0;
  CHECK(sqp::p_diag(q) == 0.5);
  CHECK_THROWS_AS(sqp::p_diag(Eigen::MatrixXd::Zero(2, 2)), gd::DomainError);
  CHECK_THROWS_AS(sqp::p_diag(Eigen::MatrixXd::Identity(2, 3)), gd::DimensionError);
  gd::RngStream rng(10, 10);
  for (int k = 0; k < 50; ++k) {
    const auto p = rotated(8, 0.0, 100 + static_cast<std::uint64_t>(k));
    const double pd = sqp::p_diag(p.Q());
    CHECK(8.0 * pd >= 1.0);
    CHECK(sqp::p_diag_eigenvector_bound(p.eigenvalues(), p.eigenvectors()) <= pd + 1e-12);
  }
}

TEST_CASE("figure2 cells and determinism") {
  sqp::Figure2Config c;
  c.dim = 8;
  c.well_conditioned = sqp::SpectrumSpec::uniform(8, 0.1, 1.1);
  c.ill_conditioned = sqp::SpectrumSpec::structured(8, 1e-6, 1.0, 0.75, 30.0, 60.0);
  c.noise_levels = {0.0, 4.0};
  c.steps = 20;
  c.seeds = {1, 2};
  c.mc_samples = 50;
  const auto cells = sqp::figure2_cells(c);
  CHECK(cells.size() == 2 * 2 * 2 * 2 * 2);
  CHECK(cells.front().label() == "figure2/well/axis/nu=0");
  const auto serial = sqp::figure2_experiment(c, 1);
  const auto parallel = sqp::figure2_experiment(c, 3);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].rows == parallel[i].rows);
    CHECK(serial[i].meta.experiment == parallel[i].meta.experiment);
  }
  CHECK(serial.front().aux_names == std::vector<std::string>{"suboptimality", "alpha"});
  CHECK(serial.front().rows.size() == 21);
}
