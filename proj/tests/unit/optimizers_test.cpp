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

#include <cmath>
#include <vector>

#include "doctest.h"

#include "gradissect/core/error.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/optimizers/optimizer.hpp"
#include "gradissect/optimizers/run.hpp"
#include "gradissect/optimizers/schedule.hpp"
#include "gradissect/sqp/quadratic_problem.hpp"

namespace gd = gradissect;
namespace opt = gradissect::optimizers;

namespace {

opt::OptimizerConfig config(opt::Method m, double alpha = 0.1) {
  opt::OptimizerConfig c;
  c.method = m;
  c.alpha = alpha;
  return c;
}

gd::sqp::QuadraticProblem small_problem(double nu) {
  gd::RngStream rng(1, gd::fnv1a("optimizers-test"));
  return gd::sqp::build_problem(gd::sqp::SpectrumSpec::uniform(4, 0.5, 2.0),
                                gd::sqp::Orientation::kRandomRotation, nu, rng);
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (opt::Method m : opt::kAllMethods) CHECK(opt::parse_method(opt::method_name(m)) == m);
  CHECK_THROWS_AS(opt::parse_method("rmsprop"), gd::ContractError);
}

TEST_CASE("plain steps") {
  const gd::RealVector theta0{1.0, 2.0, -1.0};
  const gd::RealVector g{0.5, -3.0, 0.0};
  opt::Optimizer sgd(config(opt::Method::kSgd), theta0);
  CHECK(sgd.step(g) == theta0 - 0.1 * g);
  opt::Optimizer ssd(config(opt::Method::kSsd), theta0);
  CHECK(ssd.step(g) == theta0 - 0.1 * gd::RealVector{1.0, -1.0, 1.0});
  CHECK(ssd.steps_taken() == 1);
}

TEST_CASE("first step of momentum and variance-adapted methods is an sgd step") {
  const gd::RealVector theta0{1.0, 2.0, -1.0};
  const gd::RealVector g{0.5, -3.0, 0.25};
  const gd::RealVector expect = theta0 - 0.1 * g;
  for (opt::Method m : {opt::Method::kMSgd, opt::Method::kSvag, opt::Method::kMSvag}) {
    opt::Optimizer o(config(m), theta0);
    CHECK(o.step(g) == expect);
  }
}

TEST_CASE("no-update coordinates stay put") {
  opt::Optimizer o(config(opt::Method::kMSvag), gd::RealVector{1.0, 1.0});
  o.step(gd::RealVector{0.0, 2.0});
  CHECK(o.theta()[0] == 1.0);
  REQUIRE(o.last_factors());
  CHECK(o.last_factors()->no_update[0]);
  CHECK_FALSE(o.last_factors()->no_update[1]);
}

TEST_CASE("adam first step") {
  opt::OptimizerConfig c = config(opt::Method::kAdam);
  c.epsilon = 0.0;
  opt::Optimizer o(c, gd::RealVector{0.0, 0.0});
  CHECK(o.step(gd::RealVector{0.3, -7.0}) == gd::RealVector{-0.1, 0.1});
}

TEST_CASE("idealized svag without noise is gradient descent") {
  const gd::RealVector theta0{1.0, -2.0};
  const gd::RealVector grad{0.4, 0.6};
  opt::Optimizer o(config(opt::Method::kIdealizedSvag), theta0);
  CHECK(o.sample_request().oracle);
  opt::StepAux aux;
  aux.oracle = opt::VarianceOracle{grad, gd::RealVector::zeros(2)};
  CHECK(o.step(grad, aux) == theta0 - 0.1 * grad);
}

TEST_CASE("missing side information is a contract error") {
  opt::Optimizer ideal(config(opt::Method::kIdealizedSvag), gd::RealVector{1.0});
  CHECK_THROWS_AS(ideal.step(gd::RealVector{1.0}), gd::ContractError);
  opt::OptimizerConfig c = config(opt::Method::kMSvagMb);
  c.batch_size = 4;
  opt::Optimizer mb(c, gd::RealVector{1.0});
  CHECK(mb.sample_request().per_example);
  CHECK_THROWS_AS(mb.step(gd::RealVector{1.0}), gd::ContractError);
  opt::Optimizer sgd(config(opt::Method::kSgd), gd::RealVector{1.0});
  CHECK_THROWS_AS(sgd.step(gd::RealVector{1.0, 2.0}), gd::DimensionError);
}

TEST_CASE("m-ssd steps along the sign of the momentum") {
  gd::RngStream rng(3, 3);
  opt::OptimizerConfig c = config(opt::Method::kMSsd);
  opt::Optimizer o(c, gd::RealVector::zeros(5));
  double m_raw[5] = {0, 0, 0, 0, 0};
  gd::RealVector theta = gd::RealVector::zeros(5);
  for (int k = 0; k < 50; ++k) {
    gd::RealVector g(5);
    for (double& x : g) x = rng.normal() + 0.2;
    for (std::size_t i = 0; i < 5; ++i) {
      m_raw[i] = 0.9 * m_raw[i] + 0.1 * g[i];
      theta[i] -= 0.1 * gd::sign(m_raw[i]);
    }
    o.step(g);
    for (std::size_t i = 0; i < 5; ++i) CHECK(o.theta()[i] == doctest::Approx(theta[i]).epsilon(1e-12));
  }
}

TEST_CASE("step-size schedule") {
  const auto s = opt::StepSizeSchedule::piecewise({10, 20}, 0.5);
  CHECK(s.multiplier(0) == 1.0);
  CHECK(s.multiplier(9) == 1.0);
  CHECK(s.multiplier(10) == 0.5);
  CHECK(s.multiplier(25) == 0.25);
  CHECK(opt::StepSizeSchedule::constant().multiplier(1000) == 1.0);
  opt::OptimizerConfig c = config(opt::Method::kSgd, 1.0);
  c.schedule = opt::StepSizeSchedule::piecewise({1}, 0.5);
  opt::Optimizer o(c, gd::RealVector{0.0});
  o.step(gd::RealVector{1.0});
  o.step(gd::RealVector{1.0});
  CHECK(o.theta()[0] == -1.5);
}

TEST_CASE("run is deterministic and records the evaluation grid") {
  const auto p = small_problem(0.3);
  auto once = [&] {
    opt::Optimizer o(config(opt::Method::kMSvag, 0.05), gd::RealVector{1.0, 1.0, 1.0, 1.0});
    gd::RngStream rng(9, 9);
    return opt::run(o, p, 25, rng, 10, "unit");
  };
  const gd::RunRecord a = once();
  const gd::RunRecord b = once();
  CHECK(a.rows == b.rows);
  REQUIRE(a.rows.size() == 4);
  CHECK(a.rows[0].step == 0);
  CHECK(a.rows[1].step == 10);
  CHECK(a.rows[3].step == 25);
  REQUIRE(a.aux_names.size() == 1);
  CHECK(a.aux_names[0] == "suboptimality");
  CHECK(a.rows[2].aux[0] == doctest::Approx(a.rows[2].loss - *p.optimal_loss()));
  CHECK(a.meta.method == "m-svag");
  CHECK(a.meta.experiment == "unit");
}

TEST_CASE("run record invariants") {
  gd::RunRecord r;
  r.add_row(0, 1.0);
  CHECK_THROWS(r.add_row(0, 1.0));
  CHECK_THROWS(r.add_row(1, std::nan("")));
  r.aux_names = {"x"};
  CHECK_THROWS(r.add_row(2, 1.0));
}

TEST_CASE("all methods make progress on a noiseless quadratic") {
  const auto p = small_problem(0.0);
  for (opt::Method m : opt::kAllMethods) {
    opt::OptimizerConfig c = config(m, 0.05);
    if (m == opt::Method::kMSvagMb) c.batch_size = 4;
    opt::Optimizer o(c, gd::RealVector{1.0, -1.0, 0.5, 2.0});
    gd::RngStream rng(2, 2);
    const gd::RunRecord r = opt::run(o, p, 200, rng, 200);
    CAPTURE(opt::method_name(m));
    CHECK(r.last().loss < 0.5 * r.rows.front().loss);
    CHECK(o.theta().all_finite());
  }
}
