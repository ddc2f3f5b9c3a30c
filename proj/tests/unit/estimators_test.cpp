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
#include <numbers>
#include <vector>

#include "doctest.h"

#include "gradissect/core/error.hpp"
#include "gradissect/core/rng.hpp"
#include "gradissect/estimators/factors.hpp"
#include "gradissect/estimators/moving_average.hpp"
#include "gradissect/estimators/variance.hpp"

namespace gd = gradissect;
namespace est = gradissect::estimators;

namespace {

// Weight of observation s in the debiased average at step t, from the raw
// recursion written out term by term.
double weight_oracle(double beta, int t, int s) {
  return (1.0 - beta) * std::pow(beta, t - s) / (1.0 - std::pow(beta, t + 1));
}

}  // namespace

TEST_CASE("debiased average weights sum to one") {
  for (double beta : {0.0, 0.3, 0.5, 0.9, 0.99}) {
    for (int t = 0; t <= 30; ++t) {
      double total = 0.0;
      for (int s = 0; s <= t; ++s) {
        est::MovingAverage ma(1, beta);
        for (int k = 0; k <= t; ++k) ma.update(gd::RealVector{k == s ? 1.0 : 0.0});
        const double w = ma.debiased()[0];
        CHECK(std::abs(w - weight_oracle(beta, t, s)) <= 1e-12);
        CHECK(std::abs(w - est::ema_weight(beta, t, s)) <= 1e-12);
        total += w;
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("ema first step and beta zero are exact") {
  const gd::RealVector g{0.3, -1.7, 2.0};
  est::EmaState ema(3, 0.9);
  const est::Moments first = ema.update(g);
  CHECK(first.m == g);
  CHECK(first.v == gd::square(g));

  est::EmaState plain(3, 0.0);
  gd::RngStream rng(2, 3);
  for (int k = 0; k < 20; ++k) {
    gd::RealVector x(3);
    for (double& e : x) e = rng.normal();
    const est::Moments mv = plain.update(x);
    CHECK(mv.m == x);
    CHECK(mv.v == gd::square(x));
  }
}

TEST_CASE("ema of a constant is the constant") {
  est::EmaState ema(2, 0.9);
  const gd::RealVector c{1.5, -0.25};
  for (int k = 0; k < 50; ++k) ema.update(c);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(ema.m()[i] == doctest::Approx(c[i]).epsilon(1e-14));
    CHECK(ema.v()[i] == doctest::Approx(c[i] * c[i]).epsilon(1e-14));
  }
  CHECK(ema.step() == 49);
}

TEST_CASE("raw average matches the textbook recursion") {
  gd::RngStream rng(8, 1);
  est::MovingAverage ma(1, 0.8);
  double raw = 0.0;
  for (int k = 0; k < 40; ++k) {
    const double x = rng.normal();
    raw = 0.8 * raw + 0.2 * x;
    ma.update(gd::RealVector{x});
    CHECK(ma.raw()[0] == doctest::Approx(raw).epsilon(1e-12));
    CHECK(ma.debiased()[0] == doctest::Approx(raw / (1.0 - std::pow(0.8, k + 1))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ma.update(gd::RealVector{1.0, 2.0}), gd::DimensionError);
}

TEST_CASE("rho equals the sum of squared weights") {
  for (double beta : {0.5, 0.9, 0.99}) {
    CHECK(est::rho(beta, 0) == 1.0);
    double previous = 2.0;
    for (int t = 0; t <= 20; ++t) {
      double sq = 0.0;
      for (int s = 0; s <= t; ++s) sq += weight_oracle(beta, t, s) * weight_oracle(beta, t, s);
      const double r = est::rho(beta, t);
      CHECK(std::abs(r - sq) <= 1e-12);
      CHECK(r < previous);
      CHECK(r > 0.0);
      previous = r;
    }
  }
  const double b11 = 0.31381059609;  // 0.9^11
  CHECK(std::abs(est::rho(0.9, 10) - 0.1 * (1.0 + b11) / (1.9 * (1.0 - b11))) < 1e-10);
  CHECK(est::rho(0.9, 10) == doctest::Approx(0.10077).epsilon(1e-4));
  CHECK(std::abs(est::rho(0.9, 500) - 1.0 / 19.0) <= 1e-9);
  CHECK_THROWS(est::rho(0.9, -1));
}

TEST_CASE("moving-average variance estimate") {
  const gd::RealVector m{1.0, -2.0}, v{3.0, 4.0};
  CHECK(est::ma_variance_estimate(m, v, 0.9, 0) == gd::RealVector::zeros(2));
  CHECK(est::ma_variance_estimate(m, gd::square(m), 0.9, 7) == gd::RealVector::zeros(2));
  const gd::RealVector s = est::ma_variance_estimate(m, gd::RealVector{0.5, 4.0}, 0.9, 7);
  CHECK(s[0] == 0.0);
  const gd::RealVector s2 = est::ma_variance_estimate(m, v, 0.9, 7);
  CHECK(s2[0] == doctest::Approx(2.0 / (1.0 - est::rho(0.9, 7))));
}

TEST_CASE("mini-batch variance estimate") {
  const std::vector<gd::RealVector> two{gd::RealVector{0.0}, gd::RealVector{2.0}};
  CHECK(est::mb_variance_estimate(two)[0] == doctest::Approx(1.0));
  const std::vector<gd::RealVector> same(5, gd::RealVector{3.0, -1.0});
  CHECK(est::mb_variance_estimate(same) == gd::RealVector::zeros(2));
  const std::vector<gd::RealVector> one{gd::RealVector{1.0}};
  CHECK_THROWS_AS(est::mb_variance_estimate(one), gd::ContractError);

  gd::RngStream rng(4, 4);
  std::vector<gd::RealVector> batch;
  for (int k = 0; k < 9; ++k) batch.push_back(gd::RealVector{1e6 + rng.normal()});
  double mean = 0.0;
  for (const auto& g : batch) mean += g[0] / 9.0;
  double ss = 0.0;
  for (const auto& g : batch) ss += (g[0] - mean) * (g[0] - mean);
  CHECK(est::mb_variance_estimate(batch)[0] == doctest::Approx(ss / 8.0 / 9.0).epsilon(1e-6));
}

TEST_CASE("mini-batch momentum variance matches the explicit weighted sum") {
  for (double beta : {0.5, 0.9}) {
    gd::RngStream rng(6, 6);
    est::MovingAverage r(2, beta * beta);
    std::vector<gd::RealVector> history;
    for (int t = 0; t <= 5; ++t) {
      gd::RealVector s_mb{rng.uniform(), 2.0 * rng.uniform()};
      history.push_back(s_mb);
      const gd::RealVector got = est::mb_momentum_variance(r, s_mb, beta, t);
      for (std::size_t i = 0; i < 2; ++i) {
        double expect = 0.0;
        for (int s = 0; s <= t; ++s) {
          const double c = weight_oracle(beta, t, s);
          expect += c * c * history[static_cast<std::size_t>(s)][i];
        }
        CHECK(std::abs(got[i] - expect) < 1e-12);
      }
      if (t == 0) CHECK(got == s_mb);
    }
  }
  est::MovingAverage r(1, 0.81);
  for (int t = 0; t < 30; ++t) est::mb_momentum_variance(r, gd::RealVector{0.7}, 0.9, t);
  CHECK(r.debiased()[0] == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("svag-family factors") {
  const auto f = est::factor_svag(gd::RealVector{1.0, 1.0, 0.0, 2.0}, gd::RealVector{0.25, 2.25, 0.0, 0.0});
  CHECK(f.gamma[0] == doctest::Approx(0.8));
  CHECK(f.gamma[1] == doctest::Approx(1.0 / 3.25));
  CHECK(f.gamma[2] == 0.0);
  CHECK(f.no_update[2]);
  CHECK_FALSE(f.no_update[0]);
  CHECK(f.gamma[3] == 1.0);
  CHECK(f.any_no_update());

  CHECK(est::factor_msvag(gd::RealVector{1.0}, gd::RealVector{0.0}, 0.9, 0).gamma[0] == 1.0);
  const double r = est::rho(0.9, 2000);
  const double s = 1.0 / r;  // rho * s / m^2 = 1
  CHECK(est::factor_msvag(gd::RealVector{1.0}, gd::RealVector{s}, 0.9, 2000).gamma[0] == doctest::Approx(0.5));
  CHECK(est::factor_msvag(gd::RealVector{1.0}, gd::RealVector{19.0}, 0.9, 2000).gamma[0] ==
        doctest::Approx(0.5).epsilon(1e-6));
  CHECK(est::factor_adam_star(gd::RealVector{1.0}, gd::RealVector{19.0}, 0.9, 2000).gamma[0] ==
        doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-6));
  CHECK(est::factor_adam_star(gd::RealVector{3.0}, gd::RealVector{0.0}, 0.9, 5).gamma[0] == 1.0);
}

TEST_CASE("factor limits") {
  CHECK(est::factor_svag(gd::RealVector{1.0}, gd::RealVector{1e-300}).gamma[0] == 1.0);
  CHECK(est::factor_svag(gd::RealVector{1e-300}, gd::RealVector{1.0}).gamma[0] < 1e-299);
  CHECK(est::factor_msvag(gd::RealVector{1.0}, gd::RealVector{1e300}, 0.9, 3).gamma[0] < 1e-299);
}

TEST_CASE("factors are invariant under joint rescaling") {
  gd::RngStream rng(12, 0);
  for (int k = 0; k < 200; ++k) {
    const double m = rng.normal(), s = rng.uniform(0.0, 3.0);
    const double c = std::ldexp(1.0, static_cast<int>(rng.uniform(-20.0, 20.0)));
    const gd::RealVector m_sq{m * m}, s_hat{s};
    const gd::RealVector m_sq_c{c * c * m * m}, s_hat_c{c * c * s};
    CHECK(est::factor_svag(m_sq, s_hat).gamma == est::factor_svag(m_sq_c, s_hat_c).gamma);
    CHECK(est::factor_msvag(m_sq, s_hat, 0.9, 4).gamma == est::factor_msvag(m_sq_c, s_hat_c, 0.9, 4).gamma);
    CHECK(est::factor_adam_star(m_sq, s_hat, 0.9, 4).gamma ==
          est::factor_adam_star(m_sq_c, s_hat_c, 0.9, 4).gamma);
    const gd::RealVector mv{m}, vv{m * m + s};
    CHECK(est::adam_direction(mv, vv, 0.0) == est::adam_direction(c * mv, c * c * vv, 0.0));
  }
}

TEST_CASE("exact factor minimizes the expected squared distance") {
  gd::RngStream rng(13, 0);
  for (int k = 0; k < 50; ++k) {
    const double p = rng.normal(), sigma = rng.uniform(0.1, 2.0);
    const double gamma = est::factor_exact(gd::RealVector{p}, gd::RealVector{sigma * sigma}).gamma[0];
    // E(gamma g - p)^2 = (gamma - 1)^2 p^2 + gamma^2 sigma^2.
    auto risk = [&](double g) { return (g - 1.0) * (g - 1.0) * p * p + g * g * sigma * sigma; };
    for (double g = 0.0; g <= 1.0; g += 0.01) CHECK(risk(gamma) <= risk(g) + 1e-15);
  }
}

TEST_CASE("success probability") {
  CHECK(est::success_probability(1.0, 0.0) == 1.0);
  CHECK(est::success_probability(0.0, 1.0) == 0.5);
  CHECK_THROWS_AS(est::success_probability(0.0, 0.0), gd::DomainError);
  CHECK(est::success_probability(1.0, 1.0) == doctest::Approx(0.5 + 0.5 * std::erf(1.0 / std::numbers::sqrt2)));
  CHECK(est::success_probability(-1.0, 1.0) == est::success_probability(1.0, 1.0));
  CHECK(est::optimal_sign_factor(0.75) == 0.5);
}

TEST_CASE("adam direction equals sign times variance factor") {
  gd::RngStream rng(1, 1);
  for (int k = 0; k < 1000; ++k) {
    const double m = rng.normal();
    const double v = m * m * (1.0 + 5.0 * rng.uniform());
    const double a = est::adam_direction(gd::RealVector{m}, gd::RealVector{v}, 0.0)[0];
    const double b = est::adam_sign_variance_direction(gd::RealVector{m}, gd::RealVector{v})[0];
    CHECK(std::abs(a - b) <= 1e-12);
  }
  CHECK(est::adam_direction(gd::RealVector{0.0}, gd::RealVector{0.0}, 0.0)[0] == 0.0);
}

TEST_CASE("factor curves") {
  const std::vector<double> grid = est::linear_grid(0.0, 4.0, 0.01);
  REQUIRE(grid.size() == 401);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(4.0));
  const auto rows = est::factor_curves(grid);
  CHECK(rows[0].erf_optimal == 1.0);
  CHECK(rows[0].adam_style == 1.0);
  CHECK(rows[0].svag_style == 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].erf_optimal <= rows[i - 1].erf_optimal);
    CHECK(rows[i].adam_style <= rows[i - 1].adam_style);
    CHECK(rows[i].svag_style <= rows[i - 1].svag_style);
    CHECK(rows[i].svag_style == doctest::Approx(rows[i].adam_style * rows[i].adam_style));
  }
  const std::vector<double> far{1e6};
  const auto tail = est::factor_curves(far);
  CHECK(tail[0].erf_optimal < 1e-5);
  CHECK(tail[0].adam_style < 1e-5);
  CHECK(tail[0].svag_style < 1e-11);
}
