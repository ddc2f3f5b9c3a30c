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
#include <set>
#include <vector>

#include "doctest.h"

#include "gradissect/core/erf.hpp"
#include "gradissect/core/error.hpp"
#include "gradissect/core/parallel.hpp"
#include "gradissect/core/real_vector.hpp"
#include "gradissect/core/rng.hpp"

namespace gd = gradissect;

namespace {

// Composite Simpson on 2/sqrt(pi) exp(-t^2) in extended precision.
long double erf_quadrature(long double x) {
  const int n = 40000;
  const long double h = x / n;
  long double s = 1.0L + std::exp(-x * x);
  for (int k = 1; k < n; ++k) {
    const long double t = h * k;
    s += (k % 2 ? 4.0L : 2.0L) * std::exp(-t * t);
  }
  return s * h / 3.0L * 2.0L / std::sqrt(std::numbers::pi_v<long double>);
}

}  // namespace

TEST_CASE("sign maps zero to plus one") {
  const gd::RealVector s = gd::sign(gd::RealVector{-2.0, 0.0, 3.0});
  CHECK(s == gd::RealVector{-1.0, 1.0, 1.0});
  CHECK(gd::sign(-0.0) == 1.0);
}

TEST_CASE("sign is idempotent") {
  gd::RngStream rng(3, 4);
  for (int k = 0; k < 100; ++k) {
    gd::RealVector v(7);
    for (double& x : v) x = rng.normal();
    if (k % 3 == 0) v[2] = 0.0;
    const gd::RealVector s = gd::sign(v);
    CHECK(gd::sign(s) == s);
    CHECK(gd::hadamard(s, gd::abs(v)) == v);
    for (double x : s) CHECK(std::abs(x) == 1.0);
  }
}

TEST_CASE("element-wise algebra") {
  CHECK(gd::square(gd::RealVector{0.0, 0.0}) == gd::RealVector{0.0, 0.0});
  CHECK(gd::divide(gd::RealVector{1.0, 4.0}, gd::RealVector{2.0, 8.0}) == gd::RealVector{0.5, 0.5});
  CHECK(gd::elementwise(gd::ElementwiseOp::kMul, gd::RealVector{2.0, 3.0}, 2.0) == gd::RealVector{4.0, 6.0});
  CHECK(gd::sqrt(gd::RealVector{4.0, 9.0}) == gd::RealVector{2.0, 3.0});
  CHECK(gd::dot(gd::RealVector{1.0, 2.0}, gd::RealVector{3.0, 4.0}) == 11.0);
  CHECK(gd::norm(gd::RealVector{3.0, 4.0}) == 5.0);
  CHECK(gd::sum(gd::RealVector{1.0, -2.0, 4.0}) == 3.0);
  CHECK((gd::RealVector{1.0, 2.0} - gd::RealVector{1.0, 1.0}) == gd::RealVector{0.0, 1.0});
  CHECK((2.0 * gd::RealVector{1.0, -1.0}) == gd::RealVector{2.0, -2.0});
}

TEST_CASE("element-wise errors") {
  CHECK_THROWS_AS(gd::RealVector({1.0}) + gd::RealVector({1.0, 2.0}), gd::DimensionError);
  CHECK_THROWS_AS(gd::dot(gd::RealVector{1.0}, gd::RealVector{1.0, 2.0}), gd::DimensionError);
  CHECK_THROWS_AS(gd::divide(gd::RealVector{1.0, 1.0}, gd::RealVector{1.0, 0.0}), gd::DomainError);
  CHECK_THROWS_AS(gd::sqrt(gd::RealVector{-1.0}), gd::DomainError);
}

TEST_CASE("erf against quadrature") {
  CHECK(gd::erf(0.0) == 0.0);
  CHECK(std::abs(gd::erf(1.0 / std::numbers::sqrt2) - 0.682689492137086) < 1e-12);
  double worst = 0.0;
  for (double x = 0.01; x <= 6.0; x += 0.0731) {
    worst = std::max(worst, std::abs(gd::erf(x) - static_cast<double>(erf_quadrature(x))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("erf against the standard library and odd symmetry") {
  gd::RngStream rng(1, 2);
  for (int k = 0; k < 20000; ++k) {
    const double x = rng.uniform(-8.0, 8.0);
    CHECK(std::abs(gd::erf(x) - std::erf(x)) <= 1e-12);
    CHECK(gd::erf(-x) == -gd::erf(x));
  }
  CHECK(gd::erf(40.0) == 1.0);
  CHECK(std::abs(gd::normal_cdf(0.0) - 0.5) == 0.0);
}

TEST_CASE("gauss sample") {
  gd::RngStream rng(11, gd::fnv1a("test"));
  const gd::RealVector mean{1.0, -2.0};
  CHECK(gd::gauss_sample(rng, mean, gd::RealVector::zeros(2)) == mean);
  CHECK_THROWS_AS(gd::gauss_sample(rng, mean, gd::RealVector{1.0, -1.0}), gd::ContractError);

  const int n = 100000;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += gd::gauss_sample(rng, gd::RealVector{1.0}, gd::RealVector{1.0})[0];
  CHECK(std::abs(s / n - 1.0) < 0.02);
}

TEST_CASE("streams are reproducible and distinct") {
  gd::RngStream a(5, 9), b(5, 9), c(5, 10), d(6, 9);
  const gd::RealVector ones = gd::RealVector::ones(16);
  const gd::RealVector va = gd::gauss_sample(a, gd::RealVector::zeros(16), ones);
  CHECK(va == gd::gauss_sample(b, gd::RealVector::zeros(16), ones));
  CHECK_FALSE(va == gd::gauss_sample(c, gd::RealVector::zeros(16), ones));
  CHECK_FALSE(va == gd::gauss_sample(d, gd::RealVector::zeros(16), ones));
  CHECK(gd::RngStream(5, 9).fork(1).next_u64() == gd::RngStream(5, 9).fork(1).next_u64());
  CHECK(gd::RngStream(5, 9).fork(1).next_u64() != gd::RngStream(5, 9).fork(2).next_u64());
}

TEST_CASE("uniform stays in range") {
  gd::RngStream rng(0, 0);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("fnv1a reference values") {
  CHECK(gd::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(gd::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("parallel_map keeps index order") {
  for (std::size_t workers : {1u, 2u, 7u}) {
    const auto out = gd::parallel_map<int>(50, workers, [](std::size_t i) { return static_cast<int>(i * i); });
    REQUIRE(out.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) CHECK(out[i] == static_cast<int>(i * i));
  }
  CHECK_THROWS_AS(gd::parallel_map<int>(10, 3,
                                        [](std::size_t i) -> int {
                                          if (i == 4) throw gd::DomainError("boom");
                                          return 0;
                                        }),
                  gd::DomainError);
}
