/*
 * Copyright 2026 The sphdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "mz.hpp"
#include "support.hpp"

using namespace sphd;
constexpr double kPi = std::numbers::pi;

TEST_SUITE("mz") {

TEST_CASE("constants have ratio exactly one") {
  const auto part = equal_area_partition(2, 500);
  const auto rule = build_quadrature(2, 4);
  const auto r = mz_check(rule, part, part.representatives(), [](const Eigen::Ref<const Vector>&) { return 1.0; }, 0);
  CHECK(r.ratio == 1.0);
  CHECK(r.within_bounds);
  CHECK(r.converged);
}

TEST_CASE("cos(k theta) on the circle against direct summation") {
  for (int k : {1, 2, 3}) {
    for (int n : {2 * k + 1, 10, 64}) {
      const auto part = equal_area_partition(1, n);
      const auto& pts = part.representatives();
      double direct = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        direct += std::fabs(std::cos(k * std::atan2(pts.point(i)[1], pts.point(i)[0])));
      direct /= n;
      const auto rule = build_quadrature(1, k + 2);
      const auto r = mz_check(rule, part, pts, [k](const Eigen::Ref<const Vector>& x) {
        return std::cos(k * std::atan2(x[1], x[0]));
      }, k, {1.0, 1e-8, 4096});
      CHECK(r.discrete == doctest::Approx(direct).epsilon(1e-13));
      CHECK(r.continuous == doctest::Approx(2.0 / kPi).epsilon(1e-6));
      CHECK(r.ratio == doctest::Approx(direct * kPi / 2.0).epsilon(1e-6));
      CHECK(r.within_bounds);
    }
  }
}

TEST_CASE("scaling the polynomial leaves the ratio unchanged") {
  auto model = std::make_shared<const KernelModel>(2, 4);
  Rng rng(5);
  const auto p = sample_kernel_polynomial(model, 30, rng);
  const auto part = equal_area_partition(2, 300);
  const auto rule = build_quadrature(2, 6);
  const auto base = mz_check(rule, part, part.representatives(), p);
  const auto gbase = mz_gradient_check(rule, part, part.representatives(), p);
  for (double c : {2.0, 0.25, -8.0}) {
    CHECK(mz_check(rule, part, part.representatives(), p.scaled(c)).ratio == base.ratio);
    CHECK(mz_gradient_check(rule, part, part.representatives(), p.scaled(c)).ratio == gbase.ratio);
  }
  CHECK(mz_check(rule, part, part.representatives(), p.scaled(3.0)).ratio == doctest::Approx(base.ratio).epsilon(1e-14));
}

TEST_CASE("zero polynomials are flagged degenerate") {
  const auto part = equal_area_partition(2, 20);
  const auto rule = build_quadrature(2, 3);
  const auto r = mz_check(rule, part, part.representatives(), [](const Eigen::Ref<const Vector>&) { return 0.0; }, 2);
  CHECK(r.degenerate);
  CHECK_FALSE(r.within_bounds);
}

TEST_CASE("points must match the cells") {
  const auto part = equal_area_partition(2, 20);
  const auto rule = build_quadrature(2, 3);
  auto one = [](const Eigen::Ref<const Vector>&) { return 1.0; };
  const auto fewer = equal_area_partition(2, 19).representatives();
  CHECK_THROWS_AS(mz_check(rule, part, fewer, one, 1), Error);
  const Eigen::MatrixXd flipped = -part.representatives().matrix();
  CHECK_THROWS_AS(mz_check(rule, part, PointConfiguration(2, flipped), one, 1), Error);
  CHECK_THROWS_AS(mz_check(build_quadrature(3, 3), part, part.representatives(), one, 1), Error);
}

TEST_CASE("gradient ratio of a linear section") {
  auto model = std::make_shared<const KernelModel>(2, 1);
  Eigen::MatrixXd v(3, 1);
  v << 0, 0, 1;
  const KernelPolynomial p(model, v, Vector::Ones(1));
  for (int n : {100, 1000}) {
    const auto part = equal_area_partition(2, n);
    const auto r = mz_gradient_check(build_quadrature(2, 3), part, part.representatives(), p, {1.0, 1e-8, 1024});
    CHECK(r.continuous == doctest::Approx(3 * kPi / 4).epsilon(1e-5));
    CHECK(r.lower == doctest::Approx(1.0 / (3.0 * std::sqrt(2.0))));
    CHECK(r.upper == doctest::Approx(3.0 * std::sqrt(2.0)));
    CHECK(r.within_bounds);
    CHECK(r.threshold == doctest::Approx(0.5));
  }
}

TEST_CASE("gradient bounds on the circle") {
  auto model = std::make_shared<const KernelModel>(1, 1);
  Eigen::MatrixXd v(2, 1);
  v << 1, 0;
  const KernelPolynomial p(model, v, Vector::Ones(1));
  for (int n : {4, 9, 50}) {
    const auto part = equal_area_partition(1, n);
    const auto r = mz_gradient_check(build_quadrature(1, 3), part, part.representatives(), p);
    CHECK(r.lower == doctest::Approx(1.0 / 3.0));
    CHECK(r.upper == doctest::Approx(3.0));
    CHECK(r.within_bounds);
  }
}

TEST_CASE("gradient components integrate like degree m + 1 polynomials") {
  auto model = std::make_shared<const KernelModel>(2, 4);
  Rng rng(3);
  const auto p = sample_kernel_polynomial(model, 20, rng);
  const auto exact = build_quadrature(2, 3);  // exact through degree 5 = m + 1
  const auto fine = build_quadrature(2, 12);
  for (int j = 0; j < 3; ++j) {
    auto comp = [&](const Eigen::Ref<const Vector>& x) { return p.gradient(x)[j]; };
    CHECK(std::fabs(integrate(exact, comp) - integrate(fine, comp)) < 1e-10);
  }
}

TEST_CASE("sweep rows and CSV") {
  MZSweepConfig cfg;
  cfg.m = 2;
  cfg.counts = {200, 400};
  cfg.trials = 3;
  const auto rows = mz_sweep(cfg);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.value.within_bounds);
    CHECK(r.gradient.within_bounds);
    CHECK(r.value.resolution <= 128);
  }
  const auto csv = mz_to_csv(rows);
  CHECK(csv.rfind("d,m,N,meshNorm,ratio,withinBounds", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  const auto again = mz_sweep(cfg);
  CHECK(again[4].value.ratio == rows[4].value.ratio);
}

TEST_CASE("mesh condition bookkeeping") {
  MZSweepConfig cfg;
  cfg.m = 5;
  cfg.trials = 1;
  const auto rows = mz_sweep(cfg);
  CHECK(rows[0].value.mesh_norm < 0.2);
  CHECK(rows[0].value.condition_satisfied);
  CHECK(rows[0].value.threshold == doctest::Approx(0.2));
  CHECK(rows[0].gradient.threshold == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("threshold bisection") {
  const auto t = estimate_mesh_threshold(2, 1, 2, 1, 2, 64);
  CHECK(t.found);
  CHECK(t.n >= 2);
  CHECK(t.n <= 64);
  CHECK(t.empirical_r == doctest::Approx(t.mesh_norm * 2));
}

}
