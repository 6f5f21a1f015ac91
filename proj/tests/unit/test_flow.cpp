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
#include "flow.hpp"
#include "support.hpp"

using namespace sphd;

namespace {

// a * G(<e_z, x>) with G(s) = 3s on S^2 at t = 1: |grad| = 3 a sin(theta).
KernelPolynomial linear_section(double a) {
  auto model = std::make_shared<const KernelModel>(2, 1);
  Eigen::MatrixXd v(3, 1);
  v << 0, 0, 1;
  Vector c(1);
  c << a;
  return KernelPolynomial(model, v, c);
}

Vector meridian_point(double theta) {
  Vector x(3);
  x << std::sin(theta), 0.0, std::cos(theta);
  return x;
}

// Below the clamp the flow is theta' = -kappa sin(theta), kappa = 3a / eps,
// solved by tan(theta / 2) = tan(theta0 / 2) exp(-kappa s).
double meridian_theta(double theta0, double kappa, double s) {
  return 2.0 * std::atan(std::tan(theta0 / 2.0) * std::exp(-kappa * s));
}

double meridian_error(int steps, Integrator integ) {
  const double eps = 1.0 / (6.0 * std::sqrt(2.0));
  const double a = 0.25 * eps;  // 3a sin(theta) < eps everywhere
  FlowConfig cfg{eps, 2.0, 1.0, steps, integ};
  const double theta0 = 2.5;
  Eigen::MatrixXd x(3, 1);
  x.col(0) = meridian_point(theta0);
  const auto tr = integrate_flow(linear_section(a), PointConfiguration(2, x), cfg);
  const double expect = meridian_theta(theta0, 3.0 * a / eps, 2.0);
  return geodesic_distance(tr.final.point(0), meridian_point(expect));
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("clamp") {
  const double eps = 0.1;
  CHECK(clamp_h_eps(0.3, eps) == 0.3);
  CHECK(clamp_h_eps(eps, eps) == eps);
  CHECK(clamp_h_eps(0.0, eps) == eps);
  CHECK_THROWS_AS(clamp_h_eps(-1.0, eps), Error);
  CHECK_THROWS_AS(clamp_h_eps(1.0, 0.0), Error);
}

TEST_CASE("defaults") {
  const auto c = FlowConfig::defaults(2, 3);
  CHECK(c.epsilon == doctest::Approx(1.0 / (6.0 * std::sqrt(2.0))));
  CHECK(c.horizon == doctest::Approx(1.0 / 9.0));
  CHECK(c.steps == 64);
  CHECK(FlowConfig::defaults(4, 2, 0.5).horizon == doctest::Approx(0.5 / 6.0));
  FlowConfig bad = c;
  bad.steps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("field magnitude on both sides of the clamp") {
  const double eps = 0.1;
  // |grad P| = 3a at the equator.
  const auto above = linear_section(2 * eps / 3.0);
  CHECK(flow_field(above, meridian_point(std::numbers::pi / 2), eps).norm() == doctest::Approx(1.0));
  const auto below = linear_section(eps / 6.0);
  CHECK(flow_field(below, meridian_point(std::numbers::pi / 2), eps).norm() == doctest::Approx(0.5));
}

TEST_CASE("field is tangent and never longer than one") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 2000; ++k) {
    const int d = 1 + k % 4;
    auto model = std::make_shared<const KernelModel>(d, 1 + k % 5);
    Rng r(static_cast<std::uint64_t>(k));
    const auto p = sample_kernel_polynomial(model, 5, r);
    const auto y = testing::random_unit(d, rng);
    const auto u = flow_field(p, y, 1.0 / (6.0 * std::sqrt(d)));
    CHECK(u.norm() <= 1.0 + 1e-15);
    CHECK(std::fabs(u.dot(y)) < 1e-12);
  }
}

TEST_CASE("meridian flow matches the closed form with fourth-order convergence") {
  double prev = meridian_error(8, Integrator::ProjectedRK4);
  for (int steps : {16, 32, 64}) {
    const double err = meridian_error(steps, Integrator::ProjectedRK4);
    CHECK(std::log2(prev / err) >= 3.5);
    prev = err;
  }
  CHECK(prev < 1e-8);
  const double e1 = meridian_error(64, Integrator::ProjectedEuler);
  const double e2 = meridian_error(128, Integrator::ProjectedEuler);
  CHECK(std::log2(e1 / e2) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("traces: displacement, monotone averages, unit norms") {
  auto model = std::make_shared<const KernelModel>(2, 3);
  const auto rule = build_quadrature(2, 32);
  const auto part = equal_area_partition(2, 100);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = sample_boundary_polynomial(model, rule, 30, seed);
    const auto cfg = FlowConfig::defaults(2, 3);
    const auto tr = integrate_flow(p, part.representatives(), cfg);
    REQUIRE(tr.s.size() == 65);
    CHECK(tr.s.back() == doctest::Approx(cfg.horizon));
    for (double e : tr.max_excess) CHECK(e <= 1e-9);
    for (std::size_t k = 0; k + 1 < tr.averages.size(); ++k) CHECK(tr.averages[k + 1] >= tr.averages[k]);
    for (double dv : tr.derivatives) CHECK(dv >= 0.0);
    for (std::size_t i = 0; i < tr.final.size(); ++i) {
      CHECK(std::fabs(tr.final.point(i).norm() - 1.0) <= 1e-12);
      CHECK(tr.displacements[i] <= cfg.horizon + 1e-9);
    }
    CHECK(tr.max_tangency < 1e-12);
  }
}

TEST_CASE("dimension mismatch") {
  const auto p = linear_section(1.0);
  Eigen::MatrixXd x(2, 1);
  x << 1, 0;
  CHECK_THROWS_AS(integrate_flow(p, PointConfiguration(1, x), FlowConfig::defaults(2, 1)), Error);
}

TEST_CASE("small positivity experiment") {
  Lemma1Config cfg;
  cfg.n = 100;
  cfg.trials = 4;
  cfg.rule_resolution = 32;
  const auto r = lemma1_experiment(cfg);
  CHECK(r.trials.size() == 4);
  CHECK(r.config.anchors == 30);
  CHECK(r.epsilon == doctest::Approx(1.0 / (6.0 * std::sqrt(2.0))));
  CHECK(r.mesh_threshold == doctest::Approx(1.0 / 324.0));
  CHECK_FALSE(r.mesh_condition);
  int pos = 0;
  for (const auto& t : r.trials) {
    pos += t.positive;
    CHECK(t.monotone);
    CHECK(t.max_excess <= 1e-9);
  }
  CHECK(pos == r.positive_count);
  CHECK(r.max_step_halving < 1e-5);  // the kink in h_eps limits the order, not RK4

  const auto again = lemma1_experiment(cfg);
  CHECK(again.trials[2].final_average == r.trials[2].final_average);
  const auto tr = lemma1_trial_trace(cfg, 2);
  CHECK(tr.averages.back() == r.trials[2].final_average);
  CHECK(flow_trace_to_csv(tr).rfind("s,average,derivative,maxExcess\n", 0) == 0);
  const auto j = lemma1_to_json(r);
  CHECK(j["trials"].size() == 4);
}

}
