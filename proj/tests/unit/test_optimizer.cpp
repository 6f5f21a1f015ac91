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
#include "optimizer.hpp"
#include "support.hpp"

using namespace sphd;

TEST_SUITE("optimizer") {

TEST_CASE("seeds are partition representatives independent of t") {
  const auto two = seed_points(2, 7, 2);
  CHECK(two.matrix()(2, 0) == doctest::Approx(1.0));
  CHECK(two.matrix()(2, 1) == doctest::Approx(-1.0));
  const auto circle = seed_points(1, 3, 5);
  for (std::size_t i = 0; i + 1 < 5; ++i)
    CHECK(geodesic_distance(circle.point(i), circle.point(i + 1)) == doctest::Approx(2 * std::numbers::pi / 5));
  CHECK((seed_points(3, 1, 40).matrix().array() == seed_points(3, 9, 40).matrix().array()).all());
}

TEST_CASE("square on the circle") {
  FinderConfig cfg;
  cfg.d = 1;
  cfg.t = 3;
  cfg.n = 4;
  const auto r = find_design(cfg);
  CHECK(r.converged);
  CHECK(r.report.defect <= 1e-12);
  // A rotated square: consecutive angular gaps of pi / 2.
  std::vector<double> ang;
  for (std::size_t i = 0; i < 4; ++i) ang.push_back(std::atan2(r.points.point(i)[1], r.points.point(i)[0]));
  std::sort(ang.begin(), ang.end());
  for (std::size_t i = 0; i + 1 < 4; ++i) CHECK(ang[i + 1] - ang[i] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-6));
}

TEST_CASE("finder converges from a perturbed start on the circle") {
  // Few iterations on the first attempt force the loop to show its trace.
  FinderConfig cfg;
  cfg.d = 1;
  cfg.t = 6;
  cfg.n = 9;
  cfg.record_trace = true;
  const auto r = find_design(cfg);
  CHECK(r.converged);
  CHECK(verify_design(KernelModel(1, 6), r.points, 1e-12).verdict);
}

TEST_CASE("octahedron-sized and icosahedron-sized designs") {
  for (auto [t, n] : {std::pair{3, 6}, std::pair{5, 12}, std::pair{4, 14}}) {
    FinderConfig cfg;
    cfg.d = 2;
    cfg.t = t;
    cfg.n = n;
    const auto r = find_design(cfg);
    CHECK(r.converged);
    CHECK(r.report.verdict);
    CHECK(r.report.defect <= 1e-12);
    CHECK(r.report.tolerance == 1e-12);
    CHECK(defect(KernelModel(2, t), r.points) <= 1e-12);
  }
}

TEST_CASE("accepted steps strictly decrease the defect and iterates stay on the sphere") {
  FinderConfig cfg;
  cfg.d = 2;
  cfg.t = 6;
  cfg.n = 49;
  cfg.record_trace = true;
  cfg.restarts = 0;
  const auto r = find_design(cfg);
  REQUIRE(r.trace.size() > 2);
  for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].defect < r.trace[k - 1].defect);
  for (std::size_t i = 0; i < r.points.size(); ++i) CHECK(std::fabs(r.points.point(i).norm() - 1.0) <= 1e-12);
  const auto csv = trace_to_csv(r.trace);
  CHECK(csv.rfind("attempt,iteration,defect,gradientNorm,step\n", 0) == 0);
}

TEST_CASE("plain gradient descent also converges") {
  FinderConfig cfg;
  cfg.d = 2;
  cfg.t = 3;
  cfg.n = 10;
  cfg.conjugate_gradient = false;
  cfg.max_iterations = 50000;
  const auto r = find_design(cfg);
  CHECK(r.converged);
}

TEST_CASE("identical configurations give identical output") {
  FinderConfig cfg;
  cfg.d = 2;
  cfg.t = 4;
  cfg.n = 20;
  cfg.seed = 99;
  const auto a = find_design(cfg);
  const auto b = find_design(cfg);
  CHECK((a.points.matrix().array() == b.points.matrix().array()).all());
  CHECK(a.report.defect == b.report.defect);
}

TEST_CASE("non-convergence is reported, not hidden") {
  FinderConfig cfg;
  cfg.d = 2;
  cfg.t = 8;
  cfg.n = 81;
  cfg.max_iterations = 2;
  cfg.restarts = 1;
  const auto r = find_design(cfg);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.report.verdict);
  CHECK(r.attempts == 2);
  CHECK(r.best_defect > 1e-12);
  const auto j = finder_to_json(cfg, r);
  CHECK(j["finder"]["converged"] == false);
  CHECK(j["verdict"] == false);
}

TEST_CASE("configurations are validated") {
  FinderConfig cfg;
  cfg.d = 2;
  cfg.t = 5;
  cfg.n = 11;
  CHECK_THROWS_AS(find_design(cfg), Error);  // below the lower bound 12
  cfg.n = 12;
  cfg.defect_target = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.defect_target = 1e-12;
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.max_iterations = 10;
  cfg.line_search.shrink = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.line_search.shrink = 0.5;
  cfg.d = 9;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

}
