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
// Acceptance harness: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "design.hpp"
#include "flow.hpp"
#include "kernel.hpp"
#include "mz.hpp"
#include "optimizer.hpp"
#include "partition.hpp"
#include "quadrature.hpp"
#include "sphere.hpp"

using namespace sphd;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream details;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details << " [fail: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const char* name, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.require(secs < limit_seconds, "runtime over " + std::to_string(limit_seconds) + " s");
  if (!out.pass) ++failures;
  std::printf("%s %d %s (%s; %.2f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.details.str().c_str(), secs);
  std::fflush(stdout);
}

double rel_err(double a, double b) {
  const double s = std::max(std::fabs(a), std::fabs(b));
  return s == 0.0 ? 0.0 : std::fabs(a - b) / s;
}

Vector random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vector v(d + 1);
  for (auto& x : v) x = n(rng);
  return v / v.norm();
}

PointConfiguration random_points(int d, int n, std::mt19937_64& rng) {
  Eigen::MatrixXd m(d + 1, n);
  for (int i = 0; i < n; ++i) m.col(i) = random_unit(d, rng);
  return PointConfiguration(d, std::move(m));
}

// Harmonic dimensions from monomial counts in d + 1 variables.
std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t homogeneous(int d, int k) { return k < 0 ? 0 : choose(static_cast<std::uint64_t>(k + d), d); }

std::uint64_t harmonic_by_monomials(int d, int k) { return homogeneous(d, k) - homogeneous(d, k - 2); }

std::uint64_t lower_bound_oracle(int d, int t) {
  auto parity = [&](int k, int par) {
    std::uint64_t s = 0;
    for (int j = 0; j <= k; ++j)
      if (j % 2 == par) s += harmonic_by_monomials(d, j);
    return s;
  };
  const int k = t / 2;
  return t % 2 == 0 ? parity(k, 0) + parity(k, 1) : 2 * parity(k, k % 2);
}

void lower_bounds(Outcome& out) {
  int checked = 0;
  for (int d = 1; d <= 5; ++d)
    for (int t = 1; t <= 12; ++t) {
      ++checked;
      out.require(lower_bound(d, t) == lower_bound_oracle(d, t),
                  "d=" + std::to_string(d) + " t=" + std::to_string(t));
    }
  for (int t = 1; t <= 12; ++t) out.require(lower_bound(1, t) == static_cast<std::uint64_t>(t + 1), "(1,t) -> t+1");
  out.require(lower_bound(2, 2) == 4, "(2,2) -> 4");
  out.require(lower_bound(2, 3) == 6, "(2,3) -> 6");
  out.require(lower_bound(3, 5) == 20, "(3,5) -> 20");
  out.details << checked << " table entries, spot values exact";
}

void fixtures(Outcome& out) {
  constexpr double tol = 1e-10;
  double worst_poly = 0.0, min_fail = INFINITY;
  for (int t = 1; t <= 20; ++t) {
    const auto p = catalog_design("polygon(" + std::to_string(t + 1) + ")");
    const auto ok = verify_design(KernelModel(1, t), p, tol);
    const auto bad = verify_design(KernelModel(1, t + 1), p, tol);
    worst_poly = std::max(worst_poly, ok.defect);
    min_fail = std::min(min_fail, bad.defect);
    out.require(ok.verdict, "polygon(" + std::to_string(t + 1) + ") at t=" + std::to_string(t));
    out.require(!bad.verdict && bad.defect > 0.1, "polygon(" + std::to_string(t + 1) + ") fails at t+1");
  }
  const auto oct = catalog_design("octahedron");
  const auto o3 = verify_design(KernelModel(2, 3), oct, tol);
  const auto o4 = verify_design(KernelModel(2, 4), oct, tol);
  out.require(o3.verdict, "octahedron t=3");
  out.require(!o4.verdict && std::fabs(o4.defect - 5.25) <= 1e-9, "octahedron t=4 defect 5.25");
  const auto ico = verify_design(KernelModel(2, 5), catalog_design("icosahedron"), tol);
  out.require(ico.verdict, "icosahedron t=5");
  const auto d4 = catalog_design("d4-minimal-vectors");
  const auto d4r = verify_design(KernelModel(3, 5), d4, tol);
  out.require(d4.size() == 24 && d4r.verdict, "D4 minimal vectors t=5");
  out.details << "polygons max defect " << worst_poly << ", min defect at t+1 " << min_fail << "; octahedron "
              << o3.defect << " / " << o4.defect << "; icosahedron " << ico.defect << "; D4 " << d4r.defect;
}

void kernel_checks(Outcome& out) {
  std::mt19937_64 rng(2026);
  // Reproducing property against random Q in the zero-mean part of P_10.
  auto model = std::make_shared<const KernelModel>(2, 10);
  const auto rule = build_quadrature(2, 11);  // exact through degree 21
  double worst_rep = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng r(static_cast<std::uint64_t>(trial) + 1);
    const auto q = sample_kernel_polynomial(model, 8, r);
    const Vector x = random_unit(2, rng);
    const double lhs = integrate(rule, [&](const Eigen::Ref<const Vector>& y) {
      return model->G(std::clamp(x.dot(y), -1.0, 1.0)) * q.value(y);
    });
    worst_rep = std::max(worst_rep, rel_err(lhs, q.value(x)));
  }
  out.require(worst_rep <= 1e-8, "reproducing property");

  // Parseval split on random configurations of varied size.
  double worst_split = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 4;
    const int t = 2 + k % 7;
    const auto x = random_points(d, 5 + 3 * k, rng);
    const KernelModel m(d, t);
    const auto rho = degree_residuals(m, x);
    double split = 0.0;
    for (double v : rho) split += v;
    worst_split = std::max(worst_split, rel_err(split, defect(m, x)));
  }
  out.require(worst_split <= 1e-10, "Parseval split");

  // Explicit real harmonic basis on S^2.
  double worst_basis = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int t = 1 + k % 10;
    const auto x = random_points(2, 4 + 2 * k, rng);
    const auto r = verify_design(KernelModel(2, t), x);
    if (!r.harmonic_check) {
      out.require(false, "missing harmonic check");
      break;
    }
    worst_basis = std::max(worst_basis, r.harmonic_check->relative_gap);
    out.require(r.harmonic_check->agrees, "harmonic check flag");
  }
  out.require(worst_basis <= 1e-9, "explicit basis");
  out.details << "reproducing " << worst_rep << ", split " << worst_split << ", basis " << worst_basis;
}

void partitions(Outcome& out) {
  const std::vector<int> counts{10, 100, 1000, 10000};
  double worst_area = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (int n : counts) {
      const auto p = equal_area_partition(d, n);
      for (const auto& c : p.cells()) worst_area = std::max(worst_area, std::fabs(c.area - 1.0 / n));
    }
    const auto bd = measure_diameter_constant(d, counts);
    const auto [lo, hi] = std::minmax_element(bd.scaled_norms.begin(), bd.scaled_norms.end());
    out.require(std::isfinite(bd.constant) && *hi <= bd.constant, "finite constant d=" + std::to_string(d));
    out.require(*hi / *lo < 1.5, "scaled norm spread d=" + std::to_string(d));
    out.details << "B_" << d << "=" << bd.constant << " (spread " << *hi / *lo << ")";
    if (d == 2) {
      double mean = 0.0;
      for (double v : bd.scaled_norms) mean += v / bd.scaled_norms.size();
      double dev = 0.0;
      for (double v : bd.scaled_norms) dev = std::max(dev, std::fabs(v / mean - 1.0));
      out.require(dev <= 0.05, "B_2 stable within 5%");
      out.details << " [S^2 scaled norms";
      for (double v : bd.scaled_norms) out.details << " " << v;
      out.details << ", max deviation " << 100 * dev << "%]";
    }
    out.details << "; ";
  }
  out.require(worst_area <= 1e-9, "areas");
  out.details << "max area error " << worst_area;
}

KernelPolynomial linear_section(double a) {
  auto model = std::make_shared<const KernelModel>(2, 1);
  Eigen::MatrixXd v(3, 1);
  v << 0, 0, 1;
  Vector c(1);
  c << a;
  return KernelPolynomial(model, v, c);
}

double meridian_error(int steps) {
  const double eps = 1.0 / (6.0 * std::sqrt(2.0));
  const double a = 0.25 * eps;
  const double theta0 = 2.5, horizon = 2.0;
  FlowConfig cfg{eps, horizon, 1.0, steps, Integrator::ProjectedRK4};
  auto point = [](double th) {
    Vector x(3);
    x << std::sin(th), 0.0, std::cos(th);
    return x;
  };
  Eigen::MatrixXd x(3, 1);
  x.col(0) = point(theta0);
  const auto tr = integrate_flow(linear_section(a), PointConfiguration(2, x), cfg);
  const double kappa = 3.0 * a / eps;
  const double expect = 2.0 * std::atan(std::tan(theta0 / 2.0) * std::exp(-kappa * horizon));
  return geodesic_distance(tr.final.point(0), point(expect));
}

void flow_suite(Outcome& out) {
  std::mt19937_64 rng(5);
  double max_norm = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const int d = 1 + k % 4;
    auto model = std::make_shared<const KernelModel>(d, 1 + k % 6);
    Rng r(static_cast<std::uint64_t>(k) + 1);
    const auto p = sample_kernel_polynomial(model, 6, r);
    const Vector y = random_unit(d, rng);
    max_norm = std::max(max_norm, flow_field(p, y, 1.0 / (6.0 * std::sqrt(d))).norm());
  }
  // g / |g| can round one ulp above 1.
  out.require(max_norm <= 1.0 + 4 * std::numeric_limits<double>::epsilon(), "field norm");

  double worst_excess = -INFINITY;
  int monotone = 0, traces = 0;
  for (int d = 1; d <= 3; ++d) {
    auto model = std::make_shared<const KernelModel>(d, 3);
    const auto rule = build_quadrature(d, 32);
    const auto part = equal_area_partition(d, 200);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto p = sample_boundary_polynomial(model, rule, 2 * static_cast<int>(model->space_dim()), seed);
      const auto tr = integrate_flow(p, part.representatives(), FlowConfig::defaults(d, 3));
      ++traces;
      for (double e : tr.max_excess) worst_excess = std::max(worst_excess, e);
      bool mono = true;
      for (std::size_t k = 0; k + 1 < tr.averages.size(); ++k) mono = mono && tr.averages[k + 1] >= tr.averages[k];
      monotone += mono;
    }
  }
  out.require(worst_excess <= 1e-9, "displacement");
  out.require(monotone == traces, "monotone averages");

  double min_order = INFINITY;
  double prev = meridian_error(8);
  for (int steps : {16, 32, 64}) {
    const double err = meridian_error(steps);
    min_order = std::min(min_order, std::log2(prev / err));
    prev = err;
  }
  out.require(min_order >= 3.5, "RK4 order");
  out.details << "max |U| - 1 = " << max_norm - 1.0 << " over 10^4; max displacement excess " << worst_excess << "; monotone "
              << monotone << "/" << traces << "; RK4 order " << min_order;
}

void lemma1(Outcome& out) {
  const auto r = lemma1_experiment(Lemma1Config{});
  out.require(r.positive_count >= 49, "positivity");
  out.require(r.slope_count == r.positive_count, "derivative bound in passing trials");
  out.details << "positive " << r.positive_count << "/" << r.trials.size() << ", slope bound held in "
              << r.slope_count << ", min slope margin " << r.min_slope_margin << ", min final average "
              << r.min_final_average << ", max step-halving change " << r.max_step_halving << ", mesh condition " << (r.mesh_condition ? "held" : "not held") << " (norm "
              << r.partition_norm << " vs " << r.mesh_threshold << ")";
  for (const auto& t : r.trials)
    if (!t.positive || !t.slope_holds)
      out.details << "; trial seed " << t.seed << " final " << t.final_average << " slope margin "
                  << t.min_slope - r.slope_bound;
}

void mz(Outcome& out) {
  const auto part = equal_area_partition(2, 2000);
  const auto& reps = part.representatives();
  const MZOptions opt{1.0, 1e-8, 128};
  const auto rule = build_quadrature(2, 4);
  const auto constant = mz_check(rule, part, reps, [](const Eigen::Ref<const Vector>&) { return 1.0; }, 0, opt);
  out.require(constant.ratio == 1.0, "constant ratio");
  out.details << "constant ratio " << constant.ratio;

  for (int m = 1; m <= 5; ++m) {
    MZSweepConfig cfg;
    cfg.m = m;
    const auto rows = mz_sweep(cfg);
    int value_ok = 0, grad_ok = 0, both = 0;
    double lo = INFINITY, hi = 0.0, glo = INFINITY, ghi = 0.0;
    for (const auto& row : rows) {
      value_ok += row.value.within_bounds;
      grad_ok += row.gradient.within_bounds;
      both += row.value.within_bounds && row.gradient.within_bounds;
      lo = std::min(lo, row.value.ratio);
      hi = std::max(hi, row.value.ratio);
      glo = std::min(glo, row.gradient.ratio);
      ghi = std::max(ghi, row.gradient.ratio);
    }
    out.require(both >= 99, "m=" + std::to_string(m));
    out.details << "; m=" << m << " " << both << "/" << rows.size() << " (value [" << lo << ", " << hi
                << "], gradient [" << glo << ", " << ghi << "])";
  }

  auto model = std::make_shared<const KernelModel>(2, 5);
  const auto prule = build_quadrature(2, 7);
  bool exact = true;
  double approx = 0.0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    Rng r(s);
    const auto p = sample_kernel_polynomial(model, 72, r);
    const double base = mz_check(prule, part, reps, p, opt).ratio;
    for (double c : {2.0, 0.25, -8.0}) exact = exact && mz_check(prule, part, reps, p.scaled(c), opt).ratio == base;
    approx = std::max(approx, rel_err(mz_check(prule, part, reps, p.scaled(3.0), opt).ratio, base));
  }
  out.require(exact, "ratio(cP) = ratio(P)");
  out.details << "; scale invariance exact for c in {2, 1/4, -8}, c=3 rel diff " << approx;
}

void finder(Outcome& out) {
  struct Case {
    int d, t, n;
  };
  std::vector<Case> cases;
  for (int t = 1; t <= 20; ++t) cases.push_back({1, t, t + 1});
  for (int t = 1; t <= 8; ++t) cases.push_back({2, t, (t + 1) * (t + 1)});
  cases.push_back({2, 5, 12});
  int ok = 0;
  double worst = 0.0;
  int max_attempts = 0;
  for (const auto& c : cases) {
    FinderConfig cfg;
    cfg.d = c.d;
    cfg.t = c.t;
    cfg.n = c.n;
    cfg.restarts = 5;
    const auto r = find_design(cfg);
    const auto check = verify_design(KernelModel(c.d, c.t), r.points, 1e-12);
    const bool good = r.converged && check.verdict && check.defect <= 1e-12;
    ok += good;
    worst = std::max(worst, check.defect);
    max_attempts = std::max(max_attempts, r.attempts);
    out.require(good, "(" + std::to_string(c.d) + "," + std::to_string(c.t) + "," + std::to_string(c.n) + ") defect " +
                          std::to_string(check.defect));
  }
  out.details << ok << "/" << cases.size() << " cases, max verified defect " << worst << ", max attempts "
              << max_attempts;
}

void gradient_oracle(Outcome& out) {
  std::mt19937_64 rng(909);
  std::normal_distribution<double> nd;
  const KernelModel m(2, 4);
  const double h = 1e-4;
  double worst = 0.0;
  for (int c = 0; c < 20; ++c) {
    const auto x = random_points(2, 10, rng);
    const Eigen::MatrixXd g = defect_gradient(m, x);
    for (int k = 0; k < 20; ++k) {
      Eigen::MatrixXd v(3, 10);
      for (int i = 0; i < 10; ++i) {
        Vector w(3);
        for (auto& e : w) e = nd(rng);
        v.col(i) = tangent_project(x.point(static_cast<std::size_t>(i)), w);
      }
      auto moved = [&](double s) {
        Eigen::MatrixXd y = x.matrix() + s * v;
        for (int i = 0; i < 10; ++i) y.col(i).normalize();
        return defect(m, PointConfiguration(2, y));
      };
      // Fourth-order central stencil.
      const double fd = (8 * (moved(h) - moved(-h)) - (moved(2 * h) - moved(-2 * h))) / (12 * h);
      const double an = (g.array() * v.array()).sum();
      worst = std::max(worst, rel_err(fd, an));
    }
  }
  out.require(worst <= 1e-6, "relative error");
  out.details << "400 directions, max relative error " << worst;
}

}  // namespace

int main() {
  run(1, "lower-bound-table", 1.0, lower_bounds);
  run(2, "catalog-fixtures", 5.0, fixtures);
  run(3, "kernel-correctness", 60.0, kernel_checks);
  run(4, "partition-suite", 30.0, partitions);
  run(5, "flow-suite", 60.0, flow_suite);
  run(6, "positivity-experiment", 300.0, lemma1);
  run(7, "sampling-inequalities", 120.0, mz);
  run(8, "design-construction", 600.0, finder);
  run(9, "gradient-oracle", 10.0, gradient_oracle);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
