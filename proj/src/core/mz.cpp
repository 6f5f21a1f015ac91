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
#include "mz.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "error.hpp"
#include "exact_sum.hpp"

namespace sphd {

namespace {

constexpr double kDegenerateIntegral = 1e-14;
constexpr double kMembershipTolerance = 1e-9;

void check_points(const Partition& partition, const PointConfiguration& points) {
  require(points.dim() == partition.dim(), ErrorCode::InvalidArgument, "points and partition dimension differ");
  require(points.size() == partition.size(), ErrorCode::InvalidArgument,
          "need exactly one point per cell: " + std::to_string(points.size()) + " points, " +
              std::to_string(partition.size()) + " cells");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(partition.contains(i, points.point(i), kMembershipTolerance), ErrorCode::InvalidArgument,
            "point " + std::to_string(i) + " does not lie in its cell");
  }
}

MZReport finish(MZReport r, const QuadratureRule& rule, const Partition& partition,
                const PointConfiguration& points, const SphereFunction& magnitude, const MZOptions& opt) {
  r.d = partition.dim();
  r.n = partition.size();
  r.mesh_norm = partition.norm();
  r.condition_satisfied = r.mesh_norm < r.threshold;

  ExactSum sum;
  for (std::size_t i = 0; i < points.size(); ++i) sum.add(magnitude(points.point(i)));
  r.discrete = sum.value() / static_cast<double>(points.size());

  const auto integral = integrate_refined(rule.d, magnitude, rule.resolution, opt.rel_tol, opt.max_resolution);
  r.continuous = integral.value;
  r.resolution = integral.resolution;
  r.converged = integral.converged;
  r.integral_change = integral.last_change;

  if (r.continuous < kDegenerateIntegral) {
    r.degenerate = true;
    r.ratio = 0.0;
    r.within_bounds = false;
    return r;
  }
  r.ratio = r.discrete / r.continuous;
  r.within_bounds = r.lower <= r.ratio && r.ratio <= r.upper;
  return r;
}

}  // namespace

MZReport mz_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                  const SphereFunction& f, int m, const MZOptions& opt) {
  require(rule.d == partition.dim(), ErrorCode::InvalidArgument, "rule and partition dimension differ");
  require(m >= 0, ErrorCode::InvalidArgument, "polynomial degree must be >= 0");
  check_points(partition, points);
  MZReport r;
  r.kind = MZReport::Kind::Value;
  r.m = m;
  r.threshold = m > 0 ? opt.r_d / m : std::numeric_limits<double>::infinity();
  r.lower = 0.5;
  r.upper = 1.5;
  return finish(r, rule, partition, points, [&f](const Eigen::Ref<const Vector>& x) { return std::fabs(f(x)); },
                opt);
}

MZReport mz_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                  const KernelPolynomial& p, const MZOptions& opt) {
  require(p.dim() == partition.dim(), ErrorCode::InvalidArgument, "polynomial and partition dimension differ");
  return mz_check(rule, partition, points, [&p](const Eigen::Ref<const Vector>& x) { return p.value(x); },
                  p.model().degree(), opt);
}

MZReport mz_gradient_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                           const VectorField& grad, int m, const MZOptions& opt) {
  require(rule.d == partition.dim(), ErrorCode::InvalidArgument, "rule and partition dimension differ");
  require(m >= 0, ErrorCode::InvalidArgument, "polynomial degree must be >= 0");
  check_points(partition, points);
  const double sd = std::sqrt(static_cast<double>(partition.dim()));
  MZReport r;
  r.kind = MZReport::Kind::Gradient;
  r.m = m;
  r.threshold = opt.r_d / (m + 1);
  r.lower = 1.0 / (3.0 * sd);
  r.upper = 3.0 * sd;
  return finish(r, rule, partition, points, [&grad](const Eigen::Ref<const Vector>& x) { return grad(x).norm(); },
                opt);
}

MZReport mz_gradient_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                           const KernelPolynomial& p, const MZOptions& opt) {
  require(p.dim() == partition.dim(), ErrorCode::InvalidArgument, "polynomial and partition dimension differ");
  return mz_gradient_check(
      rule, partition, points, [&p](const Eigen::Ref<const Vector>& x) { return p.gradient(x); },
      p.model().degree(), opt);
}

std::vector<MZSweepRow> mz_sweep(const MZSweepConfig& cfg) {
  require(cfg.trials >= 1, ErrorCode::InvalidArgument, "mz sweep needs at least one trial");
  auto model = std::make_shared<const KernelModel>(cfg.d, cfg.m);
  const int anchors = cfg.anchors > 0 ? cfg.anchors : static_cast<int>(2 * model->space_dim());
  const auto rule = build_quadrature(cfg.d, cfg.m + 2);
  std::vector<MZSweepRow> rows;
  for (int n : cfg.counts) {
    const auto partition = equal_area_partition(cfg.d, n);
    Rng rng(cfg.seed);
    for (int k = 0; k < cfg.trials; ++k) {
      const auto p = sample_kernel_polynomial(model, anchors, rng);
      MZSweepRow row;
      row.trial = k;
      row.value = mz_check(rule, partition, partition.representatives(), p, cfg.options);
      row.gradient = mz_gradient_check(rule, partition, partition.representatives(), p, cfg.options);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string mz_to_csv(const std::vector<MZSweepRow>& rows) {
  std::ostringstream os;
  os << "d,m,N,meshNorm,ratio,withinBounds,kind,trial\n";
  char buf[256];
  for (const auto& row : rows) {
    for (const MZReport* r : {&row.value, &row.gradient}) {
      std::snprintf(buf, sizeof buf, "%d,%d,%zu,%.17g,%.17g,%s,%s,%d\n", r->d, r->m, r->n, r->mesh_norm, r->ratio,
                    r->within_bounds ? "true" : "false", r->kind == MZReport::Kind::Value ? "value" : "gradient",
                    row.trial);
      os << buf;
    }
  }
  return os.str();
}

MeshThreshold estimate_mesh_threshold(int d, int m, int trials, std::uint64_t seed, int n_lo, int n_hi) {
  require(n_lo >= 1 && n_hi >= n_lo, ErrorCode::InvalidArgument, "need 1 <= n_lo <= n_hi");
  MZSweepConfig cfg;
  cfg.d = d;
  cfg.m = m;
  cfg.trials = trials;
  cfg.seed = seed;
  auto all_pass = [&](int n) {
    cfg.counts = {n};
    for (const auto& row : mz_sweep(cfg)) {
      if (!row.value.within_bounds || !row.gradient.within_bounds) return false;
    }
    return true;
  };

  MeshThreshold out;
  out.d = d;
  out.m = m;
  if (!all_pass(n_hi)) return out;
  int lo = n_lo, hi = n_hi;
  if (all_pass(lo)) hi = lo;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (all_pass(mid) ? hi : lo) = mid;
  }
  out.found = true;
  out.n = hi;
  out.mesh_norm = equal_area_partition(d, hi).norm();
  out.empirical_r = out.mesh_norm * (m + 1);
  return out;
}

}  // namespace sphd
