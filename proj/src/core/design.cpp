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
#include "design.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "exact_sum.hpp"
#include "parallel.hpp"

namespace sphd {

namespace {

constexpr std::size_t kMaxBlocks = 64;

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::OutOfRange, "lower bound overflows 64 bits");
  return r;
}

void check_dims(const KernelModel& model, int d) {
  require(model.dim() == d, ErrorCode::InvalidArgument,
          "kernel model is for S^" + std::to_string(model.dim()) + " but points lie on S^" + std::to_string(d));
}

double pair_dot(const Eigen::MatrixXd& p, Eigen::Index i, Eigen::Index j) { return p.col(i).dot(p.col(j)); }

}  // namespace

std::uint64_t lower_bound(int d, int t) {
  require(d >= 1, ErrorCode::InvalidArgument, "lower_bound: d must be >= 1");
  require(t >= 1, ErrorCode::InvalidArgument, "lower_bound: t must be >= 1");
  const auto du = static_cast<std::uint64_t>(d);
  const auto k = static_cast<std::uint64_t>(t / 2);
  if (t % 2 == 0) return checked_add(binomial(du + k, du), binomial(du + k - 1, du));
  const auto c = binomial(du + k, du);
  return checked_add(c, c);
}

double defect_of(const KernelModel& model, const Eigen::MatrixXd& points) {
  const auto n = static_cast<std::size_t>(points.cols());
  const std::size_t blocks = std::min(kMaxBlocks, n);
  std::vector<ExactSum> partial(blocks);
  parallel_blocks(n, blocks, [&](std::size_t begin, std::size_t end, std::size_t b) {
    auto& acc = partial[b];
    for (std::size_t i = begin; i < end; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      for (Eigen::Index j = ii + 1; j < points.cols(); ++j) acc.add(2.0 * model.G(pair_dot(points, ii, j)));
    }
  });
  ExactSum total;
  total.add(static_cast<double>(n) * model.kernel_at_one());
  for (const auto& p : partial) total.merge(p);
  const double nn = static_cast<double>(n);
  return total.value() / (nn * nn);
}

double defect(const KernelModel& model, const PointConfiguration& x) {
  check_dims(model, x.dim());
  // The exact pair sum can land a few ulps below zero at a design.
  return std::max(0.0, defect_of(model, x.matrix()));
}

std::vector<double> degree_residuals(const KernelModel& model, const PointConfiguration& x) {
  check_dims(model, x.dim());
  const auto& pts = x.matrix();
  const auto n = x.size();
  const auto t = static_cast<std::size_t>(model.degree());
  const std::size_t blocks = std::min(kMaxBlocks, n);
  std::vector<std::vector<ExactSum>> partial(blocks, std::vector<ExactSum>(t + 1));
  parallel_blocks(n, blocks, [&](std::size_t begin, std::size_t end, std::size_t b) {
    std::vector<double> pk(t + 1);
    auto& acc = partial[b];
    for (std::size_t i = begin; i < end; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      for (Eigen::Index j = ii + 1; j < pts.cols(); ++j) {
        model.gegenbauer_all(std::clamp(pair_dot(pts, ii, j), -1.0, 1.0), pk);
        for (std::size_t k = 1; k <= t; ++k) acc[k].add(2.0 * pk[k]);
      }
    }
  });
  const double nn = static_cast<double>(n);
  std::vector<double> rho(t);
  for (std::size_t k = 1; k <= t; ++k) {
    ExactSum total;
    total.add(nn);  // diagonal: P_k(1) = 1
    for (const auto& p : partial) total.merge(p[k]);
    rho[k - 1] = model.dims()[k] * total.value() / (nn * nn);
  }
  return rho;
}

double defect_and_gradient(const KernelModel& model, const Eigen::MatrixXd& points, Eigen::MatrixXd& gradient) {
  const auto n = static_cast<std::size_t>(points.cols());
  gradient.setZero(points.rows(), points.cols());
  const std::size_t blocks = std::min(kMaxBlocks, n);
  std::vector<ExactSum> partial(blocks);
  parallel_blocks(n, blocks, [&](std::size_t begin, std::size_t end, std::size_t b) {
    auto& acc = partial[b];
    Vector pull(points.rows());
    for (std::size_t i = begin; i < end; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      pull.setZero();
      for (Eigen::Index j = 0; j < points.cols(); ++j) {
        if (j == ii) continue;
        double g, dg;
        model.G_and_deriv(std::clamp(pair_dot(points, ii, j), -1.0, 1.0), g, dg);
        pull += dg * points.col(j);
        if (j > ii) acc.add(2.0 * g);
      }
      gradient.col(ii) = tangent_project(points.col(ii), pull);
    }
  });
  const double nn = static_cast<double>(n);
  gradient *= 2.0 / (nn * nn);
  ExactSum total;
  total.add(nn * model.kernel_at_one());
  for (const auto& p : partial) total.merge(p);
  return total.value() / (nn * nn);
}

Eigen::MatrixXd defect_gradient(const KernelModel& model, const PointConfiguration& x) {
  check_dims(model, x.dim());
  Eigen::MatrixXd g;
  defect_and_gradient(model, x.matrix(), g);
  return g;
}

DesignReport verify_design(const KernelModel& model, const PointConfiguration& x, double tolerance) {
  check_dims(model, x.dim());
  require(tolerance > 0.0, ErrorCode::InvalidArgument, "verification tolerance must be positive");
  const auto start = std::chrono::steady_clock::now();

  DesignReport r;
  r.d = x.dim();
  r.t = model.degree();
  r.n = x.size();
  r.tolerance = tolerance;
  const double raw = defect_of(model, x.matrix());
  r.defect = std::max(0.0, raw);
  r.residuals = degree_residuals(model, x);
  r.verdict = r.defect <= tolerance;
  r.lower_bound = lower_bound(r.d, r.t);
  // Sharper than the table; metadata only.
  if (r.d == 3 && r.t == 5) r.meta["literatureLowerBound"] = 22;

  ExactSum rho_sum;
  for (double v : r.residuals) rho_sum.add(v);
  const double split = rho_sum.value();
  const double scale = std::max(std::fabs(split), std::fabs(raw));
  r.parseval_gap = scale > 0.0 ? std::fabs(split - raw) / scale : 0.0;

  if (r.d == 2) {
    const auto& pts = x.matrix();
    const auto nbasis = static_cast<std::size_t>((r.t + 1) * (r.t + 1) - 1);
    std::vector<ExactSum> sums(nbasis);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto y = real_harmonics_s2(r.t, pts.col(static_cast<Eigen::Index>(i)));
      for (std::size_t b = 0; b < nbasis; ++b) sums[b].add(y[b]);
    }
    ExactSum sq;
    const double nn = static_cast<double>(x.size());
    for (const auto& s : sums) {
      const double avg = s.value() / nn;
      sq.add(avg * avg);
    }
    HarmonicCheck h;
    h.basis_defect = sq.value();
    const double gap = std::fabs(h.basis_defect - r.defect);
    const double big = std::max(h.basis_defect, r.defect);
    h.relative_gap = big > 0.0 ? gap / big : 0.0;
    // Relative agreement plus the rounding floor of the kernel route.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * model.kernel_at_one();
    h.agrees = gap <= kHarmonicCheckTolerance * big + floor;
    r.harmonic_check = h;
  }

  r.meta["runtimeSeconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

nlohmann::json report_to_json(const DesignReport& r) {
  nlohmann::json j;
  j["d"] = r.d;
  j["t"] = r.t;
  j["N"] = r.n;
  j["defect"] = r.defect;
  j["residuals"] = r.residuals;
  j["verdict"] = r.verdict;
  j["tolerance"] = r.tolerance;
  j["lowerBound"] = r.lower_bound;
  j["parsevalGap"] = r.parseval_gap;
  if (r.harmonic_check) {
    j["harmonicCheck"] = {{"basisDefect", r.harmonic_check->basis_defect},
                          {"relativeGap", r.harmonic_check->relative_gap},
                          {"agrees", r.harmonic_check->agrees}};
  }
  j["meta"] = r.meta;
  return j;
}

}  // namespace sphd
