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
#include "quadrature.hpp"

#include <cmath>
#include <numbers>

#include "error.hpp"
#include "exact_sum.hpp"

namespace sphd {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kMonteCarloSeed = 0x5eedf00dULL;
}  // namespace

Vector random_unit_vector(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector v(d + 1);
  double n2 = 0.0;
  do {
    for (int k = 0; k <= d; ++k) v[k] = normal(rng);
    n2 = v.squaredNorm();
  } while (n2 < 1e-20);
  return v / std::sqrt(n2);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, ErrorCode::InvalidArgument, "gauss_legendre: n must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = z;
    nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

namespace {

QuadratureRule circle_rule(int r) {
  QuadratureRule q;
  q.d = 1;
  const int n = 2 * r;
  q.nodes.resize(2, n);
  q.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
  for (int j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * j / n;
    q.nodes(0, j) = std::cos(phi);
    q.nodes(1, j) = std::sin(phi);
  }
  q.exactness = 2 * r - 1;
  return q;
}

QuadratureRule sphere2_rule(int r) {
  std::vector<double> z, w;
  gauss_legendre(r, z, w);
  const int nphi = 2 * r;
  QuadratureRule q;
  q.d = 2;
  q.nodes.resize(3, r * nphi);
  q.weights.resize(static_cast<std::size_t>(r * nphi));
  int idx = 0;
  for (int i = 0; i < r; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int j = 0; j < nphi; ++j, ++idx) {
      const double phi = 2.0 * kPi * j / nphi;
      q.nodes(0, idx) = s * std::cos(phi);
      q.nodes(1, idx) = s * std::sin(phi);
      q.nodes(2, idx) = z[i];
      q.weights[static_cast<std::size_t>(idx)] = 0.5 * w[i] / nphi;
    }
  }
  q.exactness = 2 * r - 1;
  return q;
}

QuadratureRule sphere3_rule(int r) {
  const QuadratureRule inner = sphere2_rule(r);
  const auto m = static_cast<Eigen::Index>(inner.size());
  QuadratureRule q;
  q.d = 3;
  q.nodes.resize(4, r * m);
  q.weights.resize(static_cast<std::size_t>(r * m));
  Eigen::Index idx = 0;
  for (int i = 1; i <= r; ++i) {
    const double angle = kPi * i / (r + 1);
    const double z = std::cos(angle);
    const double s = std::sin(angle);
    const double wz = 2.0 * s * s / (r + 1);
    for (Eigen::Index j = 0; j < m; ++j, ++idx) {
      q.nodes.block(0, idx, 3, 1) = s * inner.nodes.col(j);
      q.nodes(3, idx) = z;
      q.weights[static_cast<std::size_t>(idx)] = wz * inner.weights[static_cast<std::size_t>(j)];
    }
  }
  q.exactness = 2 * r - 1;
  return q;
}

QuadratureRule monte_carlo_rule(int d, int r) {
  Rng rng(kMonteCarloSeed + static_cast<std::uint64_t>(d));
  const int n = 4096 * r;
  QuadratureRule q;
  q.d = d;
  q.nodes.resize(d + 1, n);
  for (int j = 0; j < n; ++j) q.nodes.col(j) = random_unit_vector(d, rng);
  q.weights.assign(static_cast<std::size_t>(n), 1.0 / n);
  q.exactness = 0;
  return q;
}

}  // namespace

QuadratureRule build_quadrature(int d, int resolution) {
  require(d >= kMinDim && d <= kMaxDim, ErrorCode::OutOfRange,
          "sphere dimension d=" + std::to_string(d) + " outside supported range [1, 8]");
  require(resolution >= 1, ErrorCode::InvalidArgument, "quadrature resolution must be >= 1");
  QuadratureRule q;
  switch (d) {
    case 1: q = circle_rule(resolution); break;
    case 2: q = sphere2_rule(resolution); break;
    case 3: q = sphere3_rule(resolution); break;
    default: q = monte_carlo_rule(d, resolution); break;
  }
  q.resolution = resolution;
  return q;
}

double integrate(const QuadratureRule& rule, const SphereFunction& f) {
  ExactSum sum;
  ExactSum wsum;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double w = rule.weights[i];
    sum.add(w * f(rule.nodes.col(static_cast<Eigen::Index>(i))));
    wsum.add(w);
  }
  return sum.value() / wsum.value();
}

RefinedIntegral integrate_refined(int d, const SphereFunction& f, int start_resolution, double rel_tol,
                                  int max_resolution) {
  RefinedIntegral out;
  int r = std::max(1, start_resolution);
  out.value = integrate(build_quadrature(d, r), f);
  out.resolution = r;
  if (d > 3) return out;
  while (2 * r <= max_resolution) {
    r *= 2;
    const double next = integrate(build_quadrature(d, r), f);
    const double scale = std::max(std::fabs(next), std::fabs(out.value));
    const double change = std::fabs(next - out.value);
    out.last_change = scale > 0.0 ? change / scale : 0.0;
    const bool agree = change <= rel_tol * scale;
    out.value = next;
    out.resolution = r;
    if (agree) {
      out.converged = true;
      break;
    }
  }
  return out;
}

KernelPolynomial::KernelPolynomial(std::shared_ptr<const KernelModel> model, Eigen::MatrixXd anchors,
                                   Vector coefficients)
    : model_(std::move(model)), anchors_(std::move(anchors)), coeffs_(std::move(coefficients)) {
  require(model_ != nullptr, ErrorCode::InvalidArgument, "kernel polynomial needs a model");
  require(anchors_.rows() == model_->dim() + 1, ErrorCode::InvalidArgument, "anchor dimension mismatch");
  require(anchors_.cols() == coeffs_.size(), ErrorCode::InvalidArgument, "one coefficient per anchor required");
  for (Eigen::Index m = 0; m < anchors_.cols(); ++m) {
    require(std::fabs(anchors_.col(m).norm() - 1.0) <= kUnitInputTolerance, ErrorCode::InvalidArgument,
            "anchors must be unit vectors");
  }
}

double KernelPolynomial::value(const Eigen::Ref<const Vector>& x) const {
  const double n = x.norm();
  double v = 0.0;
  for (Eigen::Index m = 0; m < anchors_.cols(); ++m) {
    v += coeffs_[m] * model_->G(std::clamp(anchors_.col(m).dot(x) / n, -1.0, 1.0));
  }
  return v;
}

Vector KernelPolynomial::gradient(const Eigen::Ref<const Vector>& x) const {
  const double n = x.norm();
  const Vector y = x / n;
  Vector g = Vector::Zero(y.size());
  for (Eigen::Index m = 0; m < anchors_.cols(); ++m) {
    const double s = std::clamp(anchors_.col(m).dot(y), -1.0, 1.0);
    g += (coeffs_[m] * model_->G_deriv(s)) * anchors_.col(m);
  }
  return tangent_project(y, g);
}

double KernelPolynomial::squared_norm() const {
  ExactSum sum;
  for (Eigen::Index a = 0; a < anchors_.cols(); ++a) {
    for (Eigen::Index b = 0; b < anchors_.cols(); ++b) {
      sum.add(coeffs_[a] * coeffs_[b] * model_->G(std::clamp(anchors_.col(a).dot(anchors_.col(b)), -1.0, 1.0)));
    }
  }
  return sum.value();
}

KernelPolynomial KernelPolynomial::scaled(double c) const { return KernelPolynomial(model_, anchors_, c * coeffs_); }

double gradient_l1(const KernelPolynomial& p, const QuadratureRule& rule) {
  require(rule.d == p.dim(), ErrorCode::InvalidArgument, "rule and polynomial live on different spheres");
  return integrate(rule, [&p](const Eigen::Ref<const Vector>& x) { return p.gradient(x).norm(); });
}

KernelPolynomial normalize_to_boundary(const KernelPolynomial& p, const QuadratureRule& rule) {
  require(!p.is_zero() && p.coefficients().cwiseAbs().maxCoeff() >= 1e-14, ErrorCode::Numerical,
          "polynomial is numerically zero and cannot be scaled onto the boundary");
  const double l1 = gradient_l1(p, rule);
  require(l1 > 0.0 && std::isfinite(l1), ErrorCode::Numerical, "gradient integral vanishes");
  return KernelPolynomial(p.model_ptr(), p.anchors(), p.coefficients() / l1);
}

KernelPolynomial sample_kernel_polynomial(std::shared_ptr<const KernelModel> model, int anchors, Rng& rng) {
  require(anchors >= 1, ErrorCode::InvalidArgument, "need at least one anchor");
  const int d = model->dim();
  std::normal_distribution<double> normal;
  for (;;) {
    Eigen::MatrixXd a(d + 1, anchors);
    Vector c(anchors);
    for (int m = 0; m < anchors; ++m) a.col(m) = random_unit_vector(d, rng);
    for (int m = 0; m < anchors; ++m) c[m] = normal(rng);
    if (c.cwiseAbs().maxCoeff() >= 1e-14) return KernelPolynomial(model, std::move(a), std::move(c));
  }
}

KernelPolynomial sample_boundary_polynomial(std::shared_ptr<const KernelModel> model, const QuadratureRule& rule,
                                            int anchors, std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto p = sample_kernel_polynomial(model, anchors, rng);
    if (gradient_l1(p, rule) > 1e-14) return normalize_to_boundary(p, rule);
  }
  fail(ErrorCode::Numerical, "could not sample a nonzero polynomial");
}

}  // namespace sphd
