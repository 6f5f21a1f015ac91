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
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "kernel.hpp"
#include "sphere.hpp"

namespace sphd {

/// Seedable generator used for every stochastic operation.
using Rng = std::mt19937_64;

/// Uniformly distributed point on S^d.
Vector random_unit_vector(int d, Rng& rng);

using SphereFunction = std::function<double(const Eigen::Ref<const Vector>&)>;

/// Positive-weight rule for the normalized surface measure on S^d.
struct QuadratureRule {
  int d = 0;
  Eigen::MatrixXd nodes;        // (d+1) x n
  std::vector<double> weights;  // sum to 1
  int exactness = 0;            // polynomial degree integrated exactly; 0 for Monte Carlo
  int resolution = 0;

  std::size_t size() const noexcept { return weights.size(); }
};

/// d = 1: 2r equispaced points. d = 2: r-point Gauss-Legendre in cos(colatitude)
/// times 2r longitudes. d = 3: r-point Gauss-Chebyshev (second kind) in the
/// outer colatitude nested over the d = 2 rule. Each is exact through degree
/// 2r - 1. For 4 <= d <= 8 a seeded Monte Carlo rule with 4096 r nodes and
/// exactness 0 is returned.
QuadratureRule build_quadrature(int d, int resolution);

/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// sum_i w_i f(x_i), accumulated exactly and normalized by the exact weight
/// sum, so constants integrate to themselves.
double integrate(const QuadratureRule& rule, const SphereFunction& f);

struct RefinedIntegral {
  double value = 0.0;
  int resolution = 0;
  bool converged = false;
  double last_change = 0.0;  // relative change at the final doubling
};

/// Doubles the product-rule resolution from start until two successive
/// estimates agree to rel_tol (or max_resolution is reached). Monte Carlo
/// dimensions return the single estimate at start.
RefinedIntegral integrate_refined(int d, const SphereFunction& f, int start_resolution, double rel_tol = 1e-8,
                                  int max_resolution = 512);

/// P(x) = sum_m a_m G(<v_m, x>), an element of the zero-mean space P_t.
class KernelPolynomial {
 public:
  KernelPolynomial(std::shared_ptr<const KernelModel> model, Eigen::MatrixXd anchors, Vector coefficients);

  const KernelModel& model() const noexcept { return *model_; }
  std::shared_ptr<const KernelModel> model_ptr() const noexcept { return model_; }
  int dim() const noexcept { return model_->dim(); }
  const Eigen::MatrixXd& anchors() const noexcept { return anchors_; }
  const Vector& coefficients() const noexcept { return coeffs_; }

  double value(const Eigen::Ref<const Vector>& x) const;

  /// Spherical gradient: the tangential part of the Euclidean gradient of
  /// P(x / |x|), evaluated at x / |x|.
  Vector gradient(const Eigen::Ref<const Vector>& x) const;

  /// (P, P) = sum a_m a_n G(<v_m, v_n>).
  double squared_norm() const;

  KernelPolynomial scaled(double c) const;

  bool is_zero() const noexcept { return coeffs_.size() == 0 || coeffs_.cwiseAbs().maxCoeff() == 0.0; }

 private:
  std::shared_ptr<const KernelModel> model_;
  Eigen::MatrixXd anchors_;
  Vector coeffs_;
};

/// Integral of |grad P| under the given rule.
double gradient_l1(const KernelPolynomial& p, const QuadratureRule& rule);

/// Rescales p so that gradient_l1(p, rule) = 1. Rejects numerically zero p.
KernelPolynomial normalize_to_boundary(const KernelPolynomial& p, const QuadratureRule& rule);

/// M uniform anchors and standard normal coefficients, rescaled onto the
/// boundary {integral |grad P| = 1}. Deterministic for a given seed.
KernelPolynomial sample_boundary_polynomial(std::shared_ptr<const KernelModel> model, const QuadratureRule& rule,
                                            int anchors, std::uint64_t seed);

/// Unnormalized draw: the first step of sample_boundary_polynomial.
KernelPolynomial sample_kernel_polynomial(std::shared_ptr<const KernelModel> model, int anchors, Rng& rng);

}  // namespace sphd
