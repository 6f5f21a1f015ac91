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
#include <span>
#include <vector>

namespace sphd {

inline constexpr int kMinDim = 1;
inline constexpr int kMaxDim = 8;
inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 200;

/// Inner products within this distance outside [-1, 1] are snapped back.
inline constexpr double kSnapTolerance = 1e-12;

/// Dimension of the space of degree-k spherical harmonics on S^d.
std::uint64_t harmonic_dim(int d, int k);

/// Checked binomial coefficient; throws OutOfRange on 64-bit overflow.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Clamps s into [-1, 1] when it lies within kSnapTolerance outside,
/// throws OutOfRange otherwise.
double snap_inner_product(double s);

/// Reproducing kernel of the zero-mean polynomials of degree <= t on S^d,
/// with respect to the normalized surface measure, in rotation-invariant
/// form G(<x, y>) = sum_{k=1..t} Z(d, k) P_k(<x, y>), where P_k is the
/// Gegenbauer polynomial of parameter (d-1)/2 normalized to P_k(1) = 1.
///
/// Immutable after construction; every member is safe to call concurrently.
class KernelModel {
 public:
  KernelModel(int d, int t);

  int dim() const noexcept { return d_; }
  int degree() const noexcept { return t_; }

  /// Z(d, k) for k = 0..t, with Z(d, 0) = 1.
  std::span<const double> dims() const noexcept { return dims_; }

  /// Sum of Z(d, k), k = 1..t; equals G(1).
  double kernel_at_one() const noexcept { return g_one_; }

  /// Dimension of the zero-mean polynomial space of degree <= t.
  std::uint64_t space_dim() const noexcept { return space_dim_; }

  /// P_k(s) for 0 <= k <= t.
  double gegenbauer(int k, double s) const;

  /// Fills values[k] = P_k(s) for k = 0..values.size()-1 (at most t+1).
  void gegenbauer_all(double s, std::span<double> values) const;

  /// Fills values and derivatives of P_0..P_n at s.
  void gegenbauer_all(double s, std::span<double> values, std::span<double> derivs) const;

  double G(double s) const;
  double G_deriv(double s) const;

  /// G and G' in one pass.
  void G_and_deriv(double s, double& g, double& dg) const;

 private:
  int d_;
  int t_;
  std::vector<double> dims_;
  double g_one_ = 0.0;
  std::uint64_t space_dim_ = 0;
};

}  // namespace sphd
