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
#include "kernel.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace sphd {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact at every step.
    unsigned __int128 wide = static_cast<unsigned __int128>(r) * (n - k + i);
    wide /= i;
    if (wide > UINT64_MAX) fail(ErrorCode::OutOfRange, "binomial coefficient overflows 64 bits");
    r = static_cast<std::uint64_t>(wide);
  }
  return r;
}

std::uint64_t harmonic_dim(int d, int k) {
  require(d >= 1, ErrorCode::InvalidArgument, "harmonic_dim: d must be >= 1, got " + std::to_string(d));
  require(k >= 0, ErrorCode::InvalidArgument, "harmonic_dim: k must be >= 0, got " + std::to_string(k));
  if (k == 0) return 1;
  const auto du = static_cast<std::uint64_t>(d);
  const auto ku = static_cast<std::uint64_t>(k);
  unsigned __int128 wide = static_cast<unsigned __int128>(2 * ku + du - 1) * binomial(ku + du - 2, ku - 1);
  wide /= ku;
  if (wide > UINT64_MAX) fail(ErrorCode::OutOfRange, "harmonic_dim overflows 64 bits");
  return static_cast<std::uint64_t>(wide);
}

double snap_inner_product(double s) {
  if (s > 1.0) {
    if (s - 1.0 > kSnapTolerance) fail(ErrorCode::OutOfRange, "inner product " + std::to_string(s) + " exceeds 1");
    return 1.0;
  }
  if (s < -1.0) {
    if (-1.0 - s > kSnapTolerance) fail(ErrorCode::OutOfRange, "inner product " + std::to_string(s) + " below -1");
    return -1.0;
  }
  if (std::isnan(s)) fail(ErrorCode::Numerical, "inner product is NaN");
  return s;
}

KernelModel::KernelModel(int d, int t) : d_(d), t_(t) {
  require(d >= kMinDim && d <= kMaxDim, ErrorCode::OutOfRange,
          "sphere dimension d=" + std::to_string(d) + " outside supported range [1, 8]");
  require(t >= kMinDegree && t <= kMaxDegree, ErrorCode::OutOfRange,
          "degree t=" + std::to_string(t) + " outside supported range [1, 200]");
  dims_.resize(static_cast<std::size_t>(t) + 1);
  dims_[0] = 1.0;
  for (int k = 1; k <= t; ++k) {
    const auto z = harmonic_dim(d, k);
    space_dim_ += z;
    dims_[static_cast<std::size_t>(k)] = static_cast<double>(z);
    g_one_ += static_cast<double>(z);
  }
}

double KernelModel::gegenbauer(int k, double s) const {
  require(k >= 0 && k <= t_, ErrorCode::OutOfRange, "gegenbauer degree outside [0, t]");
  std::vector<double> v(static_cast<std::size_t>(k) + 1);
  gegenbauer_all(s, v);
  return v.back();
}

void KernelModel::gegenbauer_all(double s, std::span<double> values) const {
  const auto n = values.size();
  if (n == 0) return;
  require(n <= static_cast<std::size_t>(t_) + 1, ErrorCode::OutOfRange, "gegenbauer degree exceeds model degree");
  s = snap_inner_product(s);
  values[0] = 1.0;
  if (n == 1) return;
  values[1] = s;
  if (d_ == 1) {
    // Chebyshev T_k: the general recurrence divides by 2*lambda = 0 at k = 1.
    for (std::size_t k = 2; k < n; ++k) values[k] = 2.0 * s * values[k - 1] - values[k - 2];
    return;
  }
  const double dm = static_cast<double>(d_);
  for (std::size_t k = 2; k < n; ++k) {
    const double kk = static_cast<double>(k);
    values[k] = ((2.0 * kk + dm - 3.0) * s * values[k - 1] - (kk - 1.0) * values[k - 2]) / (kk + dm - 2.0);
  }
}

void KernelModel::gegenbauer_all(double s, std::span<double> values, std::span<double> derivs) const {
  const auto n = values.size();
  require(derivs.size() == n, ErrorCode::InvalidArgument, "values and derivs must have equal length");
  if (n == 0) return;
  require(n <= static_cast<std::size_t>(t_) + 1, ErrorCode::OutOfRange, "gegenbauer degree exceeds model degree");
  s = snap_inner_product(s);
  values[0] = 1.0;
  derivs[0] = 0.0;
  if (n == 1) return;
  values[1] = s;
  derivs[1] = 1.0;
  if (d_ == 1) {
    for (std::size_t k = 2; k < n; ++k) {
      values[k] = 2.0 * s * values[k - 1] - values[k - 2];
      derivs[k] = 2.0 * (values[k - 1] + s * derivs[k - 1]) - derivs[k - 2];
    }
    return;
  }
  const double dm = static_cast<double>(d_);
  for (std::size_t k = 2; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double a = 2.0 * kk + dm - 3.0;
    const double b = kk - 1.0;
    const double c = kk + dm - 2.0;
    values[k] = (a * s * values[k - 1] - b * values[k - 2]) / c;
    derivs[k] = (a * (values[k - 1] + s * derivs[k - 1]) - b * derivs[k - 2]) / c;
  }
}

double KernelModel::G(double s) const {
  s = snap_inner_product(s);
  // Inline recurrence; this is the innermost loop of every pairwise sum.
  double p_prev = 1.0;
  double p = s;
  double g = dims_[1] * p;
  const double dm = static_cast<double>(d_);
  for (int k = 2; k <= t_; ++k) {
    double next;
    if (d_ == 1) {
      next = 2.0 * s * p - p_prev;
    } else {
      const double kk = k;
      next = ((2.0 * kk + dm - 3.0) * s * p - (kk - 1.0) * p_prev) / (kk + dm - 2.0);
    }
    p_prev = p;
    p = next;
    g += dims_[static_cast<std::size_t>(k)] * p;
  }
  return g;
}

double KernelModel::G_deriv(double s) const {
  double g = 0.0;
  double dg = 0.0;
  G_and_deriv(s, g, dg);
  return dg;
}

void KernelModel::G_and_deriv(double s, double& g, double& dg) const {
  s = snap_inner_product(s);
  double p_prev = 1.0, p = s;
  double q_prev = 0.0, q = 1.0;
  g = dims_[1] * p;
  dg = dims_[1] * q;
  const double dm = static_cast<double>(d_);
  for (int k = 2; k <= t_; ++k) {
    double pn, qn;
    if (d_ == 1) {
      pn = 2.0 * s * p - p_prev;
      qn = 2.0 * (p + s * q) - q_prev;
    } else {
      const double kk = k;
      const double a = 2.0 * kk + dm - 3.0;
      const double b = kk - 1.0;
      const double c = kk + dm - 2.0;
      pn = (a * s * p - b * p_prev) / c;
      qn = (a * (p + s * q) - b * q_prev) / c;
    }
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
    g += dims_[static_cast<std::size_t>(k)] * p;
    dg += dims_[static_cast<std::size_t>(k)] * q;
  }
}

}  // namespace sphd
