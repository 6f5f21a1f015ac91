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

#include <Eigen/Core>
#include <Eigen/QR>
#include <cmath>
#include <random>

#include "sphere.hpp"

namespace testing {

inline double rel_err(double a, double b) {
  const double s = std::max(std::fabs(a), std::fabs(b));
  return s == 0.0 ? 0.0 : std::fabs(a - b) / s;
}

inline sphd::Vector random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  sphd::Vector v(d + 1);
  for (auto& x : v) x = n(rng);
  return v / v.norm();
}

inline sphd::PointConfiguration random_points(int d, int n, std::mt19937_64& rng) {
  Eigen::MatrixXd m(d + 1, n);
  for (int i = 0; i < n; ++i) m.col(i) = random_unit(d, rng);
  return sphd::PointConfiguration(d, std::move(m));
}

// Random rotation from the QR factorization of a Gaussian matrix.
inline Eigen::MatrixXd random_rotation(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd a(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) a(i, j) = n(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

}  // namespace testing
