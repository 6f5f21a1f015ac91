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
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "kernel.hpp"
#include "sphere.hpp"

namespace sphd {

inline constexpr double kDefaultDesignTolerance = 1e-10;

/// Minimum size of a spherical t-design on S^d:
/// C(d+k, d) + C(d+k-1, d) for t = 2k, and 2 C(d+k, d) for t = 2k+1.
std::uint64_t lower_bound(int d, int t);

/// ||(1/N) sum_i G_{x_i}||^2 = (1/N^2) sum_{i,j} G(<x_i, x_j>). Zero exactly
/// at t-designs. The pair sum is accumulated exactly, so the value does not
/// depend on point order or thread count.
double defect(const KernelModel& model, const PointConfiguration& x);

/// rho_k = (Z(d,k) / N^2) sum_{i,j} P_k(<x_i, x_j>), k = 1..t.
std::vector<double> degree_residuals(const KernelModel& model, const PointConfiguration& x);

/// Column i is (2/N^2) sum_j G'(<x_i, x_j>) (x_j - <x_i, x_j> x_i).
Eigen::MatrixXd defect_gradient(const KernelModel& model, const PointConfiguration& x);

/// Defect and gradient in one pass over the pairs.
double defect_and_gradient(const KernelModel& model, const Eigen::MatrixXd& points, Eigen::MatrixXd& gradient);

/// Same value as defect() for a raw (d+1) x N matrix of unit columns.
double defect_of(const KernelModel& model, const Eigen::MatrixXd& points);

struct HarmonicCheck {
  double basis_defect = 0.0;  // sum over the explicit basis of ((1/N) sum_i Y(x_i))^2
  double relative_gap = 0.0;
  bool agrees = false;
};

struct DesignReport {
  int d = 0;
  int t = 0;
  std::size_t n = 0;
  double defect = 0.0;
  std::vector<double> residuals;
  bool verdict = false;
  double tolerance = kDefaultDesignTolerance;
  std::uint64_t lower_bound = 0;
  double parseval_gap = 0.0;  // |sum rho_k - defect| / defect
  std::optional<HarmonicCheck> harmonic_check;
  nlohmann::json meta = nlohmann::json::object();
};

/// Full report. verdict is defect <= tolerance. On S^2 the defect is also
/// recomputed from an explicit real spherical harmonic basis.
DesignReport verify_design(const KernelModel& model, const PointConfiguration& x,
                           double tolerance = kDefaultDesignTolerance);

nlohmann::json report_to_json(const DesignReport& r);

/// Relative tolerance of the S^2 basis cross-check.
inline constexpr double kHarmonicCheckTolerance = 1e-9;

/// Real spherical harmonics on S^2 of degrees 1..t, orthonormal for the
/// normalized measure, ordered by degree then (cos m=0, cos 1, sin 1, ...).
std::vector<double> real_harmonics_s2(int t, const Eigen::Ref<const Vector>& x);

/// Named fixtures: polygon(n), simplex(d), cross-polytope(d), cube(d),
/// icosahedron, dodecahedron, d4-minimal-vectors, 24-cell. Arguments may
/// also be written as polygon:n.
PointConfiguration catalog_design(const std::string& name);

std::vector<std::string> catalog_names();

}  // namespace sphd
