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
#include <cstddef>
#include <iosfwd>
#include <string>

namespace sphd {

using Vector = Eigen::VectorXd;

/// Norm deviation accepted on input before a vector is rejected.
inline constexpr double kUnitInputTolerance = 1e-9;
/// Norm deviation guaranteed for stored points.
inline constexpr double kUnitStoredTolerance = 1e-12;

/// N points on S^d, stored column-wise in a (d+1) x N matrix.
class PointConfiguration {
 public:
  /// Columns must be unit vectors within input_tolerance; columns that are
  /// off by more than kUnitStoredTolerance are renormalized.
  PointConfiguration(int d, Eigen::MatrixXd points, double input_tolerance = kUnitInputTolerance);

  int dim() const noexcept { return d_; }
  int ambient_dim() const noexcept { return d_ + 1; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(points_.cols()); }

  const Eigen::MatrixXd& matrix() const noexcept { return points_; }
  auto point(std::size_t i) const { return points_.col(static_cast<Eigen::Index>(i)); }

 private:
  int d_;
  Eigen::MatrixXd points_;
};

/// Clamped <x, y> for unit vectors.
double clamped_dot(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

/// arccos of the clamped inner product; rejects inputs off the sphere by
/// more than kUnitInputTolerance.
double geodesic_distance(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

/// v - <v, x> x.
Vector tangent_project(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& v);

/// Point-set text format: "d N" on the first line, then N lines of d+1
/// whitespace separated decimals written with 17 significant digits.
void write_points(std::ostream& out, const PointConfiguration& points);
std::string format_points(const PointConfiguration& points);

/// Parses the point-set format. Errors carry 1-based line numbers.
PointConfiguration read_points(std::istream& in);
PointConfiguration read_points_file(const std::string& path);

/// Writes to a temporary file beside path and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace sphd
