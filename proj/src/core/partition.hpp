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

#include <json.hpp>
#include <span>
#include <vector>

#include "sphere.hpp"

namespace sphd {

/// Closed interval of a zonal coordinate. For colatitude levels lo, hi lie
/// in [0, pi]; for the final azimuth level lo is in [0, 2 pi) and hi may
/// exceed 2 pi (the arc wraps).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// A cell as a box in nested zonal coordinates. bounds[0] is the colatitude
/// on S^d measured from the last axis, bounds[1] the colatitude on the
/// S^(d-1) factor, and so on down to the azimuth on S^1. A cell whose
/// remaining factor is a whole subsphere stops early, so polar caps have
/// a single bound and the one-cell partition has none.
struct Cell {
  std::vector<Interval> bounds;
  double area = 0.0;      // normalized measure
  double diameter = 0.0;  // geodesic diameter upper bound
};

/// One band of the zonal tree: a polar cap or a collar together with the
/// partition of its angular factor.
struct ZoneBand {
  Interval colatitude;
  int cells = 0;
  bool cap = false;
  std::vector<ZoneBand> sub;  // bands of the S^(dim-1) factor, empty for caps and single-cell collars
  int sub_dim = 0;
};

class Partition {
 public:
  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const PointConfiguration& representatives() const noexcept { return reps_; }
  const std::vector<ZoneBand>& zones() const noexcept { return zones_; }

  /// Max of the per-cell diameter bounds.
  double norm() const noexcept;

  /// Whether x lies in cell i, up to tol in every zonal coordinate.
  bool contains(std::size_t i, const Eigen::Ref<const Vector>& x, double tol = 1e-12) const;

 private:
  friend Partition equal_area_partition(int d, int n);
  Partition(int d, std::vector<Cell> cells, PointConfiguration reps, std::vector<ZoneBand> zones)
      : d_(d), cells_(std::move(cells)), reps_(std::move(reps)), zones_(std::move(zones)) {}

  int d_;
  std::vector<Cell> cells_;
  PointConfiguration reps_;
  std::vector<ZoneBand> zones_;
};

/// Recursive zonal area-regular partition of S^d into n cells.
Partition equal_area_partition(int d, int n);

double partition_norm(const Partition& p);

/// Normalized measure of the cap {x : angle(x, pole) <= theta} on S^d.
double cap_measure(int d, double theta);

/// Inverse of cap_measure.
double cap_colatitude(int d, double measure);

/// Point on S^d with the given nested zonal coordinates; missing trailing
/// coordinates select the pole of the remaining factor.
Vector zonal_to_point(int d, std::span<const double> coords);

/// max over n of norm(equal_area_partition(d, n)) * n^(1/d).
struct DiameterConstant {
  int d = 0;
  double constant = 0.0;
  std::vector<int> counts;
  std::vector<double> scaled_norms;
};
DiameterConstant measure_diameter_constant(int d, std::span<const int> counts);

/// The sweep used when no counts are given: 10, 100, 1000, 10000.
DiameterConstant measure_diameter_constant(int d);

nlohmann::json partition_to_json(const Partition& p);

}  // namespace sphd
