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
#include "partition.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "error.hpp"
#include "kernel.hpp"

namespace sphd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unnormalized surface area of S^dim.
double sphere_area(int dim) {
  const double h = 0.5 * (dim + 1);
  return 2.0 * std::pow(kPi, h) / boost::math::tgamma(h);
}

// Stagger between consecutive S^1 collars so cell boundaries do not line up
// along meridians.
double circle_offset(int n_top, int n_bot) {
  return 0.5 * (1.0 / n_bot - 1.0 / n_top) + std::gcd(n_top, n_bot) / (2.0 * n_top * n_bot);
}

// Max geodesic distance between (a1, u) and (a2, v) over a1, a2 in [lo, hi]
// when the angle between u and v is at most delta.
double box_diameter(double lo, double hi, double delta) {
  const double c = std::cos(std::min(delta, kPi));
  auto g = [c](double a, double b) { return std::cos(a) * std::cos(b) + c * std::sin(a) * std::sin(b); };
  double gmin = std::min({g(lo, lo), g(lo, hi), g(hi, hi)});
  // Along an edge with one angle fixed g is R cos(b - phi); its minimum sits at phi + pi.
  for (double a : {lo, hi}) {
    const double phi = std::atan2(c * std::sin(a), std::cos(a));
    for (double b : {phi + kPi, phi - kPi}) {
      if (b >= lo && b <= hi) gmin = std::min(gmin, g(a, b));
    }
  }
  if (lo <= 0.5 * kPi && 0.5 * kPi <= hi) gmin = std::min(gmin, c);
  return std::acos(std::clamp(gmin, -1.0, 1.0));
}

double cell_diameter(int dim, std::span<const Interval> b) {
  if (b.empty()) return kPi;
  if (dim == 1) return std::min(b[0].hi - b[0].lo, kPi);
  const double delta = b.size() == 1 ? kPi : cell_diameter(dim - 1, b.subspan(1));
  return box_diameter(b[0].lo, b[0].hi, delta);
}

double cell_area(int dim, std::span<const Interval> b) {
  if (b.empty()) return 1.0;
  if (dim == 1) return (b[0].hi - b[0].lo) / kTwoPi;
  return (cap_measure(dim, b[0].hi) - cap_measure(dim, b[0].lo)) * cell_area(dim - 1, b.subspan(1));
}

bool in_arc(double phi, const Interval& arc, double tol) {
  double u = std::fmod(phi - arc.lo, kTwoPi);
  if (u < 0) u += kTwoPi;
  return u <= (arc.hi - arc.lo) + tol || u >= kTwoPi - tol;
}

bool contains_rec(int dim, std::span<const Interval> b, const Vector& x, double tol) {
  if (b.empty()) return true;
  if (dim == 1) return in_arc(std::atan2(x[1], x[0]), b[0], tol);
  const double theta = std::acos(std::clamp(x[dim] / x.norm(), -1.0, 1.0));
  if (theta < b[0].lo - tol || theta > b[0].hi + tol) return false;
  if (b.size() == 1) return true;
  const Vector head = x.head(dim);
  const double nh = head.norm();
  // At a pole the remaining coordinates are undefined.
  if (nh < 1e-300) return true;
  return contains_rec(dim - 1, b.subspan(1), head / nh, tol);
}

struct Builder {
  std::vector<Cell> cells;
  std::vector<std::vector<double>> reps;
};

void build(int dim, int n, double offset, std::vector<Interval>& prefix, std::vector<double>& rep, Builder& out,
           std::vector<ZoneBand>& bands) {
  auto emit = [&] {
    out.cells.push_back(Cell{prefix, 0.0, 0.0});
    out.reps.push_back(rep);
  };

  if (n == 1) {
    emit();
    return;
  }

  if (dim == 1) {
    const double w = kTwoPi / n;
    for (int i = 0; i < n; ++i) {
      double lo = std::fmod(offset * kTwoPi + i * w, kTwoPi);
      prefix.push_back({lo, lo + w});
      rep.push_back(lo + 0.5 * w);
      emit();
      bands.push_back(ZoneBand{prefix.back(), 1, false, {}, 0});
      prefix.pop_back();
      rep.pop_back();
    }
    return;
  }

  // Polar caps, then collars whose cell counts come from rounding the
  // ideal (fractional) counts with carried discrepancy.
  const double region = 1.0 / n;
  double polar = n == 2 ? 0.5 * kPi : cap_colatitude(dim, region);
  std::vector<int> counts{1};
  std::vector<double> edges{0.0, polar};
  if (n > 2) {
    const double ideal_angle = std::pow(sphere_area(dim) / n, 1.0 / dim);
    const int collars = std::max(1, static_cast<int>(std::lround((kPi - 2.0 * polar) / ideal_angle)));
    const double fitting = (kPi - 2.0 * polar) / collars;
    double discrepancy = 0.0;
    int subtotal = 1;
    for (int i = 1; i <= collars; ++i) {
      const double ideal =
          (cap_measure(dim, polar + i * fitting) - cap_measure(dim, polar + (i - 1) * fitting)) / region;
      const int count = static_cast<int>(std::lround(ideal + discrepancy));
      discrepancy += ideal - count;
      counts.push_back(count);
      subtotal += count;
      edges.push_back(cap_colatitude(dim, subtotal * region));
    }
    edges.back() = kPi - polar;
  }
  counts.push_back(1);
  edges.push_back(kPi);

  double sub_offset = 0.0;
  for (std::size_t z = 0; z < counts.size(); ++z) {
    const Interval band{edges[z], edges[z + 1]};
    const bool cap = z == 0 || z + 1 == counts.size();
    ZoneBand zb{band, counts[z], cap, {}, dim - 1};
    prefix.push_back(band);
    if (cap) {
      rep.push_back(z == 0 ? 0.0 : kPi);
      emit();
    } else {
      rep.push_back(0.5 * (band.lo + band.hi));
      build(dim - 1, counts[z], dim == 2 ? sub_offset : 0.0, prefix, rep, out, zb.sub);
      if (z + 2 < counts.size()) {
        sub_offset += circle_offset(counts[z], counts[z + 1]);
        sub_offset -= std::floor(sub_offset);
      }
    }
    prefix.pop_back();
    rep.pop_back();
    bands.push_back(std::move(zb));
  }
}

}  // namespace

double cap_measure(int d, double theta) {
  require(d >= 1, ErrorCode::InvalidArgument, "cap_measure: d must be >= 1");
  theta = std::clamp(theta, 0.0, kPi);
  const double a = 0.5 * d;
  if (theta <= 0.5 * kPi) {
    const double s = std::sin(0.5 * theta);
    return boost::math::ibeta(a, a, s * s);
  }
  const double s = std::sin(0.5 * (kPi - theta));
  return boost::math::ibetac(a, a, s * s);
}

double cap_colatitude(int d, double measure) {
  require(d >= 1, ErrorCode::InvalidArgument, "cap_colatitude: d must be >= 1");
  require(measure >= 0.0 && measure <= 1.0, ErrorCode::OutOfRange, "cap_colatitude: measure outside [0, 1]");
  const double a = 0.5 * d;
  if (measure <= 0.5) {
    if (measure == 0.0) return 0.0;
    return 2.0 * std::asin(std::sqrt(boost::math::ibeta_inv(a, a, measure)));
  }
  if (measure == 1.0) return kPi;
  return kPi - 2.0 * std::asin(std::sqrt(boost::math::ibeta_inv(a, a, 1.0 - measure)));
}

Vector zonal_to_point(int d, std::span<const double> coords) {
  Vector x = Vector::Zero(d + 1);
  if (d == 1) {
    const double phi = coords.empty() ? 0.0 : coords[0];
    x[0] = std::cos(phi);
    x[1] = std::sin(phi);
    return x;
  }
  if (coords.empty()) {
    x[d] = 1.0;
    return x;
  }
  const double theta = coords[0];
  x[d] = std::cos(theta);
  x.head(d) = std::sin(theta) * zonal_to_point(d - 1, coords.subspan(1));
  return x;
}

double Partition::norm() const noexcept {
  double m = 0.0;
  for (const auto& c : cells_) m = std::max(m, c.diameter);
  return m;
}

bool Partition::contains(std::size_t i, const Eigen::Ref<const Vector>& x, double tol) const {
  require(i < cells_.size(), ErrorCode::OutOfRange, "cell index out of range");
  require(x.size() == d_ + 1, ErrorCode::InvalidArgument, "point dimension does not match partition");
  return contains_rec(d_, cells_[i].bounds, Vector(x), tol);
}

Partition equal_area_partition(int d, int n) {
  require(d >= kMinDim && d <= kMaxDim, ErrorCode::OutOfRange,
          "sphere dimension d=" + std::to_string(d) + " outside supported range [1, 8]");
  require(n >= 1, ErrorCode::InvalidArgument, "partition needs N >= 1");

  Builder b;
  std::vector<Interval> prefix;
  std::vector<double> rep;
  std::vector<ZoneBand> zones;
  build(d, n, 0.0, prefix, rep, b, zones);
  if (n == 1) zones.push_back(ZoneBand{{0.0, d == 1 ? kTwoPi : kPi}, 1, true, {}, d - 1});

  Eigen::MatrixXd pts(d + 1, n);
  for (int i = 0; i < n; ++i) {
    auto& cell = b.cells[static_cast<std::size_t>(i)];
    cell.area = cell_area(d, cell.bounds);
    cell.diameter = cell_diameter(d, cell.bounds);
    pts.col(i) = zonal_to_point(d, b.reps[static_cast<std::size_t>(i)]);
  }
  return Partition(d, std::move(b.cells), PointConfiguration(d, std::move(pts)), std::move(zones));
}

double partition_norm(const Partition& p) { return p.norm(); }

DiameterConstant measure_diameter_constant(int d, std::span<const int> counts) {
  DiameterConstant out;
  out.d = d;
  for (int n : counts) {
    const auto p = equal_area_partition(d, n);
    const double scaled = p.norm() * std::pow(static_cast<double>(n), 1.0 / d);
    out.counts.push_back(n);
    out.scaled_norms.push_back(scaled);
    out.constant = std::max(out.constant, scaled);
  }
  return out;
}

DiameterConstant measure_diameter_constant(int d) {
  static constexpr int kSweep[] = {10, 100, 1000, 10000};
  return measure_diameter_constant(d, kSweep);
}

namespace {

nlohmann::json bands_to_json(const std::vector<ZoneBand>& bands) {
  auto arr = nlohmann::json::array();
  for (const auto& b : bands) {
    nlohmann::json j{{"bounds", {b.colatitude.lo, b.colatitude.hi}}, {"cells", b.cells}};
    if (b.cap) j["cap"] = true;
    if (!b.sub.empty()) j["sub"] = {{"dim", b.sub_dim}, {"zones", bands_to_json(b.sub)}};
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

nlohmann::json partition_to_json(const Partition& p) {
  nlohmann::json j;
  j["d"] = p.dim();
  j["N"] = p.size();
  j["norm"] = p.norm();
  j["zones"] = bands_to_json(p.zones());
  auto cells = nlohmann::json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& c = p.cells()[i];
    auto bounds = nlohmann::json::array();
    for (const auto& iv : c.bounds) bounds.push_back({iv.lo, iv.hi});
    const auto r = p.representatives().point(i);
    cells.push_back({{"bounds", bounds},
                     {"area", c.area},
                     {"diameter", c.diameter},
                     {"representative", std::vector<double>(r.data(), r.data() + r.size())}});
  }
  j["cells"] = std::move(cells);
  return j;
}

}  // namespace sphd
