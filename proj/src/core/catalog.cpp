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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "design.hpp"
#include "error.hpp"

namespace sphd {

namespace {

using Rows = std::vector<std::vector<double>>;

PointConfiguration from_rows(int d, const Rows& rows) {
  Eigen::MatrixXd m(d + 1, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Vector v = Eigen::Map<const Vector>(rows[i].data(), d + 1);
    m.col(static_cast<Eigen::Index>(i)) = v / v.norm();
  }
  return PointConfiguration(d, std::move(m));
}

// All cyclic shifts of (a, b, c).
void cyclic(Rows& rows, double a, double b, double c) {
  rows.push_back({a, b, c});
  rows.push_back({c, a, b});
  rows.push_back({b, c, a});
}

PointConfiguration polygon(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "polygon needs n >= 1");
  Eigen::MatrixXd m(2, n);
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    m(0, k) = std::cos(a);
    m(1, k) = std::sin(a);
  }
  return PointConfiguration(1, std::move(m));
}

// Vertices e_i - centroid of the standard simplex in R^(d+2), written in the
// Helmert basis of the hyperplane orthogonal to (1, ..., 1).
PointConfiguration simplex(int d) {
  const int n = d + 2;
  Rows rows(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(d + 1), 0.0));
  for (int k = 1; k <= d + 1; ++k) {
    const double s = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < n; ++i) {
      double h = 0.0;
      if (i < k) h = 1.0 / s;
      else if (i == k) h = -static_cast<double>(k) / s;
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)] = h;
    }
  }
  return from_rows(d, rows);
}

PointConfiguration cross_polytope(int d) {
  Rows rows;
  for (int i = 0; i <= d; ++i) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> v(static_cast<std::size_t>(d + 1), 0.0);
      v[static_cast<std::size_t>(i)] = s;
      rows.push_back(v);
    }
  }
  return from_rows(d, rows);
}

PointConfiguration cube(int d) {
  require(d <= 8, ErrorCode::OutOfRange, "cube supports d <= 8");
  Rows rows;
  const int n = 1 << (d + 1);
  for (int mask = 0; mask < n; ++mask) {
    std::vector<double> v(static_cast<std::size_t>(d + 1));
    for (int i = 0; i <= d; ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1.0 : 1.0;
    rows.push_back(v);
  }
  return from_rows(d, rows);
}

PointConfiguration icosahedron() {
  const double phi = std::numbers::phi;
  Rows rows;
  for (double a : {1.0, -1.0})
    for (double b : {phi, -phi}) cyclic(rows, 0.0, a, b);
  return from_rows(2, rows);
}

PointConfiguration dodecahedron() {
  const double phi = std::numbers::phi;
  Rows rows;
  for (double a : {1.0, -1.0})
    for (double b : {1.0, -1.0})
      for (double c : {1.0, -1.0}) rows.push_back({a, b, c});
  for (double a : {1.0 / phi, -1.0 / phi})
    for (double b : {phi, -phi}) cyclic(rows, 0.0, a, b);
  return from_rows(2, rows);
}

PointConfiguration d4_minimal_vectors() {
  Rows rows;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (double a : {1.0, -1.0})
        for (double b : {1.0, -1.0}) {
          std::vector<double> v(4, 0.0);
          v[static_cast<std::size_t>(i)] = a;
          v[static_cast<std::size_t>(j)] = b;
          rows.push_back(v);
        }
  return from_rows(3, rows);
}

PointConfiguration cell24() {
  Rows rows;
  for (int i = 0; i < 4; ++i)
    for (double s : {1.0, -1.0}) {
      std::vector<double> v(4, 0.0);
      v[static_cast<std::size_t>(i)] = s;
      rows.push_back(v);
    }
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<double> v(4);
    for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -0.5 : 0.5;
    rows.push_back(v);
  }
  return from_rows(3, rows);
}

int parse_arg(const std::string& name, const std::string& arg) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(arg, &used);
    if (used == arg.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::InvalidArgument, "catalog design " + name + ": bad argument \"" + arg + "\"");
}

}  // namespace

PointConfiguration catalog_design(const std::string& spec) {
  std::string name = spec;
  std::string arg;
  if (auto open = spec.find('('); open != std::string::npos) {
    require(spec.back() == ')', ErrorCode::InvalidArgument, "catalog name \"" + spec + "\" is missing ')'");
    name = spec.substr(0, open);
    arg = spec.substr(open + 1, spec.size() - open - 2);
  } else if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    arg = spec.substr(colon + 1);
  }
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });

  auto dim_arg = [&] {
    const int d = parse_arg(name, arg);
    require(d >= 1 && d <= 8, ErrorCode::OutOfRange, name + ": dimension must be in [1, 8]");
    return d;
  };
  auto no_arg = [&] {
    require(arg.empty(), ErrorCode::InvalidArgument, name + " takes no argument");
  };

  if (name == "polygon") return polygon(parse_arg(name, arg));
  if (name == "simplex") return simplex(dim_arg());
  if (name == "cross-polytope") return cross_polytope(dim_arg());
  if (name == "cube") return cube(dim_arg());
  if (name == "octahedron") return no_arg(), cross_polytope(2);
  if (name == "icosahedron") return no_arg(), icosahedron();
  if (name == "dodecahedron") return no_arg(), dodecahedron();
  if (name == "d4-minimal-vectors") return no_arg(), d4_minimal_vectors();
  if (name == "24-cell") return no_arg(), cell24();
  fail(ErrorCode::InvalidArgument, "unknown catalog design \"" + spec + "\"");
}

std::vector<std::string> catalog_names() {
  return {"polygon(n)", "simplex(d)", "cross-polytope(d)", "cube(d)",           "octahedron",
          "icosahedron", "dodecahedron", "d4-minimal-vectors", "24-cell"};
}

}  // namespace sphd
