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
#include "sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "error.hpp"
#include "kernel.hpp"

namespace sphd {

PointConfiguration::PointConfiguration(int d, Eigen::MatrixXd points, double input_tolerance)
    : d_(d), points_(std::move(points)) {
  require(d >= kMinDim && d <= kMaxDim, ErrorCode::OutOfRange,
          "sphere dimension d=" + std::to_string(d) + " outside supported range [1, 8]");
  require(points_.rows() == d + 1, ErrorCode::InvalidArgument,
          "points must have d+1=" + std::to_string(d + 1) + " coordinates, got " + std::to_string(points_.rows()));
  require(points_.cols() >= 1, ErrorCode::InvalidArgument, "a point configuration needs at least one point");
  for (Eigen::Index i = 0; i < points_.cols(); ++i) {
    const double norm = points_.col(i).norm();
    require(std::isfinite(norm), ErrorCode::InvalidArgument, "point " + std::to_string(i) + " is not finite");
    require(std::fabs(norm - 1.0) <= input_tolerance, ErrorCode::InvalidArgument,
            "point " + std::to_string(i) + " has norm " + std::to_string(norm) + ", not a unit vector");
    if (std::fabs(norm - 1.0) > kUnitStoredTolerance) points_.col(i) /= norm;
  }
}

double clamped_dot(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  return std::clamp(x.dot(y), -1.0, 1.0);
}

double geodesic_distance(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  require(x.size() == y.size(), ErrorCode::InvalidArgument, "geodesic_distance: dimension mismatch");
  require(std::fabs(x.norm() - 1.0) <= kUnitInputTolerance && std::fabs(y.norm() - 1.0) <= kUnitInputTolerance,
          ErrorCode::InvalidArgument, "geodesic_distance: inputs must be unit vectors");
  // acos of the dot product loses half the digits near 0 and pi.
  return 2.0 * std::atan2((x - y).norm(), (x + y).norm());
}

Vector tangent_project(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& v) {
  return v - v.dot(x) * x;
}

void write_points(std::ostream& out, const PointConfiguration& points) {
  out << points.dim() << ' ' << points.size() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", p[k]);
      if (k > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

std::string format_points(const PointConfiguration& points) {
  std::ostringstream os;
  write_points(os, points);
  return os.str();
}

namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

PointConfiguration read_points(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  long long d = 0;
  long long n = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> d >> n) || (hs >> extra)) parse_error(lineno, "expected header \"d N\"");
    header = true;
    break;
  }
  if (!header) fail(ErrorCode::Parse, "empty point file");
  if (d < kMinDim || d > kMaxDim) parse_error(lineno, "unsupported sphere dimension " + std::to_string(d));
  if (n < 1) parse_error(lineno, "point count must be >= 1");

  const auto rows = static_cast<Eigen::Index>(d + 1);
  Eigen::MatrixXd pts(rows, static_cast<Eigen::Index>(n));
  long long read = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (read == n) parse_error(lineno, "more than the declared " + std::to_string(n) + " points");
    std::istringstream ls(line);
    for (Eigen::Index k = 0; k < rows; ++k) {
      double v;
      if (!(ls >> v)) parse_error(lineno, "expected " + std::to_string(rows) + " coordinates");
      pts(k, static_cast<Eigen::Index>(read)) = v;
    }
    std::string extra;
    if (ls >> extra) parse_error(lineno, "expected " + std::to_string(rows) + " coordinates, found more");
    const double norm = pts.col(static_cast<Eigen::Index>(read)).norm();
    if (!std::isfinite(norm) || std::fabs(norm - 1.0) > kUnitInputTolerance) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e", std::fabs(norm - 1.0));
      parse_error(lineno, std::string("not a unit vector (norm deviation ") + buf + ")");
    }
    ++read;
  }
  if (read != n)
    fail(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected " + std::to_string(n) + " points, found " +
                               std::to_string(read));
  return PointConfiguration(static_cast<int>(d), std::move(pts));
}

PointConfiguration read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  try {
    return read_points(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) fail(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::Io, "cannot rename into " + path);
  }
}

}  // namespace sphd
