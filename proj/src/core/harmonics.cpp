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
#include <cmath>

#include "design.hpp"
#include "error.hpp"

namespace sphd {

// Fully normalized associated Legendre functions (unit mean square over the
// sphere for every order, including the factor 2 for m > 0), by the standard
// sectoral seed and column recurrence.
std::vector<double> real_harmonics_s2(int t, const Eigen::Ref<const Vector>& x) {
  require(x.size() == 3, ErrorCode::InvalidArgument, "real_harmonics_s2 needs points in R^3");
  require(t >= 1, ErrorCode::InvalidArgument, "real_harmonics_s2 needs t >= 1");
  const double r = x.norm();
  const double z = std::clamp(x[2] / r, -1.0, 1.0);
  const double st = std::hypot(x[0], x[1]) / r;
  const double phi = std::atan2(x[1], x[0]);

  const auto T = static_cast<std::size_t>(t);
  // pnm[n][m]
  std::vector<std::vector<double>> pnm(T + 1, std::vector<double>(T + 1, 0.0));
  pnm[0][0] = 1.0;
  for (std::size_t m = 1; m <= T; ++m) {
    const double f = m == 1 ? std::sqrt(3.0) : std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    pnm[m][m] = f * st * pnm[m - 1][m - 1];
  }
  for (std::size_t m = 0; m <= T; ++m) {
    for (std::size_t n = m + 1; n <= T; ++n) {
      const double nd = static_cast<double>(n), md = static_cast<double>(m);
      const double a = std::sqrt((2 * nd - 1) * (2 * nd + 1) / ((nd - md) * (nd + md)));
      double v = a * z * pnm[n - 1][m];
      if (n >= m + 2) {
        const double b =
            std::sqrt((2 * nd + 1) * (nd + md - 1) * (nd - md - 1) / ((nd - md) * (nd + md) * (2 * nd - 3)));
        v -= b * pnm[n - 2][m];
      }
      pnm[n][m] = v;
    }
  }

  std::vector<double> out;
  out.reserve((T + 1) * (T + 1) - 1);
  for (std::size_t n = 1; n <= T; ++n) {
    out.push_back(pnm[n][0]);
    for (std::size_t m = 1; m <= n; ++m) {
      const double md = static_cast<double>(m);
      out.push_back(pnm[n][m] * std::cos(md * phi));
      out.push_back(pnm[n][m] * std::sin(md * phi));
    }
  }
  return out;
}

}  // namespace sphd
