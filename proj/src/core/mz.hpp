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
#include <functional>
#include <string>
#include <vector>

#include "partition.hpp"
#include "quadrature.hpp"

namespace sphd {

/// Sampling-inequality checks: the average of |P| (or |grad P|) over one
/// point per cell of an area-regular partition compared with its integral.
/// Out-of-bounds ratios are recorded, never thrown.
struct MZReport {
  enum class Kind { Value, Gradient };
  Kind kind = Kind::Value;
  int d = 0;
  int m = 0;
  std::size_t n = 0;
  double mesh_norm = 0.0;
  double threshold = 0.0;  // r_d / m (value) or r_d / (m + 1) (gradient)
  bool condition_satisfied = false;
  double discrete = 0.0;    // (1/N) sum_i |f(x_i)|
  double continuous = 0.0;  // integral of |f|
  double ratio = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool within_bounds = false;
  bool degenerate = false;
  int resolution = 0;  // final quadrature resolution of the integral
  bool converged = false;
  double integral_change = 0.0;  // relative change at the last refinement
};

struct MZOptions {
  double r_d = 1.0;
  double rel_tol = 1e-8;  // refinement agreement for the integral
  int max_resolution = 512;
};

using VectorField = std::function<Vector(const Eigen::Ref<const Vector>&)>;

/// Bounds (1/2, 3/2). f has total degree m.
MZReport mz_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                  const SphereFunction& f, int m, const MZOptions& opt = {});
MZReport mz_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                  const KernelPolynomial& p, const MZOptions& opt = {});

/// Bounds (1/(3 sqrt d), 3 sqrt d) on |grad f|.
MZReport mz_gradient_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                           const VectorField& grad, int m, const MZOptions& opt = {});
MZReport mz_gradient_check(const QuadratureRule& rule, const Partition& partition, const PointConfiguration& points,
                           const KernelPolynomial& p, const MZOptions& opt = {});

struct MZSweepConfig {
  int d = 2;
  int m = 5;
  std::vector<int> counts{2000};
  int trials = 100;
  std::uint64_t seed = 1;
  int anchors = 0;  // 0: twice the dimension of P_m
  MZOptions options{1.0, 1e-8, 128};
};

struct MZSweepRow {
  int trial = 0;
  MZReport value;
  MZReport gradient;
};

/// Random kernel polynomials of degree m checked on equal-area partitions
/// (representatives as sample points) for every N in counts.
std::vector<MZSweepRow> mz_sweep(const MZSweepConfig& cfg);

/// One row per check: d,m,N,meshNorm,ratio,withinBounds,kind,trial.
std::string mz_to_csv(const std::vector<MZSweepRow>& rows);

struct MeshThreshold {
  int d = 0;
  int m = 0;
  int n = 0;               // smallest N found with every trial inside both bounds
  double mesh_norm = 0.0;  // partition norm at that N
  double empirical_r = 0.0;  // mesh_norm * (m + 1)
  bool found = false;
};

/// Bisects N in [n_lo, n_hi] for the smallest equal-area partition on which
/// every trial satisfies both inequalities.
MeshThreshold estimate_mesh_threshold(int d, int m, int trials, std::uint64_t seed, int n_lo, int n_hi);

}  // namespace sphd
