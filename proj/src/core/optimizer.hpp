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
#include <string>
#include <vector>

#include "design.hpp"

namespace sphd {

/// Representatives of the equal-area partition of S^d into n cells. The
/// degree plays no part; it is accepted so call sites read like the finder.
PointConfiguration seed_points(int d, int t, int n);

struct LineSearch {
  double initial_step = 1.0;
  double armijo = 1e-4;     // sufficient decrease constant
  double shrink = 0.5;
  double grow = 2.0;        // applied to the accepted step before the next iteration
  double min_step = 1e-20;
};

struct FinderConfig {
  int d = 2;
  int t = 1;
  int n = 1;
  int max_iterations = 20000;  // per attempt
  double defect_target = 1e-12;
  LineSearch line_search;
  int restarts = 5;            // perturbed restarts after the first attempt
  double perturbation = 0.1;   // tangent noise, in units of n^(-1/d)
  bool conjugate_gradient = true;
  std::uint64_t seed = 1;
  bool record_trace = false;

  void validate() const;
};

struct TraceRow {
  int attempt = 0;
  int iteration = 0;
  double defect = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct FinderResult {
  PointConfiguration points;
  DesignReport report;         // from verify_design with tolerance defect_target
  bool converged = false;      // report.verdict
  int attempts = 0;
  int iterations = 0;          // summed over attempts
  double best_defect = 0.0;
  std::vector<TraceRow> trace;
};

/// Riemannian descent on the defect over (S^d)^N from the equal-area seed,
/// with perturbed restarts. Rejects n below lower_bound(d, t).
FinderResult find_design(const FinderConfig& cfg);

/// attempt,iteration,defect,gradientNorm,step
std::string trace_to_csv(const std::vector<TraceRow>& trace);

nlohmann::json finder_to_json(const FinderConfig& cfg, const FinderResult& r);

}  // namespace sphd
