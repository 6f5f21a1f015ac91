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
#include <string>
#include <vector>

#include "partition.hpp"
#include "quadrature.hpp"

namespace sphd {

enum class Integrator { ProjectedRK4, ProjectedEuler };

/// Clamped, normalized gradient flow y' = grad P(y) / h_eps(|grad P(y)|)
/// run for each point over s in [0, horizon].
struct FlowConfig {
  double epsilon = 0.0;
  double horizon = 0.0;
  double r_d = 1.0;
  int steps = 64;
  Integrator integrator = Integrator::ProjectedRK4;

  /// epsilon = 1 / (6 sqrt(d)), horizon = r_d / (3 t).
  static FlowConfig defaults(int d, int t, double r_d = 1.0);
  void validate() const;
};

/// u if u > epsilon, else epsilon.
double clamp_h_eps(double u, double epsilon);

/// grad P(y) / h_eps(|grad P(y)|); never longer than 1.
Vector flow_field(const KernelPolynomial& p, const Eigen::Ref<const Vector>& y, double epsilon);

struct FlowTrace {
  PointConfiguration initial;
  PointConfiguration final;
  std::vector<double> s;             // sample times, s[0] = 0
  std::vector<double> averages;      // (1/N) sum_i P(y_i(s))
  std::vector<double> derivatives;   // (1/N) sum_i |grad P|^2 / h_eps(|grad P|) at y_i(s)
  std::vector<double> max_excess;    // max_i dist(x_i, y_i(s)) - s
  std::vector<double> displacements; // dist(x_i, y_i(horizon)) per point
  double max_tangency = 0.0;         // max |<U, y>| over all stage evaluations
  double max_renormalization = 0.0;  // max | |y| - 1 | before renormalizing
};

/// Integrates every point independently with a fixed step, renormalizing
/// after every stage. Throws Numerical when a renormalization moves a point
/// by more than 10 h^2 (the step is too coarse).
FlowTrace integrate_flow(const KernelPolynomial& p, const PointConfiguration& x0, const FlowConfig& cfg);

nlohmann::json flow_trace_to_json(const FlowTrace& trace);

/// Columns s,average,derivative,maxExcess.
std::string flow_trace_to_csv(const FlowTrace& trace);

struct Lemma1Config {
  int d = 2;
  int t = 3;
  int n = 400;
  double r_d = 1.0;
  int trials = 50;
  std::uint64_t seed = 1;
  int anchors = 0;          // 0: twice the dimension of P_t
  int rule_resolution = 64; // quadrature used for the boundary normalization
  int steps = 64;
  Integrator integrator = Integrator::ProjectedRK4;
  double slope_slack = 1e-3;
};

struct Lemma1Trial {
  std::uint64_t seed = 0;
  double initial_average = 0.0;
  double e1_bound = 0.0;      // 3 sqrt(d) ||R|| integral |grad P|
  bool e1_holds = false;      // |initial_average| <= e1_bound
  bool e1_strict_holds = false;  // |initial_average| < r_d / (18 sqrt(d) t)
  double min_slope = 0.0;     // min finite-difference slope of the averages
  double min_derivative = 0.0;
  bool slope_holds = false;   // min_slope >= 1/(6 sqrt(d)) - slack
  double final_average = 0.0;
  bool positive = false;
  bool monotone = false;
  double max_excess = 0.0;
  double step_halving = 0.0;  // max_i dist(y_i at steps, y_i at 2 * steps)
};

struct Lemma1Report {
  Lemma1Config config;
  double epsilon = 0.0;
  double horizon = 0.0;
  double partition_norm = 0.0;
  double diameter_constant = 0.0;   // measured B_d
  double mesh_bound = 0.0;          // B_d N^(-1/d)
  double mesh_threshold = 0.0;      // r_d / (54 d t)
  bool mesh_condition = false;      // partition_norm <= mesh_bound < mesh_threshold
  double e1_threshold = 0.0;        // r_d / (18 sqrt(d) t)
  double slope_bound = 0.0;         // 1 / (6 sqrt(d))
  std::vector<Lemma1Trial> trials;
  int positive_count = 0;
  int slope_count = 0;              // passing trials whose slopes hold
  int e1_count = 0;
  int monotone_count = 0;
  double min_final_average = 0.0;
  double min_slope_margin = 0.0;    // min over passing trials of min_slope - slope_bound
  double max_step_halving = 0.0;
};

Lemma1Report lemma1_experiment(const Lemma1Config& cfg);

/// The full trace of one trial (0-based) of the experiment.
FlowTrace lemma1_trial_trace(const Lemma1Config& cfg, int trial);

nlohmann::json lemma1_to_json(const Lemma1Report& r);

}  // namespace sphd
