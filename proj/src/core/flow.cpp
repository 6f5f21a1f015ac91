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
#include "flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "error.hpp"
#include "exact_sum.hpp"
#include "parallel.hpp"

namespace sphd {

FlowConfig FlowConfig::defaults(int d, int t, double r_d) {
  require(d >= 1 && t >= 1, ErrorCode::InvalidArgument, "flow defaults need d >= 1 and t >= 1");
  FlowConfig c;
  c.epsilon = 1.0 / (6.0 * std::sqrt(static_cast<double>(d)));
  c.r_d = r_d;
  c.horizon = r_d / (3.0 * t);
  return c;
}

void FlowConfig::validate() const {
  require(epsilon > 0.0, ErrorCode::InvalidArgument, "flow epsilon must be positive");
  require(horizon > 0.0, ErrorCode::InvalidArgument, "flow horizon must be positive");
  require(steps >= 1, ErrorCode::InvalidArgument, "flow step count must be >= 1");
}

double clamp_h_eps(double u, double epsilon) {
  require(u >= 0.0, ErrorCode::InvalidArgument, "h_eps is defined for u >= 0");
  require(epsilon > 0.0, ErrorCode::InvalidArgument, "h_eps needs epsilon > 0");
  return u > epsilon ? u : epsilon;
}

Vector flow_field(const KernelPolynomial& p, const Eigen::Ref<const Vector>& y, double epsilon) {
  const Vector g = p.gradient(y);
  return g / clamp_h_eps(g.norm(), epsilon);
}

namespace {

struct PointPath {
  std::vector<double> values;       // P(y(s_k))
  std::vector<double> speed_terms;  // |grad P|^2 / h_eps at y(s_k)
  std::vector<double> excess;       // dist(x, y(s_k)) - s_k
  Vector final;
  double tangency = 0.0;
  double renorm = 0.0;
};

class PointIntegrator {
 public:
  PointIntegrator(const KernelPolynomial& p, const FlowConfig& cfg) : p_(p), cfg_(cfg) {
    h_ = cfg.horizon / cfg.steps;
    limit_ = 10.0 * h_ * h_;
  }

  PointPath run(const Vector& x0) {
    PointPath path;
    const auto samples = static_cast<std::size_t>(cfg_.steps) + 1;
    path.values.reserve(samples);
    path.speed_terms.reserve(samples);
    path.excess.reserve(samples);
    Vector y = x0;
    record(path, x0, y, 0.0);
    for (int k = 1; k <= cfg_.steps; ++k) {
      y = step(y, path);
      record(path, x0, y, k * h_);
    }
    path.final = y;
    return path;
  }

 private:
  Vector field(const Vector& y, PointPath& path) const {
    const Vector u = flow_field(p_, y, cfg_.epsilon);
    path.tangency = std::max(path.tangency, std::fabs(u.dot(y)));
    return u;
  }

  Vector renormalize(const Vector& raw, PointPath& path) const {
    const double n = raw.norm();
    const double moved = std::fabs(n - 1.0);
    path.renorm = std::max(path.renorm, moved);
    if (moved > limit_) {
      fail(ErrorCode::Numerical, "flow step too coarse: renormalization moved a point by " + std::to_string(moved));
    }
    return raw / n;
  }

  Vector step(const Vector& y, PointPath& path) const {
    const Vector k1 = field(y, path);
    if (cfg_.integrator == Integrator::ProjectedEuler) return renormalize(y + h_ * k1, path);
    const Vector k2 = field(renormalize(y + 0.5 * h_ * k1, path), path);
    const Vector k3 = field(renormalize(y + 0.5 * h_ * k2, path), path);
    const Vector k4 = field(renormalize(y + h_ * k3, path), path);
    return renormalize(y + (h_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), path);
  }

  void record(PointPath& path, const Vector& x0, const Vector& y, double s) const {
    path.values.push_back(p_.value(y));
    const double g = p_.gradient(y).norm();
    path.speed_terms.push_back(g * g / clamp_h_eps(g, cfg_.epsilon));
    path.excess.push_back(2.0 * std::atan2((x0 - y).norm(), (x0 + y).norm()) - s);
  }

  const KernelPolynomial& p_;
  const FlowConfig& cfg_;
  double h_ = 0.0;
  double limit_ = 0.0;
};

}  // namespace

FlowTrace integrate_flow(const KernelPolynomial& p, const PointConfiguration& x0, const FlowConfig& cfg) {
  cfg.validate();
  require(p.dim() == x0.dim(), ErrorCode::InvalidArgument, "polynomial and points live on different spheres");
  const std::size_t n = x0.size();
  std::vector<PointPath> paths(n);
  parallel_blocks(n, std::min<std::size_t>(n, 64), [&](std::size_t begin, std::size_t end, std::size_t) {
    PointIntegrator integ(p, cfg);
    for (std::size_t i = begin; i < end; ++i) paths[i] = integ.run(x0.point(i));
  });

  const auto samples = static_cast<std::size_t>(cfg.steps) + 1;
  const double h = cfg.horizon / cfg.steps;
  Eigen::MatrixXd final_pts(x0.ambient_dim(), static_cast<Eigen::Index>(n));
  FlowTrace trace{x0, x0, {}, {}, {}, {}, {}, 0.0, 0.0};
  trace.s.resize(samples);
  trace.averages.resize(samples);
  trace.derivatives.resize(samples);
  trace.max_excess.assign(samples, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < samples; ++k) {
    trace.s[k] = static_cast<double>(k) * h;
    ExactSum avg, der;
    for (std::size_t i = 0; i < n; ++i) {
      avg.add(paths[i].values[k]);
      der.add(paths[i].speed_terms[k]);
      trace.max_excess[k] = std::max(trace.max_excess[k], paths[i].excess[k]);
    }
    trace.averages[k] = avg.value() / static_cast<double>(n);
    trace.derivatives[k] = der.value() / static_cast<double>(n);
  }
  trace.displacements.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    final_pts.col(static_cast<Eigen::Index>(i)) = paths[i].final;
    trace.displacements[i] = geodesic_distance(x0.point(i), paths[i].final);
    trace.max_tangency = std::max(trace.max_tangency, paths[i].tangency);
    trace.max_renormalization = std::max(trace.max_renormalization, paths[i].renorm);
  }
  trace.final = PointConfiguration(x0.dim(), std::move(final_pts));
  return trace;
}

nlohmann::json flow_trace_to_json(const FlowTrace& trace) {
  return {{"d", trace.initial.dim()},
          {"N", trace.initial.size()},
          {"s", trace.s},
          {"averages", trace.averages},
          {"derivatives", trace.derivatives},
          {"maxExcess", trace.max_excess},
          {"displacements", trace.displacements},
          {"maxTangency", trace.max_tangency},
          {"maxRenormalization", trace.max_renormalization}};
}

std::string flow_trace_to_csv(const FlowTrace& trace) {
  std::ostringstream os;
  os << "s,average,derivative,maxExcess\n";
  char buf[128];
  for (std::size_t k = 0; k < trace.s.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", trace.s[k], trace.averages[k], trace.derivatives[k],
                  trace.max_excess[k]);
    os << buf;
  }
  return os.str();
}

Lemma1Report lemma1_experiment(const Lemma1Config& cfg) {
  require(cfg.trials >= 1, ErrorCode::InvalidArgument, "lemma1 experiment needs at least one trial");
  require(cfg.n >= 1, ErrorCode::InvalidArgument, "lemma1 experiment needs N >= 1");
  require(cfg.r_d > 0.0, ErrorCode::InvalidArgument, "r_d must be positive");

  auto model = std::make_shared<const KernelModel>(cfg.d, cfg.t);
  const auto rule = build_quadrature(cfg.d, cfg.rule_resolution);
  const auto partition = equal_area_partition(cfg.d, cfg.n);
  auto flow = FlowConfig::defaults(cfg.d, cfg.t, cfg.r_d);
  flow.steps = cfg.steps;
  flow.integrator = cfg.integrator;

  const double sd = std::sqrt(static_cast<double>(cfg.d));
  Lemma1Report r;
  r.config = cfg;
  if (r.config.anchors <= 0) r.config.anchors = static_cast<int>(2 * model->space_dim());
  r.epsilon = flow.epsilon;
  r.horizon = flow.horizon;
  r.partition_norm = partition.norm();
  r.diameter_constant = measure_diameter_constant(cfg.d).constant;
  r.mesh_bound = r.diameter_constant * std::pow(static_cast<double>(cfg.n), -1.0 / cfg.d);
  r.mesh_threshold = cfg.r_d / (54.0 * cfg.d * cfg.t);
  r.mesh_condition = r.partition_norm <= r.mesh_bound && r.mesh_bound < r.mesh_threshold;
  r.e1_threshold = cfg.r_d / (18.0 * sd * cfg.t);
  r.slope_bound = 1.0 / (6.0 * sd);
  r.min_final_average = std::numeric_limits<double>::infinity();
  r.min_slope_margin = std::numeric_limits<double>::infinity();

  const double h = flow.horizon / flow.steps;
  for (int k = 0; k < cfg.trials; ++k) {
    Lemma1Trial tr;
    tr.seed = cfg.seed + static_cast<std::uint64_t>(k);
    const auto p = sample_boundary_polynomial(model, rule, r.config.anchors, tr.seed);
    const double grad_l1 = gradient_l1(p, rule);
    const auto trace = integrate_flow(p, partition.representatives(), flow);

    tr.initial_average = trace.averages.front();
    tr.e1_bound = 3.0 * sd * r.partition_norm * grad_l1;
    tr.e1_holds = std::fabs(tr.initial_average) <= tr.e1_bound;
    tr.e1_strict_holds = std::fabs(tr.initial_average) < r.e1_threshold;
    tr.min_slope = std::numeric_limits<double>::infinity();
    tr.monotone = true;
    for (std::size_t j = 0; j + 1 < trace.averages.size(); ++j) {
      const double diff = trace.averages[j + 1] - trace.averages[j];
      tr.min_slope = std::min(tr.min_slope, diff / h);
      if (diff < 0.0) tr.monotone = false;
    }
    tr.min_derivative = *std::min_element(trace.derivatives.begin(), trace.derivatives.end());
    tr.slope_holds = tr.min_slope >= r.slope_bound - cfg.slope_slack;
    tr.final_average = trace.averages.back();
    tr.positive = tr.final_average > 0.0;
    tr.max_excess = *std::max_element(trace.max_excess.begin(), trace.max_excess.end());

    // h_eps has a kink, so convergence is checked per trace rather than assumed.
    auto fine = flow;
    fine.steps = 2 * flow.steps;
    const auto refined = integrate_flow(p, partition.representatives(), fine);
    for (std::size_t i = 0; i < refined.final.size(); ++i)
      tr.step_halving = std::max(tr.step_halving, geodesic_distance(trace.final.point(i), refined.final.point(i)));
    r.max_step_halving = std::max(r.max_step_halving, tr.step_halving);

    r.positive_count += tr.positive;
    r.e1_count += tr.e1_holds;
    r.monotone_count += tr.monotone;
    if (tr.positive) {
      r.slope_count += tr.slope_holds;
      r.min_slope_margin = std::min(r.min_slope_margin, tr.min_slope - r.slope_bound);
    }
    r.min_final_average = std::min(r.min_final_average, tr.final_average);
    r.trials.push_back(tr);
  }
  return r;
}

FlowTrace lemma1_trial_trace(const Lemma1Config& cfg, int trial) {
  require(trial >= 0 && trial < cfg.trials, ErrorCode::OutOfRange,
          "trial index " + std::to_string(trial) + " outside [0, " + std::to_string(cfg.trials) + ")");
  auto model = std::make_shared<const KernelModel>(cfg.d, cfg.t);
  const auto rule = build_quadrature(cfg.d, cfg.rule_resolution);
  const auto partition = equal_area_partition(cfg.d, cfg.n);
  auto flow = FlowConfig::defaults(cfg.d, cfg.t, cfg.r_d);
  flow.steps = cfg.steps;
  flow.integrator = cfg.integrator;
  const int anchors = cfg.anchors > 0 ? cfg.anchors : static_cast<int>(2 * model->space_dim());
  const auto p = sample_boundary_polynomial(model, rule, anchors, cfg.seed + static_cast<std::uint64_t>(trial));
  return integrate_flow(p, partition.representatives(), flow);
}

nlohmann::json lemma1_to_json(const Lemma1Report& r) {
  nlohmann::json j;
  const auto& c = r.config;
  j["config"] = {{"d", c.d},           {"t", c.t},         {"N", c.n},
                 {"r_d", c.r_d},       {"trials", c.trials}, {"seed", c.seed},
                 {"anchors", c.anchors}, {"ruleResolution", c.rule_resolution},
                 {"steps", c.steps},
                 {"integrator", c.integrator == Integrator::ProjectedRK4 ? "projected-rk4" : "projected-euler"},
                 {"slopeSlack", c.slope_slack}};
  j["epsilon"] = r.epsilon;
  j["horizon"] = r.horizon;
  j["mesh"] = {{"partitionNorm", r.partition_norm},
               {"diameterConstant", r.diameter_constant},
               {"meshBound", r.mesh_bound},
               {"threshold", r.mesh_threshold},
               {"satisfied", r.mesh_condition}};
  j["e1Threshold"] = r.e1_threshold;
  j["slopeBound"] = r.slope_bound;
  j["positiveCount"] = r.positive_count;
  j["slopeCount"] = r.slope_count;
  j["e1Count"] = r.e1_count;
  j["monotoneCount"] = r.monotone_count;
  j["minFinalAverage"] = r.min_final_average;
  j["minSlopeMargin"] = r.min_slope_margin;
  j["maxStepHalving"] = r.max_step_halving;
  auto rows = nlohmann::json::array();
  for (const auto& t : r.trials) {
    rows.push_back({{"seed", t.seed},
                    {"initialAverage", t.initial_average},
                    {"e1Bound", t.e1_bound},
                    {"e1Holds", t.e1_holds},
                    {"e1StrictHolds", t.e1_strict_holds},
                    {"minSlope", t.min_slope},
                    {"minDerivative", t.min_derivative},
                    {"slopeHolds", t.slope_holds},
                    {"finalAverage", t.final_average},
                    {"positive", t.positive},
                    {"monotone", t.monotone},
                    {"maxExcess", t.max_excess},
                    {"stepHalving", t.step_halving}});
  }
  j["trials"] = std::move(rows);
  return j;
}

}  // namespace sphd
