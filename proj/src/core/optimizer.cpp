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
#include "optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "error.hpp"
#include "partition.hpp"

namespace sphd {

namespace {

void normalize_columns(Eigen::MatrixXd& x) {
  for (Eigen::Index i = 0; i < x.cols(); ++i) x.col(i).normalize();
}

// Frobenius inner product, summed in a fixed order.
double dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a.array() * b.array()).sum(); }

void project_columns(const Eigen::MatrixXd& x, Eigen::MatrixXd& v) {
  for (Eigen::Index i = 0; i < x.cols(); ++i) v.col(i) -= x.col(i).dot(v.col(i)) * x.col(i);
}

Eigen::MatrixXd perturb(const Eigen::MatrixXd& x, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd noise(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) noise(i, j) = normal(rng);
  project_columns(x, noise);
  Eigen::MatrixXd y = x + scale * noise;
  normalize_columns(y);
  return y;
}

struct Attempt {
  Eigen::MatrixXd x;
  double f = 0.0;
  int iterations = 0;
};

Attempt descend(const KernelModel& model, Eigen::MatrixXd x, const FinderConfig& cfg, int attempt,
                std::vector<TraceRow>* trace) {
  const auto& ls = cfg.line_search;
  Eigen::MatrixXd g, g_new, dir, x_new;
  double f = defect_and_gradient(model, x, g);
  dir = -g;
  double step = ls.initial_step;
  int it = 0;
  for (; it < cfg.max_iterations && f > cfg.defect_target; ++it) {
    double slope = dot(g, dir);
    if (slope >= 0.0) {
      dir = -g;
      slope = -dot(g, g);
    }
    if (slope == 0.0) break;

    bool accepted = false;
    double f_new = f;
    while (step >= ls.min_step) {
      x_new = x + step * dir;
      normalize_columns(x_new);
      f_new = defect_and_gradient(model, x_new, g_new);
      if (f_new < f && f_new <= f + ls.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= ls.shrink;
    }
    if (!accepted) {
      // A failed conjugate step gets one retry along the plain gradient.
      if (dir.isApprox(-g)) break;
      dir = -g;
      step = ls.initial_step;
      continue;
    }

    if (trace) trace->push_back({attempt, it, f_new, std::sqrt(dot(g_new, g_new)), step});

    if (cfg.conjugate_gradient) {
      // Transport the old gradient and direction by projection (PR+).
      project_columns(x_new, g);
      project_columns(x_new, dir);
      const double beta = std::max(0.0, dot(g_new, g_new - g) / dot(g, g));
      dir = -g_new + beta * dir;
    } else {
      dir = -g_new;
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    step *= ls.grow;
  }
  return {std::move(x), f, it};
}

}  // namespace

PointConfiguration seed_points(int d, int /*t*/, int n) { return equal_area_partition(d, n).representatives(); }

void FinderConfig::validate() const {
  require(d >= kMinDim && d <= kMaxDim, ErrorCode::OutOfRange, "d must be in [1, 8]");
  require(t >= kMinDegree && t <= kMaxDegree, ErrorCode::OutOfRange, "t must be in [1, 200]");
  require(n >= 1, ErrorCode::InvalidArgument, "N must be >= 1");
  require(max_iterations >= 1, ErrorCode::InvalidArgument, "max iterations must be positive");
  require(defect_target > 0.0, ErrorCode::InvalidArgument, "defect target must be positive");
  require(restarts >= 0, ErrorCode::InvalidArgument, "restarts must be >= 0");
  require(perturbation >= 0.0, ErrorCode::InvalidArgument, "perturbation must be >= 0");
  const auto& ls = line_search;
  require(ls.initial_step > 0.0 && ls.min_step > 0.0 && ls.min_step <= ls.initial_step,
          ErrorCode::InvalidArgument, "line search steps must satisfy 0 < min_step <= initial_step");
  require(ls.armijo > 0.0 && ls.armijo < 1.0, ErrorCode::InvalidArgument, "armijo constant must be in (0, 1)");
  require(ls.shrink > 0.0 && ls.shrink < 1.0, ErrorCode::InvalidArgument, "shrink factor must be in (0, 1)");
  require(ls.grow >= 1.0, ErrorCode::InvalidArgument, "grow factor must be >= 1");
  const auto lb = lower_bound(d, t);
  require(static_cast<std::uint64_t>(n) >= lb, ErrorCode::InvalidArgument,
          "N = " + std::to_string(n) + " is below the lower bound " + std::to_string(lb) +
              " on the size of a spherical " + std::to_string(t) + "-design on S^" + std::to_string(d));
}

FinderResult find_design(const FinderConfig& cfg) {
  cfg.validate();
  const KernelModel model(cfg.d, cfg.t);
  const Eigen::MatrixXd seed = seed_points(cfg.d, cfg.t, cfg.n).matrix();
  std::mt19937_64 rng(cfg.seed);
  const double scale = cfg.perturbation * std::pow(static_cast<double>(cfg.n), -1.0 / cfg.d);

  std::vector<TraceRow> trace;
  Eigen::MatrixXd best;
  double best_f = std::numeric_limits<double>::infinity();
  int attempts = 0, iterations = 0;
  for (int a = 0; a <= cfg.restarts; ++a) {
    Eigen::MatrixXd start = a == 0 ? seed : perturb(seed, scale, rng);
    auto res = descend(model, std::move(start), cfg, a, cfg.record_trace ? &trace : nullptr);
    ++attempts;
    iterations += res.iterations;
    if (res.f < best_f) {
      best_f = res.f;
      best = std::move(res.x);
    }
    if (best_f <= cfg.defect_target) break;
  }

  PointConfiguration points(cfg.d, std::move(best));
  auto report = verify_design(model, points, cfg.defect_target);
  FinderResult r{std::move(points), std::move(report), false, 0, 0, 0.0, {}};
  r.converged = r.report.verdict;
  r.attempts = attempts;
  r.iterations = iterations;
  r.best_defect = best_f;
  r.trace = std::move(trace);
  return r;
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "attempt,iteration,defect,gradientNorm,step\n";
  char buf[160];
  for (const auto& row : trace) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", row.attempt, row.iteration, row.defect,
                  row.gradient_norm, row.step);
    os << buf;
  }
  return os.str();
}

nlohmann::json finder_to_json(const FinderConfig& cfg, const FinderResult& r) {
  nlohmann::json j = report_to_json(r.report);
  j["finder"] = {{"converged", r.converged},
                 {"attempts", r.attempts},
                 {"iterations", r.iterations},
                 {"bestDefect", r.best_defect},
                 {"defectTarget", cfg.defect_target},
                 {"maxIterations", cfg.max_iterations},
                 {"restarts", cfg.restarts},
                 {"conjugateGradient", cfg.conjugate_gradient},
                 {"seed", cfg.seed}};
  return j;
}

}  // namespace sphd
