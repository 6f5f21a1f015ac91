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
#include "sphdesign/sphdesign.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "design.hpp"
#include "error.hpp"
#include "flow.hpp"
#include "kernel.hpp"
#include "mz.hpp"
#include "optimizer.hpp"
#include "parallel.hpp"
#include "partition.hpp"
#include "sphere.hpp"

struct sphd_kernel {
  sphd::KernelModel model;
};

struct sphd_points {
  sphd::PointConfiguration points;
};

struct sphd_partition {
  sphd::Partition partition;
};

struct sphd_report {
  bool verdict;
  double defect;
  nlohmann::json doc;
};

namespace {

thread_local std::string last_error;

sphd_status to_status(sphd::ErrorCode c) { return static_cast<sphd_status>(static_cast<int>(c)); }

template <class F>
sphd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SPHD_OK;
  } catch (const sphd::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return SPHD_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SPHD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SPHD_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return SPHD_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  sphd::require(p != nullptr, sphd::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void copy_rows(const Eigen::MatrixXd& m, double* out) {
  // Column-major (d+1) x N is exactly row-major N x (d+1).
  std::memcpy(out, m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
}

sphd::FinderConfig finder_config(const sphd_finder_config& c) {
  sphd::FinderConfig f;
  f.d = c.d;
  f.t = c.t;
  f.n = c.n;
  f.max_iterations = c.max_iterations;
  f.defect_target = c.defect_target;
  f.restarts = c.restarts;
  f.perturbation = c.perturbation;
  f.conjugate_gradient = c.conjugate_gradient != 0;
  f.seed = c.seed;
  f.line_search = {c.initial_step, c.armijo, c.shrink, c.grow, c.min_step};
  return f;
}

sphd::Lemma1Config lemma1_config(const sphd_lemma1_config& c) {
  sphd::Lemma1Config l;
  l.d = c.d;
  l.t = c.t;
  l.n = c.n;
  l.r_d = c.r_d;
  l.trials = c.trials;
  l.seed = c.seed;
  l.anchors = c.anchors;
  l.rule_resolution = c.rule_resolution;
  l.steps = c.steps;
  l.integrator = c.euler ? sphd::Integrator::ProjectedEuler : sphd::Integrator::ProjectedRK4;
  l.slope_slack = c.slope_slack;
  return l;
}

nlohmann::json ratio_summary(const std::vector<sphd::MZSweepRow>& rows, bool gradient) {
  int pass = 0, degenerate = 0, condition = 0, unconverged = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, change = 0.0;
  for (const auto& row : rows) {
    const auto& r = gradient ? row.gradient : row.value;
    pass += r.within_bounds;
    degenerate += r.degenerate;
    condition += r.condition_satisfied;
    unconverged += !r.converged;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    change = std::max(change, r.integral_change);
  }
  const auto& first = gradient ? rows.front().gradient : rows.front().value;
  return {{"withinBounds", pass},   {"checks", rows.size()},       {"minRatio", lo},
          {"maxRatio", hi},         {"lower", first.lower},        {"upper", first.upper},
          {"degenerate", degenerate}, {"meshConditionHeld", condition}, {"unconvergedIntegrals", unconverged},
          {"maxIntegralChange", change}};
}

}  // namespace

extern "C" {

const char* sphd_version(void) { return SPHD_VERSION; }

const char* sphd_status_name(sphd_status status) {
  switch (status) {
    case SPHD_OK: return "ok";
    case SPHD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SPHD_ERR_OUT_OF_RANGE: return "out of range";
    case SPHD_ERR_PARSE: return "parse error";
    case SPHD_ERR_IO: return "i/o error";
    case SPHD_ERR_NOT_CONVERGED: return "not converged";
    case SPHD_ERR_NUMERICAL: return "numerical failure";
    case SPHD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sphd_last_error(void) { return last_error.c_str(); }

void sphd_string_free(char* s) { std::free(s); }

sphd_status sphd_write_file_atomic(const char* path, const char* contents) {
  return guarded([&] {
    need(path, "path");
    need(contents, "contents");
    sphd::write_file_atomic(path, contents);
  });
}

sphd_status sphd_set_threads(unsigned threads) {
  return guarded([&] { sphd::set_thread_count(threads); });
}

unsigned sphd_threads(void) { return sphd::thread_count(); }

sphd_status sphd_lower_bound(int d, int t, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = sphd::lower_bound(d, t);
  });
}

sphd_status sphd_harmonic_dim(int d, int k, uint64_t* out) {
  return guarded([&] {
    need(out, "out");
    *out = sphd::harmonic_dim(d, k);
  });
}

sphd_status sphd_kernel_create(int d, int t, sphd_kernel** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sphd_kernel{sphd::KernelModel(d, t)};
  });
}

void sphd_kernel_free(sphd_kernel* k) { delete k; }

int sphd_kernel_dim(const sphd_kernel* k) { return k ? k->model.dim() : 0; }

int sphd_kernel_degree(const sphd_kernel* k) { return k ? k->model.degree() : 0; }

sphd_status sphd_kernel_eval(const sphd_kernel* k, double s, double* g, double* dg) {
  return guarded([&] {
    need(k, "kernel");
    double v, dv;
    k->model.G_and_deriv(s, v, dv);
    if (g) *g = v;
    if (dg) *dg = dv;
  });
}

sphd_status sphd_gegenbauer(const sphd_kernel* k, int deg, double s, double* out) {
  return guarded([&] {
    need(k, "kernel");
    need(out, "out");
    *out = k->model.gegenbauer(deg, s);
  });
}

sphd_status sphd_points_create(int d, size_t n, const double* coords, sphd_points** out) {
  return guarded([&] {
    need(out, "out");
    sphd::require(d >= sphd::kMinDim && d <= sphd::kMaxDim, sphd::ErrorCode::OutOfRange, "d must be in [1, 8]");
    sphd::require(n >= 1, sphd::ErrorCode::InvalidArgument, "need at least one point");
    need(coords, "coords");
    Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(coords, d + 1, static_cast<Eigen::Index>(n));
    *out = new sphd_points{sphd::PointConfiguration(d, std::move(m))};
  });
}

sphd_status sphd_points_read(const char* path, sphd_points** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new sphd_points{sphd::read_points_file(path)};
  });
}

sphd_status sphd_points_parse(const char* text, sphd_points** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    std::istringstream in(text);
    *out = new sphd_points{sphd::read_points(in)};
  });
}

sphd_status sphd_points_write(const sphd_points* p, const char* path) {
  return guarded([&] {
    need(p, "points");
    need(path, "path");
    sphd::write_file_atomic(path, sphd::format_points(p->points));
  });
}

sphd_status sphd_points_format(const sphd_points* p, char** out) {
  return guarded([&] {
    need(p, "points");
    need(out, "out");
    *out = dup_string(sphd::format_points(p->points));
  });
}

sphd_status sphd_points_catalog(const char* name, sphd_points** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new sphd_points{sphd::catalog_design(name)};
  });
}

sphd_status sphd_catalog_names(char** out) {
  return guarded([&] {
    need(out, "out");
    std::string s;
    for (const auto& n : sphd::catalog_names()) s += n + "\n";
    *out = dup_string(s);
  });
}

sphd_status sphd_points_seed(int d, int t, int n, sphd_points** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sphd_points{sphd::seed_points(d, t, n)};
  });
}

void sphd_points_free(sphd_points* p) { delete p; }

int sphd_points_dim(const sphd_points* p) { return p ? p->points.dim() : 0; }

size_t sphd_points_size(const sphd_points* p) { return p ? p->points.size() : 0; }

sphd_status sphd_points_coords(const sphd_points* p, double* out) {
  return guarded([&] {
    need(p, "points");
    need(out, "out");
    copy_rows(p->points.matrix(), out);
  });
}

sphd_status sphd_partition_create(int d, int n, sphd_partition** out) {
  return guarded([&] {
    need(out, "out");
    *out = new sphd_partition{sphd::equal_area_partition(d, n)};
  });
}

void sphd_partition_free(sphd_partition* p) { delete p; }

size_t sphd_partition_size(const sphd_partition* p) { return p ? p->partition.size() : 0; }

sphd_status sphd_partition_norm(const sphd_partition* p, double* out) {
  return guarded([&] {
    need(p, "partition");
    need(out, "out");
    *out = p->partition.norm();
  });
}

sphd_status sphd_partition_cell(const sphd_partition* p, size_t i, double* area, double* diameter) {
  return guarded([&] {
    need(p, "partition");
    sphd::require(i < p->partition.size(), sphd::ErrorCode::OutOfRange, "cell index out of range");
    const auto& c = p->partition.cells()[i];
    if (area) *area = c.area;
    if (diameter) *diameter = c.diameter;
  });
}

sphd_status sphd_partition_representatives(const sphd_partition* p, sphd_points** out) {
  return guarded([&] {
    need(p, "partition");
    need(out, "out");
    *out = new sphd_points{p->partition.representatives()};
  });
}

sphd_status sphd_partition_json(const sphd_partition* p, char** out) {
  return guarded([&] {
    need(p, "partition");
    need(out, "out");
    *out = dup_string(sphd::partition_to_json(p->partition).dump(2));
  });
}

sphd_status sphd_diameter_constant(int d, const int* counts, size_t ncounts, double* out) {
  return guarded([&] {
    need(out, "out");
    if (counts && ncounts > 0) {
      *out = sphd::measure_diameter_constant(d, std::span<const int>(counts, ncounts)).constant;
    } else {
      *out = sphd::measure_diameter_constant(d).constant;
    }
  });
}

sphd_status sphd_defect(const sphd_kernel* k, const sphd_points* p, double* out) {
  return guarded([&] {
    need(k, "kernel");
    need(p, "points");
    need(out, "out");
    *out = sphd::defect(k->model, p->points);
  });
}

sphd_status sphd_degree_residuals(const sphd_kernel* k, const sphd_points* p, double* out) {
  return guarded([&] {
    need(k, "kernel");
    need(p, "points");
    need(out, "out");
    const auto rho = sphd::degree_residuals(k->model, p->points);
    std::copy(rho.begin(), rho.end(), out);
  });
}

sphd_status sphd_defect_gradient(const sphd_kernel* k, const sphd_points* p, double* out) {
  return guarded([&] {
    need(k, "kernel");
    need(p, "points");
    need(out, "out");
    copy_rows(sphd::defect_gradient(k->model, p->points), out);
  });
}

sphd_status sphd_verify(const sphd_kernel* k, const sphd_points* p, double tolerance, sphd_report** out) {
  return guarded([&] {
    need(k, "kernel");
    need(p, "points");
    need(out, "out");
    const auto r = sphd::verify_design(k->model, p->points, tolerance);
    *out = new sphd_report{r.verdict, r.defect, sphd::report_to_json(r)};
  });
}

void sphd_report_free(sphd_report* r) { delete r; }

int sphd_report_verdict(const sphd_report* r) { return r && r->verdict ? 1 : 0; }

double sphd_report_defect(const sphd_report* r) { return r ? r->defect : NAN; }

sphd_status sphd_report_set_meta(sphd_report* r, const char* key, const char* json_value) {
  return guarded([&] {
    need(r, "report");
    need(key, "key");
    need(json_value, "value");
    r->doc["meta"][key] = nlohmann::json::parse(json_value);
  });
}

sphd_status sphd_report_json(const sphd_report* r, char** out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    *out = dup_string(r->doc.dump(2));
  });
}

void sphd_finder_config_init(sphd_finder_config* cfg) {
  if (!cfg) return;
  const sphd::FinderConfig f;
  *cfg = sphd_finder_config{f.d,
                            f.t,
                            f.n,
                            f.max_iterations,
                            f.defect_target,
                            f.restarts,
                            f.perturbation,
                            f.conjugate_gradient ? 1 : 0,
                            f.seed,
                            f.line_search.initial_step,
                            f.line_search.armijo,
                            f.line_search.shrink,
                            f.line_search.grow,
                            f.line_search.min_step};
}

sphd_status sphd_find_design(const sphd_finder_config* cfg, sphd_points** points, sphd_report** report,
                             char** trace_csv) {
  return guarded([&] {
    need(cfg, "config");
    need(points, "points");
    need(report, "report");
    auto f = finder_config(*cfg);
    f.record_trace = trace_csv != nullptr;
    auto r = sphd::find_design(f);
    auto doc = sphd::finder_to_json(f, r);
    std::unique_ptr<sphd_points> pts(new sphd_points{std::move(r.points)});
    std::unique_ptr<sphd_report> rep(new sphd_report{r.report.verdict, r.report.defect, std::move(doc)});
    if (trace_csv) *trace_csv = dup_string(sphd::trace_to_csv(r.trace));
    *points = pts.release();
    *report = rep.release();
  });
}

void sphd_lemma1_config_init(sphd_lemma1_config* cfg) {
  if (!cfg) return;
  const sphd::Lemma1Config l;
  *cfg = sphd_lemma1_config{l.d,       l.t,      l.n,  l.r_d, l.trials, l.seed, l.anchors, l.rule_resolution,
                            l.steps,   l.integrator == sphd::Integrator::ProjectedEuler ? 1 : 0, l.slope_slack};
}

sphd_status sphd_lemma1_run(const sphd_lemma1_config* cfg, char** json, int* positive_count) {
  return guarded([&] {
    need(cfg, "config");
    const auto r = sphd::lemma1_experiment(lemma1_config(*cfg));
    if (positive_count) *positive_count = r.positive_count;
    if (json) *json = dup_string(sphd::lemma1_to_json(r).dump(2));
  });
}

sphd_status sphd_lemma1_trace(const sphd_lemma1_config* cfg, int trial, char** csv) {
  return guarded([&] {
    need(cfg, "config");
    need(csv, "csv");
    *csv = dup_string(sphd::flow_trace_to_csv(sphd::lemma1_trial_trace(lemma1_config(*cfg), trial)));
  });
}

void sphd_mz_config_init(sphd_mz_config* cfg) {
  if (!cfg) return;
  const sphd::MZSweepConfig m;
  *cfg = sphd_mz_config{m.d,        m.m, nullptr, 0, m.trials, m.seed, m.anchors, m.options.r_d, m.options.rel_tol,
                        m.options.max_resolution};
}

sphd_status sphd_mz_sweep(const sphd_mz_config* cfg, char** csv, char** summary) {
  return guarded([&] {
    need(cfg, "config");
    sphd::MZSweepConfig m;
    m.d = cfg->d;
    m.m = cfg->m;
    if (cfg->counts && cfg->ncounts > 0) m.counts.assign(cfg->counts, cfg->counts + cfg->ncounts);
    m.trials = cfg->trials;
    m.seed = cfg->seed;
    m.anchors = cfg->anchors;
    m.options = {cfg->r_d, cfg->rel_tol, cfg->max_resolution};
    const auto rows = sphd::mz_sweep(m);
    if (csv) *csv = dup_string(sphd::mz_to_csv(rows));
    if (summary) {
      nlohmann::json j;
      j["d"] = m.d;
      j["m"] = m.m;
      j["counts"] = m.counts;
      j["trials"] = m.trials;
      j["seed"] = m.seed;
      j["r_d"] = m.options.r_d;
      j["value"] = ratio_summary(rows, false);
      j["gradient"] = ratio_summary(rows, true);
      *summary = dup_string(j.dump(2));
    }
  });
}

sphd_status sphd_mz_threshold(int d, int m, int trials, uint64_t seed, int n_lo, int n_hi, char** json) {
  return guarded([&] {
    need(json, "json");
    const auto r = sphd::estimate_mesh_threshold(d, m, trials, seed, n_lo, n_hi);
    nlohmann::json j = {{"d", r.d},           {"m", r.m},         {"found", r.found},
                        {"N", r.n},           {"meshNorm", r.mesh_norm}, {"empiricalR", r.empirical_r},
                        {"trials", trials},   {"seed", seed},     {"searchRange", {n_lo, n_hi}}};
    *json = dup_string(j.dump(2));
  });
}

sphd_status sphd_constants(int d, int t, double r_d, char** json) {
  return guarded([&] {
    need(json, "json");
    sphd::require(t >= sphd::kMinDegree && t <= sphd::kMaxDegree, sphd::ErrorCode::OutOfRange,
                  "t must be in [1, 200]");
    sphd::require(r_d > 0.0, sphd::ErrorCode::InvalidArgument, "r_d must be positive");
    const auto b = sphd::measure_diameter_constant(d);
    const double c = std::pow(54.0 * d * b.constant / r_d, d);
    nlohmann::json j = {{"d", d},
                        {"t", t},
                        {"B_d", b.constant},
                        {"counts", b.counts},
                        {"scaledNorms", b.scaled_norms},
                        {"r_d", r_d},
                        {"C_d", c},
                        {"C_d_t_d", c * std::pow(static_cast<double>(t), d)},
                        {"lowerBound", sphd::lower_bound(d, t)}};
    *json = dup_string(j.dump(2));
  });
}

}  // extern "C"
