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
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphdesign/sphdesign.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRefuted = 2;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(sphd_status s) {
  if (s != SPHD_OK) throw Failure(std::string(sphd_status_name(s)) + ": " + sphd_last_error());
}

struct StringDeleter {
  void operator()(char* s) const { sphd_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct Handles {
  void operator()(sphd_kernel* k) const { sphd_kernel_free(k); }
  void operator()(sphd_points* p) const { sphd_points_free(p); }
  void operator()(sphd_partition* p) const { sphd_partition_free(p); }
  void operator()(sphd_report* r) const { sphd_report_free(r); }
};
using Kernel = std::unique_ptr<sphd_kernel, Handles>;
using Points = std::unique_ptr<sphd_points, Handles>;
using Partition = std::unique_ptr<sphd_partition, Handles>;
using Report = std::unique_ptr<sphd_report, Handles>;

std::string take(char* s) { return OwnedString(s).get(); }

// Artifacts go to a file (atomically) or to stdout when no path is given.
void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    if (!contents.empty() && contents.back() != '\n') std::cout << '\n';
    return;
  }
  check(sphd_write_file_atomic(path.c_str(), contents.c_str()));
}

json invocation;  // filled in main

json with_invocation(json doc, std::optional<std::uint64_t> seed = std::nullopt) {
  json inv = invocation;
  if (seed) inv["seed"] = *seed;
  doc["invocation"] = inv;
  return doc;
}

// ---- subcommands -------------------------------------------------------

struct BoundsArgs {
  int d = 0;
  int d_max = 0;
  int t_min = 1;
  int t_max = 0;
  std::string json_out;
};

int run_bounds(const BoundsArgs& a) {
  const int d_lo = a.d > 0 ? a.d : 1;
  const int d_hi = a.d > 0 ? a.d : a.d_max;
  if (d_hi < d_lo) throw Failure("give --d or --d-max");
  if (a.t_max < a.t_min) throw Failure("--t-max must be >= --t-min");
  json rows = json::array();
  std::printf("%4s %4s %12s\n", "d", "t", "lower_bound");
  for (int d = d_lo; d <= d_hi; ++d) {
    for (int t = a.t_min; t <= a.t_max; ++t) {
      std::uint64_t lb = 0;
      check(sphd_lower_bound(d, t, &lb));
      std::printf("%4d %4d %12llu\n", d, t, static_cast<unsigned long long>(lb));
      rows.push_back({{"d", d}, {"t", t}, {"lowerBound", lb}});
    }
  }
  if (!a.json_out.empty()) emit(a.json_out, with_invocation({{"bounds", rows}}).dump(2));
  return kExitOk;
}

struct PartitionArgs {
  int d = 2;
  int n = 0;
  std::string out;
  std::string points_out;
};

int run_partition(const PartitionArgs& a) {
  sphd_partition* raw = nullptr;
  check(sphd_partition_create(a.d, a.n, &raw));
  Partition p(raw);
  char* s = nullptr;
  check(sphd_partition_json(p.get(), &s));
  emit(a.out, with_invocation(json::parse(take(s))).dump(2));
  if (!a.points_out.empty()) {
    sphd_points* reps = nullptr;
    check(sphd_partition_representatives(p.get(), &reps));
    Points owned(reps);
    check(sphd_points_write(owned.get(), a.points_out.c_str()));
  }
  return kExitOk;
}

struct SeedArgs {
  int d = 2;
  int t = 1;
  int n = 0;
  std::string out;
};

int run_seed(const SeedArgs& a) {
  sphd_points* raw = nullptr;
  check(sphd_points_seed(a.d, a.t, a.n, &raw));
  Points p(raw);
  if (a.out.empty() || a.out == "-") {
    char* s = nullptr;
    check(sphd_points_format(p.get(), &s));
    std::cout << take(s);
  } else {
    check(sphd_points_write(p.get(), a.out.c_str()));
  }
  return kExitOk;
}

struct FindArgs {
  sphd_finder_config cfg{};
  bool no_cg = false;
  std::string out;
  std::string report;
  std::string trace;
  bool quiet = false;
};

int run_find(FindArgs& a) {
  auto& c = a.cfg;
  std::uint64_t lb = 0;
  check(sphd_lower_bound(c.d, c.t, &lb));
  if (!a.quiet) {
    char* s = nullptr;
    check(sphd_constants(c.d, c.t, 1.0, &s));
    const auto k = json::parse(take(s));
    std::fprintf(stderr, "lower bound for a %d-design on S^%d: %llu\n", c.t, c.d, static_cast<unsigned long long>(lb));
    std::fprintf(stderr, "existence guarantee C_d t^d with measured B_d=%.4f, r_d=1: %.3e\n",
                 k["B_d"].get<double>(), k["C_d_t_d"].get<double>());
  }
  if (static_cast<std::uint64_t>(c.n) < lb) {
    throw Failure("N = " + std::to_string(c.n) + " is below the lower bound " + std::to_string(lb) +
                  ": no spherical " + std::to_string(c.t) + "-design on S^" + std::to_string(c.d) +
                  " has fewer points");
  }
  c.conjugate_gradient = a.no_cg ? 0 : 1;
  sphd_points* pts = nullptr;
  sphd_report* rep = nullptr;
  char* trace = nullptr;
  check(sphd_find_design(&c, &pts, &rep, a.trace.empty() ? nullptr : &trace));
  Points points(pts);
  Report report(rep);
  const std::string trace_csv = trace ? take(trace) : std::string();

  check(sphd_report_set_meta(report.get(), "invocation", with_invocation({}, c.seed)["invocation"].dump().c_str()));
  char* js = nullptr;
  check(sphd_report_json(report.get(), &js));
  const std::string report_json = take(js);

  if (!a.out.empty()) check(sphd_points_write(points.get(), a.out.c_str()));
  if (!a.trace.empty()) emit(a.trace, trace_csv);
  if (!a.report.empty()) {
    emit(a.report, report_json);
  } else if (!a.out.empty()) {
    std::cout << report_json << '\n';
  } else {
    char* s = nullptr;
    check(sphd_points_format(points.get(), &s));
    std::cout << take(s);
  }
  const bool ok = sphd_report_verdict(report.get()) != 0;
  std::fprintf(stderr, "%s: defect %.3e\n", ok ? "design found" : "no design found", sphd_report_defect(report.get()));
  return ok ? kExitOk : kExitRefuted;
}

struct VerifyArgs {
  int t = 0;
  std::string in;
  std::string catalog;
  double tolerance = 1e-10;
  std::string report;
};

int run_verify(const VerifyArgs& a) {
  if (a.in.empty() == a.catalog.empty()) throw Failure("give exactly one of --in and --catalog");
  sphd_points* raw = nullptr;
  if (!a.in.empty()) {
    check(sphd_points_read(a.in.c_str(), &raw));
  } else {
    check(sphd_points_catalog(a.catalog.c_str(), &raw));
  }
  Points points(raw);
  sphd_kernel* kraw = nullptr;
  check(sphd_kernel_create(sphd_points_dim(points.get()), a.t, &kraw));
  Kernel kernel(kraw);
  sphd_report* rep = nullptr;
  check(sphd_verify(kernel.get(), points.get(), a.tolerance, &rep));
  Report report(rep);
  json source = a.in.empty() ? json{{"catalog", a.catalog}} : json{{"file", a.in}};
  check(sphd_report_set_meta(report.get(), "source", source.dump().c_str()));
  check(sphd_report_set_meta(report.get(), "invocation", invocation.dump().c_str()));
  char* js = nullptr;
  check(sphd_report_json(report.get(), &js));
  emit(a.report, take(js));
  return sphd_report_verdict(report.get()) ? kExitOk : kExitRefuted;
}

struct FlowArgs {
  sphd_lemma1_config cfg{};
  bool euler = false;
  std::string out;
  std::string trace;
  int trace_trial = 0;
};

int run_flow(FlowArgs& a) {
  a.cfg.euler = a.euler ? 1 : 0;
  char* js = nullptr;
  int positive = 0;
  check(sphd_lemma1_run(&a.cfg, &js, &positive));
  const auto doc = with_invocation(json::parse(take(js)), a.cfg.seed);
  emit(a.out, doc.dump(2));
  if (!a.trace.empty()) {
    char* csv = nullptr;
    check(sphd_lemma1_trace(&a.cfg, a.trace_trial, &csv));
    emit(a.trace, take(csv));
  }
  std::fprintf(stderr, "final average positive in %d/%d trials\n", positive, a.cfg.trials);
  return kExitOk;
}

struct MZArgs {
  int d = 2;
  std::vector<int> m{5};
  std::vector<int> n{2000};
  int trials = 100;
  std::uint64_t seed = 1;
  int anchors = 0;
  double r_d = 1.0;
  double rel_tol = 1e-8;
  int max_resolution = 128;
  std::string out;
  std::string summary;
  bool threshold = false;
  int n_lo = 10;
  int n_hi = 4000;
};

int run_mz(const MZArgs& a) {
  std::string csv;
  json summaries = json::array();
  for (int m : a.m) {
    sphd_mz_config c;
    sphd_mz_config_init(&c);
    c.d = a.d;
    c.m = m;
    c.counts = a.n.data();
    c.ncounts = a.n.size();
    c.trials = a.trials;
    c.seed = a.seed;
    c.anchors = a.anchors;
    c.r_d = a.r_d;
    c.rel_tol = a.rel_tol;
    c.max_resolution = a.max_resolution;
    char* rows = nullptr;
    char* sum = nullptr;
    check(sphd_mz_sweep(&c, &rows, &sum));
    std::string block = take(rows);
    if (!csv.empty()) block.erase(0, block.find('\n') + 1);  // one header
    csv += block;
    auto s = json::parse(take(sum));
    if (a.threshold) {
      char* th = nullptr;
      check(sphd_mz_threshold(a.d, m, a.trials, a.seed, a.n_lo, a.n_hi, &th));
      s["threshold"] = json::parse(take(th));
    }
    std::fprintf(stderr, "m=%d: value ratios in bounds %d/%d, gradient ratios in bounds %d/%d\n", m,
                 s["value"]["withinBounds"].get<int>(), s["value"]["checks"].get<int>(),
                 s["gradient"]["withinBounds"].get<int>(), s["gradient"]["checks"].get<int>());
    summaries.push_back(std::move(s));
  }
  emit(a.out, csv);
  if (!a.summary.empty()) emit(a.summary, with_invocation({{"sweeps", summaries}}, a.seed).dump(2));
  return kExitOk;
}

struct ConstantsArgs {
  int d = 2;
  int t = 1;
  double r_d = 1.0;
  std::string out;
};

int run_constants(const ConstantsArgs& a) {
  char* js = nullptr;
  check(sphd_constants(a.d, a.t, a.r_d, &js));
  emit(a.out, with_invocation(json::parse(take(js))).dump(2));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical t-design construction and verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sphd_version()));
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0: all cores)");

  BoundsArgs bounds;
  auto* cb = app.add_subcommand("bounds", "lower bounds on the size of t-designs");
  cb->add_option("--d", bounds.d, "sphere dimension")->check(CLI::Range(1, 8));
  cb->add_option("--d-max", bounds.d_max, "tabulate d = 1..d-max")->check(CLI::Range(1, 8));
  cb->add_option("--t-min", bounds.t_min, "smallest degree")->check(CLI::PositiveNumber);
  cb->add_option("--t-max", bounds.t_max, "largest degree")->required()->check(CLI::PositiveNumber);
  cb->add_option("--json", bounds.json_out, "also write the table as JSON");

  PartitionArgs part;
  auto* cp = app.add_subcommand("partition", "equal-area partition as JSON");
  cp->add_option("--d", part.d, "sphere dimension")->required();
  cp->add_option("--n", part.n, "number of cells")->required();
  cp->add_option("--out", part.out, "output file (default stdout)");
  cp->add_option("--points", part.points_out, "also write the cell representatives");

  SeedArgs seed;
  auto* cs = app.add_subcommand("seed", "equal-area seed points");
  cs->add_option("--d", seed.d, "sphere dimension")->required();
  cs->add_option("--t", seed.t, "degree (does not affect the seed)");
  cs->add_option("--n", seed.n, "number of points")->required();
  cs->add_option("--out", seed.out, "point file (default stdout)");

  FindArgs find;
  sphd_finder_config_init(&find.cfg);
  auto* cf = app.add_subcommand("find", "search for a t-design of a given size");
  cf->add_option("--d", find.cfg.d, "sphere dimension")->required();
  cf->add_option("--t", find.cfg.t, "degree")->required();
  cf->add_option("--n", find.cfg.n, "number of points")->required();
  cf->add_option("--seed", find.cfg.seed, "seed for restart perturbations")->capture_default_str();
  cf->add_option("--max-iterations", find.cfg.max_iterations, "iterations per attempt")->capture_default_str();
  cf->add_option("--target", find.cfg.defect_target, "defect target")->capture_default_str();
  cf->add_option("--restarts", find.cfg.restarts, "perturbed restarts")->capture_default_str();
  cf->add_option("--perturbation", find.cfg.perturbation, "restart noise in units of N^(-1/d)")
      ->capture_default_str();
  cf->add_option("--armijo", find.cfg.armijo, "sufficient decrease constant")->capture_default_str();
  cf->add_flag("--no-cg", find.no_cg, "plain gradient descent");
  cf->add_option("--out", find.out, "point file for the best configuration");
  cf->add_option("--report", find.report, "report JSON file");
  cf->add_option("--trace", find.trace, "per-iteration CSV trace");
  cf->add_flag("--quiet", find.quiet, "skip the size guidance");

  VerifyArgs verify;
  auto* cv = app.add_subcommand("verify", "verify a point file as a t-design");
  cv->add_option("--t", verify.t, "degree")->required();
  cv->add_option("--in", verify.in, "point file");
  cv->add_option("--catalog", verify.catalog, "named configuration, e.g. icosahedron or polygon(5)");
  cv->add_option("--tolerance", verify.tolerance, "defect tolerance")->capture_default_str();
  cv->add_option("--report", verify.report, "report file (default stdout)");

  FlowArgs flow;
  sphd_lemma1_config_init(&flow.cfg);
  auto* cfl = app.add_subcommand("flow-demo", "clamped gradient flow positivity experiment");
  cfl->add_option("--d", flow.cfg.d, "sphere dimension")->capture_default_str();
  cfl->add_option("--t", flow.cfg.t, "degree")->capture_default_str();
  cfl->add_option("--n", flow.cfg.n, "number of points")->capture_default_str();
  cfl->add_option("--r-d", flow.cfg.r_d, "mesh constant r_d")->capture_default_str();
  cfl->add_option("--trials", flow.cfg.trials, "random polynomials")->capture_default_str();
  cfl->add_option("--seed", flow.cfg.seed, "seed of the first trial")->capture_default_str();
  cfl->add_option("--anchors", flow.cfg.anchors, "kernel anchors per polynomial (0: 2 dim P_t)");
  cfl->add_option("--rule-resolution", flow.cfg.rule_resolution, "quadrature resolution")->capture_default_str();
  cfl->add_option("--steps", flow.cfg.steps, "integration steps")->capture_default_str();
  cfl->add_option("--slack", flow.cfg.slope_slack, "slack on the slope bound")->capture_default_str();
  cfl->add_flag("--euler", flow.euler, "projected Euler instead of RK4");
  cfl->add_option("--out", flow.out, "report JSON (default stdout)");
  cfl->add_option("--trace", flow.trace, "CSV trace of one trial");
  cfl->add_option("--trace-trial", flow.trace_trial, "trial index for --trace");

  MZArgs mz;
  auto* cm = app.add_subcommand("mz-test", "sampling inequality sweeps on equal-area partitions");
  cm->add_option("--d", mz.d, "sphere dimension")->capture_default_str();
  cm->add_option("--m", mz.m, "polynomial degrees")->capture_default_str();
  cm->add_option("--n", mz.n, "partition sizes")->capture_default_str();
  cm->add_option("--trials", mz.trials, "random polynomials per (m, N)")->capture_default_str();
  cm->add_option("--seed", mz.seed, "random seed")->capture_default_str();
  cm->add_option("--anchors", mz.anchors, "kernel anchors per polynomial (0: 2 dim P_m)");
  cm->add_option("--r-d", mz.r_d, "mesh constant r_d")->capture_default_str();
  cm->add_option("--rel-tol", mz.rel_tol, "integral refinement agreement")->capture_default_str();
  cm->add_option("--max-resolution", mz.max_resolution, "integral refinement cap")->capture_default_str();
  cm->add_option("--out", mz.out, "CSV (default stdout)");
  cm->add_option("--summary", mz.summary, "summary JSON");
  cm->add_flag("--threshold", mz.threshold, "bisect the empirical mesh threshold");
  cm->add_option("--n-lo", mz.n_lo, "bisection lower end")->capture_default_str();
  cm->add_option("--n-hi", mz.n_hi, "bisection upper end")->capture_default_str();

  ConstantsArgs consts;
  auto* cc = app.add_subcommand("constants", "measured partition constant and size guidance");
  cc->add_option("--d", consts.d, "sphere dimension")->required();
  cc->add_option("--t", consts.t, "degree")->capture_default_str();
  cc->add_option("--r-d", consts.r_d, "mesh constant r_d")->capture_default_str();
  cc->add_option("--out", consts.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  json args = json::array();
  for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
  invocation = {{"argv", args}, {"version", sphd_version()}};

  try {
    check(sphd_set_threads(threads));
    invocation["threads"] = sphd_threads();
    if (*cb) return run_bounds(bounds);
    if (*cp) return run_partition(part);
    if (*cs) return run_seed(seed);
    if (*cf) return run_find(find);
    if (*cv) return run_verify(verify);
    if (*cfl) return run_flow(flow);
    if (*cm) return run_mz(mz);
    if (*cc) return run_constants(consts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
