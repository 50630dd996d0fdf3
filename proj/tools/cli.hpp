#pragma once

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geobundle/bench.hpp"

namespace geobundle::cli {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitBadArguments = 2;

inline std::optional<std::uint64_t> parse_seed(const std::string& s) {
  std::uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Entry point of the `geobundle` tool. Results go to `out` unless --out names
/// a file; messages go to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace geobundle::bench;

  CLI::App app{"Riemannian convex bundle method benchmarks"};
  app.name("geobundle");

  std::string experiment_name;
  std::string manifold_name;
  std::optional<int> dim;
  std::vector<std::string> solvers{"rcbm", "sgm"};
  std::optional<std::uint64_t> seed;
  std::optional<int> n_data, signal_len, rows, cols, reps;
  std::optional<double> alpha, noise, m, beta, tol, sgm_step;
  std::optional<std::size_t> max_iters, bundle_cap;
  std::string out_path;
  std::string trace_path;
  std::string format_name = "csv";

  app.add_option("experiment", experiment_name, "median | tv-denoise | procrustes")
      ->required()
      ->check(CLI::IsMember({"median", "tv-denoise", "procrustes"}));
  app.add_option("--manifold", manifold_name, "euclidean | sphere | hyperbolic | spd | so")
      ->check(CLI::IsMember({"euclidean", "sphere", "hyperbolic", "spd", "so"}));
  app.add_option("--dim", dim, "manifold dimension (matrix size for spd and so)")->check(CLI::PositiveNumber);
  app.add_option("--solvers", solvers, "comma separated subset of rcbm,sgm")
      ->delimiter(',')
      ->check(CLI::IsMember({"rcbm", "sgm"}));
  app.add_option("--seed", seed, "RNG seed (falls back to GEOBUNDLE_SEED, then 0)");
  app.add_option("--n-data", n_data, "median: number of data points")->check(CLI::PositiveNumber);
  app.add_option("--signal-len", signal_len, "tv-denoise: signal length")->check(CLI::Range(16, 1 << 20));
  app.add_option("--alpha", alpha, "tv-denoise: regularization weight")->check(CLI::PositiveNumber);
  app.add_option("--noise", noise, "tv-denoise: noise standard deviation")->check(CLI::NonNegativeNumber);
  app.add_option("--rows", rows, "procrustes: n")->check(CLI::PositiveNumber);
  app.add_option("--cols", cols, "procrustes: d")->check(CLI::PositiveNumber);
  app.add_option("--m", m, "descent-test parameter in (0,1)");
  app.add_option("--beta", beta, "step contraction factor in (0,1)");
  app.add_option("--tol", tol, "stopping tolerance on -xi");
  app.add_option("--max-iters", max_iters, "iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--bundle-cap", bundle_cap, "bundle size cap")->check(CLI::PositiveNumber);
  app.add_option("--sgm-step", sgm_step, "geodesic length of the first subgradient step")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_option("--format", format_name, "csv | markdown")->check(CLI::IsMember({"csv", "markdown"}));
  app.add_option("--reps", reps, "timed repetitions per solver")->check(CLI::PositiveNumber);
  app.add_option("--trace", trace_path, "write per-iteration traces as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitBadArguments;
  }

  ExperimentConfig cfg;
  cfg.experiment = *parse_experiment(experiment_name);
  switch (cfg.experiment) {
    case Experiment::median: cfg.manifold = Geometry::hyperbolic; break;
    case Experiment::tv_denoise: cfg.manifold = Geometry::hyperbolic; break;
    case Experiment::procrustes: cfg.manifold = Geometry::special_orthogonal; break;
  }
  if (!manifold_name.empty()) cfg.manifold = *parse_geometry(manifold_name);
  if (dim) cfg.dim = *dim;
  cfg.solvers = solvers;

  if (seed) {
    cfg.seed = *seed;
  } else if (const char* env = std::getenv("GEOBUNDLE_SEED")) {
    auto v = parse_seed(env);
    if (!v) {
      err << "geobundle: GEOBUNDLE_SEED is not an unsigned 64-bit integer: '" << env << "'\n";
      return kExitBadArguments;
    }
    cfg.seed = *v;
  }

  if (n_data) cfg.n_data = *n_data;
  if (signal_len) cfg.signal_len = *signal_len;
  if (alpha) cfg.alpha = *alpha;
  if (noise) cfg.noise = *noise;
  if (rows) cfg.rows = *rows;
  if (cols) cfg.cols = *cols;
  else if (dim && cfg.experiment == Experiment::procrustes) cfg.cols = *dim;
  if (cfg.experiment == Experiment::procrustes) cfg.dim = cfg.cols;
  if (m) cfg.params.m = *m;
  if (beta) cfg.params.beta = *beta;
  if (tol) cfg.params.tol = *tol;
  if (max_iters) cfg.params.max_iters = *max_iters;
  if (bundle_cap) cfg.params.bundle_cap = *bundle_cap;
  if (sgm_step) cfg.sgm_step = *sgm_step;
  if (reps) cfg.reps = *reps;
  const Format format = format_name == "markdown" ? Format::markdown : Format::csv;

  try {
    cfg.validate();
  } catch (const ContractViolation& e) {
    err << "geobundle: " << e.what() << '\n';
    return kExitBadArguments;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "geobundle: cannot open '" << out_path << "' for writing\n";
      return kExitBadArguments;
    }
  }
  std::ofstream trace_file;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file) {
      err << "geobundle: cannot open '" << trace_path << "' for writing\n";
      return kExitBadArguments;
    }
  }

  std::vector<Cell> cells;
  try {
    cells = run(cfg, build_instance(cfg));
  } catch (const std::exception& e) {
    err << "geobundle: instance setup failed: " << e.what() << '\n';
    return kExitSolverFailure;
  }

  std::vector<ReportRow> table;
  bool ok = true;
  for (const auto& c : cells) {
    table.push_back(c.row);
    if (!successful(c.row.termination)) {
      ok = false;
      err << "geobundle: " << c.row.solver << " ended with " << c.row.termination;
      if (!c.diagnostic.empty()) err << ": " << c.diagnostic;
      err << '\n';
    }
  }

  std::ostream& sink = out_path.empty() ? out : file;
  emit(table, format, sink);
  sink.flush();
  if (!sink) {
    err << "geobundle: write failed\n";
    return kExitSolverFailure;
  }
  if (trace_file.is_open()) {
    emit_trace(cells, trace_file);
    if (!trace_file) {
      err << "geobundle: trace write failed\n";
      return kExitSolverFailure;
    }
  }
  return ok ? kExitOk : kExitSolverFailure;
}

}  // namespace geobundle::cli
