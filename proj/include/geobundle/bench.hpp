#pragma once

// Benchmark harness: experiment setup, timed solver runs and table output.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "geobundle/errors.hpp"
#include "geobundle/manifold.hpp"
#include "geobundle/objectives/median.hpp"
#include "geobundle/objectives/procrustes.hpp"
#include "geobundle/objectives/tv.hpp"
#include "geobundle/solver.hpp"

namespace geobundle::bench {

enum class Experiment { median, tv_denoise, procrustes };

inline std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::median: return "median";
    case Experiment::tv_denoise: return "tv-denoise";
    case Experiment::procrustes: return "procrustes";
  }
  return "unknown";
}

inline std::optional<Experiment> parse_experiment(std::string_view s) {
  if (s == "median") return Experiment::median;
  if (s == "tv-denoise") return Experiment::tv_denoise;
  if (s == "procrustes") return Experiment::procrustes;
  return std::nullopt;
}

inline std::optional<Geometry> parse_geometry(std::string_view s) {
  for (Geometry g : {Geometry::euclidean, Geometry::sphere, Geometry::hyperbolic, Geometry::spd,
                     Geometry::special_orthogonal})
    if (s == geobundle::to_string(g)) return g;
  return std::nullopt;
}

enum class Format { csv, markdown };

struct ExperimentConfig {
  Experiment experiment = Experiment::median;
  Geometry manifold = Geometry::hyperbolic;
  int dim = 2;
  std::vector<std::string> solvers{"rcbm", "sgm"};
  std::uint64_t seed = 0;
  int n_data = 100;      // median
  int signal_len = 64;   // tv-denoise
  double alpha = 0.5;    // tv-denoise
  double noise = 0.1;    // tv-denoise
  int rows = 100;        // procrustes n
  int cols = 20;         // procrustes d
  SolverParams params;   // RCBM parameters; max_iters also caps SGM
  std::optional<double> sgm_step;  // geodesic length of the first SGM step
  int reps = 3;

  void validate() const {
    require(!solvers.empty(), "config: at least one solver is required");
    for (const auto& s : solvers) require(s == "rcbm" || s == "sgm", "config: unknown solver '" + s + "'");
    require(dim >= 1, "config: dimension must be positive");
    require(reps >= 1, "config: need at least one timed repetition");
    params.validate();
    if (sgm_step) require(*sgm_step > 0.0, "config: SGM step must be positive");
    switch (experiment) {
      case Experiment::median:
        require(n_data >= 1, "config: need at least one data point");
        require(manifold != Geometry::special_orthogonal || dim >= 2, "config: SO(d) needs d >= 2");
        break;
      case Experiment::tv_denoise:
        require(manifold == Geometry::hyperbolic && dim == 2, "config: tv-denoise runs on hyperbolic(2) signals");
        require(signal_len >= 16, "config: signal length must be at least 16");
        require(alpha > 0.0, "config: alpha must be positive");
        require(noise >= 0.0, "config: noise must be nonnegative");
        break;
      case Experiment::procrustes:
        require(manifold == Geometry::special_orthogonal, "config: procrustes runs on so");
        require(cols >= 2 && rows >= cols, "config: procrustes needs rows >= cols >= 2");
        break;
    }
  }
};

/// A built experiment: the problem, its start point and what the oracles refer to.
struct Instance {
  ManifoldKind kind;
  Problem problem;
  Point start;
  double sgm_step;                              // default geodesic length of the first SGM step
  std::optional<Point> clean;                   // ground truth for tv-denoise
  std::shared_ptr<const void> data;             // keeps the objective data alive
  std::shared_ptr<const MedianProblem> median;  // set for median runs
};

namespace detail {

inline ManifoldKind kind_for(Geometry g, int dim) {
  switch (g) {
    case Geometry::euclidean: return ManifoldKind::euclidean(dim);
    case Geometry::sphere: return ManifoldKind::sphere(dim);
    case Geometry::hyperbolic: return ManifoldKind::hyperbolic(dim);
    case Geometry::spd: return ManifoldKind::spd(dim);
    case Geometry::special_orthogonal: return ManifoldKind::special_orthogonal(dim);
  }
  throw ContractViolation("unknown geometry");
}

inline double data_spread(Geometry g) {
  switch (g) {
    case Geometry::spd: return 0.5;
    case Geometry::sphere: return 0.3;
    case Geometry::special_orthogonal: return 0.3;
    default: return 1.0;
  }
}

inline Instance build_median(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  const ManifoldKind kind = kind_for(cfg.manifold, cfg.dim);
  const Point base = reference_point(kind);
  const auto count = static_cast<std::size_t>(cfg.n_data);
  std::vector<Point> data;
  std::optional<GeodesicBall> domain;
  CurvatureProfile profile;
  if (cfg.manifold == Geometry::sphere) {
    const double radius = std::numbers::pi / 6.0;
    data = gaussian_data(base, count, data_spread(cfg.manifold), rng, radius - 1e-9);
    domain = GeodesicBall{base, radius};
    profile = profile_for(kind, std::numbers::pi / 3.0);
  } else if (cfg.manifold == Geometry::special_orthogonal) {
    const double delta = std::numbers::pi / (3.0 * std::sqrt(curvature_for(kind).Omega));
    data = gaussian_data(base, count, data_spread(cfg.manifold), rng, 0.5 * delta - 1e-9);
    domain = GeodesicBall{base, 0.5 * delta};
    profile = profile_for(kind, delta);
  } else {
    data = gaussian_data(base, count, data_spread(cfg.manifold), rng);
    const double spread = max_pairwise_distance(data);
    profile = cfg.manifold == Geometry::euclidean ? CurvatureProfile{} : profile_for(kind, 2.0 * std::max(spread, 1e-12));
  }
  std::vector<double> weights(count, 1.0 / static_cast<double>(count));
  auto prob = std::make_shared<const MedianProblem>(MedianProblem{kind, std::move(data), std::move(weights), std::move(domain)});
  prob->validate();
  auto [i, j] = farthest_pair(prob->data);
  (void)j;
  Problem problem = make_problem(*prob, profile);
  const double diameter = count > 1 ? max_pairwise_distance(prob->data) : 1.0;
  Instance out{kind, std::move(problem), prob->data[i], 0.5 * diameter, std::nullopt, prob, prob};
  return out;
}

inline Instance build_tv(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  Signal sig = square_wave_signal(SquareWave{-6.0, 6.0, 3.0, cfg.signal_len}, rng, cfg.noise);
  auto prob = std::make_shared<TVProblem>(
      TVProblem{ManifoldKind::hyperbolic(2), sig.noisy.kind().count(), sig.noisy, cfg.alpha});
  prob->validate();
  const double delta = 3.0 * std::max(max_component_distance(sig.noisy), 1e-12);
  Problem problem = make_problem(*prob, profile_for(prob->kind(), delta));
  return Instance{prob->kind(), std::move(problem), sig.noisy, 0.1, std::move(sig.clean), prob, nullptr};
}

inline Instance build_procrustes(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  auto prob = std::make_shared<ProcrustesProblem>();
  prob->A = gaussian_matrix(cfg.rows, cfg.cols, rng);
  prob->B = gaussian_matrix(cfg.rows, cfg.cols, rng);
  prob->validate();
  const ManifoldKind kind = prob->kind();
  const double delta = std::numbers::pi / (3.0 * std::sqrt(curvature_for(kind).Omega));
  Point start = procrustes_init(*prob);
  Problem problem = make_problem(*prob, profile_for(kind, delta));
  return Instance{kind, std::move(problem), std::move(start), 3.0, std::nullopt, prob, nullptr};
}

}  // namespace detail

inline Instance build_instance(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.experiment) {
    case Experiment::median: return detail::build_median(cfg);
    case Experiment::tv_denoise: return detail::build_tv(cfg);
    case Experiment::procrustes: return detail::build_procrustes(cfg);
  }
  throw ContractViolation("unknown experiment");
}

/// Runs one solver on a built instance.
inline SolverReport run_solver(const std::string& solver, const Instance& inst, const ExperimentConfig& cfg,
                               const IterationObserver& observer = {}) {
  SolverParams params = cfg.params;
  params.seed = cfg.seed;
  if (solver == "rcbm") return rcbm(inst.problem, inst.start, params, observer);
  const double a = cfg.sgm_step.value_or(inst.sgm_step);
  return sgm(inst.problem, inst.start, normalized_diminishing_step(a), params.max_iters, params.seed, params.beta);
}

// ---------------------------------------------------------------- rows

struct ReportRow {
  std::string solver;
  std::string manifold;
  int dim = 0;
  std::size_t iterations = 0;
  double time_sec = 0.0;
  double objective = 0.0;
  std::optional<double> error;  // mse against the clean signal (tv-denoise only)
  std::string termination;
  std::uint64_t seed = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// A row together with the untimed run it summarizes.
struct Cell {
  ReportRow row;
  std::optional<SolverReport> report;  // empty when the solver threw
  std::string diagnostic;
};

inline std::string manifold_label(const ExperimentConfig& cfg, const Instance& inst) {
  std::string name = geobundle::to_string(cfg.manifold);
  if (inst.kind.is_power()) name += "^" + std::to_string(inst.kind.count());
  return name;
}

inline bool successful(const std::string& termination) {
  return termination == geobundle::to_string(Termination::tolerance_met) ||
         termination == geobundle::to_string(Termination::iteration_cap);
}

/// One untimed warm-up per solver records iterations and objective; the reported
/// time is the median over cfg.reps timed repetitions.
inline std::vector<Cell> run(const ExperimentConfig& cfg, const Instance& inst) {
  std::vector<Cell> cells;
  for (const auto& solver : cfg.solvers) {
    Cell cell;
    cell.row.solver = solver;
    cell.row.manifold = manifold_label(cfg, inst);
    cell.row.dim = cfg.experiment == Experiment::procrustes ? cfg.cols : cfg.dim;
    cell.row.seed = cfg.seed;
    try {
      SolverReport warm = run_solver(solver, inst, cfg);
      std::vector<double> times;
      for (int r = 0; r < cfg.reps; ++r) times.push_back(run_solver(solver, inst, cfg).wall_time);
      std::sort(times.begin(), times.end());
      cell.row.iterations = warm.iterations;
      cell.row.objective = warm.final_value;
      cell.row.time_sec = times[times.size() / 2];
      cell.row.termination = geobundle::to_string(warm.termination);
      if (inst.clean) cell.row.error = mse(warm.final_point, *inst.clean);
      cell.diagnostic = warm.diagnostic;
      cell.report = std::move(warm);
    } catch (const std::exception& err) {
      cell.row.termination = "error";
      cell.diagnostic = err.what();
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

inline std::vector<Cell> run(const ExperimentConfig& cfg) { return run(cfg, build_instance(cfg)); }

// ---------------------------------------------------------------- output

inline const char* kCsvHeader = "solver,manifold,dim,iterations,time_sec,objective,error,termination,seed";

inline std::string format_double(double v, std::chars_format fmt, int precision) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, fmt, precision);
  return std::string(buf, res.ptr);
}

/// Objective and error: 12 significant digits in scientific notation.
inline std::string format_value(double v) { return format_double(v, std::chars_format::scientific, 11); }
inline std::string format_time(double v) { return format_double(v, std::chars_format::fixed, 6); }

inline std::vector<std::string> row_fields(const ReportRow& r) {
  return {r.solver,
          r.manifold,
          std::to_string(r.dim),
          std::to_string(r.iterations),
          format_time(r.time_sec),
          format_value(r.objective),
          r.error ? format_value(*r.error) : std::string(),
          r.termination,
          std::to_string(r.seed)};
}

inline void emit(const std::vector<ReportRow>& rows, Format format, std::ostream& out) {
  if (format == Format::csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
      const auto f = row_fields(r);
      for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
      out << '\n';
    }
    return;
  }
  out << "| solver | manifold | dim | iterations | time_sec | objective | error | termination | seed |\n";
  out << "|---|---|---:|---:|---:|---:|---:|---|---:|\n";
  for (const auto& r : rows) {
    out << '|';
    for (const auto& f : row_fields(r)) out << ' ' << f << " |";
    out << '\n';
  }
}

inline std::string emit_string(const std::vector<ReportRow>& rows, Format format) {
  std::ostringstream os;
  emit(rows, format, os);
  return os.str();
}

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError(std::string("csv: bad ") + what + " field '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

/// Parses CSV produced by emit(); throws ParseError on anything else.
inline std::vector<ReportRow> parse_csv(std::string_view text) {
  auto lines = detail::split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader) throw ParseError("csv: missing or unexpected header");
  std::vector<ReportRow> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto f = detail::split(lines[li], ',');
    if (f.size() != 9) throw ParseError("csv: line " + std::to_string(li + 1) + " has the wrong field count");
    ReportRow r;
    r.solver = std::string(f[0]);
    r.manifold = std::string(f[1]);
    r.dim = detail::parse_number<int>(f[2], "dim");
    r.iterations = detail::parse_number<std::size_t>(f[3], "iterations");
    r.time_sec = detail::parse_number<double>(f[4], "time_sec");
    r.objective = detail::parse_number<double>(f[5], "objective");
    if (!f[6].empty()) r.error = detail::parse_number<double>(f[6], "error");
    r.termination = std::string(f[7]);
    r.seed = detail::parse_number<std::uint64_t>(f[8], "seed");
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Per-iteration trace of every cell, long format.
inline void emit_trace(const std::vector<Cell>& cells, std::ostream& out) {
  out << "solver,iteration,objective,g_norm,epsilon,sigma,xi,step,t\n";
  for (const auto& c : cells) {
    if (!c.report) continue;
    for (std::size_t k = 0; k < c.report->trace.size(); ++k) {
      const auto& r = c.report->trace[k];
      out << c.row.solver << ',' << k << ',' << format_value(r.objective) << ',' << format_value(r.g_norm) << ','
          << format_value(r.epsilon) << ',' << format_value(r.sigma) << ',' << format_value(r.xi) << ','
          << geobundle::to_string(r.step) << ',' << format_value(r.t) << '\n';
    }
  }
}

}  // namespace geobundle::bench
