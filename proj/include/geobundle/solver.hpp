#pragma once

// Riemannian convex bundle method and a subgradient-method baseline.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geobundle/bundle.hpp"
#include "geobundle/curvature.hpp"
#include "geobundle/errors.hpp"
#include "geobundle/manifold.hpp"
#include "geobundle/problem.hpp"
#include "geobundle/qp.hpp"

namespace geobundle {

struct SolverParams {
  double m = 1e-3;      // descent-test parameter
  double beta = 0.975;  // step contraction factor
  double tol = 1e-8;    // stop once -xi <= tol
  std::size_t max_iters = 5000;
  std::size_t bundle_cap = 25;
  std::size_t domain_backtrack_cap = 100;
  std::size_t null_search_cap = 50;
  double qp_tol = kDefaultQpTolerance;
  std::uint64_t seed = 0;  // seeds the oracle stream

  void validate() const {
    require(m > 0.0 && m < 1.0, "solver: m must lie in (0,1)");
    require(beta > 0.0 && beta < 1.0, "solver: beta must lie in (0,1)");
    require(tol > 0.0, "solver: tol must be positive");
    require(max_iters >= 1 && bundle_cap >= 1, "solver: iteration and bundle caps must be positive");
    require(domain_backtrack_cap >= 1 && null_search_cap >= 1, "solver: loop caps must be positive");
    require(qp_tol > 0.0, "solver: qp_tol must be positive");
  }
};

enum class Termination { tolerance_met, iteration_cap, subproblem_failure };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::tolerance_met: return "tolerance_met";
    case Termination::iteration_cap: return "iteration_cap";
    case Termination::subproblem_failure: return "subproblem_failure";
  }
  return "unknown";
}

enum class StepKind { serious, null, stop };

inline std::string to_string(StepKind s) {
  switch (s) {
    case StepKind::serious: return "serious";
    case StepKind::null: return "null";
    case StepKind::stop: return "stop";
  }
  return "unknown";
}

struct TraceRecord {
  double objective = 0.0;  // f at the serious (RCBM) or current (SGM) iterate
  double g_norm = 0.0;
  double epsilon = 0.0;
  double sigma = 0.0;
  double xi = 0.0;
  StepKind step = StepKind::stop;
  double t = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct SolverReport {
  SolverReport(Point p, double f) : final_point(std::move(p)), final_value(f) {}

  Point final_point;
  double final_value = 0.0;
  std::size_t iterations = 0;
  std::size_t serious_steps = 0;
  std::size_t null_steps = 0;
  Termination termination = Termination::iteration_cap;
  std::vector<TraceRecord> trace;
  double wall_time = 0.0;
  std::string diagnostic;
  std::size_t clamped_errors = 0;        // linearization errors clamped at zero
  std::size_t null_search_cap_hits = 0;  // null-step searches that ran out of shrinks
  std::size_t cap_promotions = 0;        // cap hits whose last candidate passed the descent test
  double max_kkt_residual = 0.0;
};

/// Snapshot handed to an observer once per outer iteration, after the subproblem solve.
struct IterationView {
  std::size_t k;
  const Point& p;
  double fp;
  const Bundle& bundle;
  const SubproblemInput& input;
  const SubproblemSolution& solution;
};

using IterationObserver = std::function<void(const IterationView&)>;

/// No admissible step length was found within the backtracking cap.
class StepFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

struct TrialStep {
  double t = 1.0;
  Point q;
  std::size_t shrinks = 0;
};

/// Largest t = beta^j such that exp_p(t d) is interior and the geodesic does not
/// wrap around: dist(p, q) >= t|d| up to relative slack 1e-9.
inline TrialStep domain_backtrack(const Problem& problem, const Point& pk, const TangentVector& d,
                                  const SolverParams& params) {
  const double nd = norm(d);
  require(nd > 0.0, "domain_backtrack: direction must be nonzero");
  double t = 1.0;
  for (std::size_t j = 0; j <= params.domain_backtrack_cap; ++j, t *= params.beta) {
    Point q = exp_map(pk, d, t);
    if (!problem.is_interior(q)) continue;
    const double step = t * nd;
    double dist = 0.0;
    try {
      dist = distance(pk, q);
    } catch (const DomainError&) {
      continue;
    }
    if (dist >= step - 1e-9 * std::max(1.0, step)) return TrialStep{t, std::move(q), j};
  }
  throw StepFailure("domain backtracking exhausted " + std::to_string(params.domain_backtrack_cap) +
                    " shrinks; the minimizer may lie on the domain boundary");
}

struct Candidate {
  double t = 0.0;
  Point q;
  TangentVector X;  // subgradient at q
  double fq = 0.0;
};

struct NullStepResult {
  Candidate candidate;
  double e = 0.0;
  double r = 0.0;
  std::size_t shrinks = 0;
  bool cap_hit = false;
};

/// After a failed descent test, shrinks t by beta (re-evaluating the oracle each
/// time) while  m t xi >= <P_{p<-q} X_q, t d> - e - r  holds.
inline NullStepResult null_step_search(const Problem& problem, const Point& pk, double fpk, const TangentVector& g,
                                       double xi, Candidate first, double rho_value, const SolverParams& params,
                                       Rng& rng) {
  TangentVector d = -g;
  NullStepResult out{std::move(first), 0.0, 0.0, 0, false};
  for (;;) {
    auto& c = out.candidate;
    TangentVector log_q_p = log_map(c.q, pk);
    out.e = std::max(0.0, fpk - c.fq - inner(c.X, log_q_p));
    out.r = rho_value == 0.0 ? 0.0 : rho_value * norm(c.X) * norm(log_q_p);
    const double slope = inner(parallel_transport(c.q, pk, c.X), c.t * d);
    if (!(params.m * c.t * xi >= slope - out.e - out.r)) return out;
    if (out.shrinks == params.null_search_cap) {
      out.cap_hit = true;
      return out;
    }
    ++out.shrinks;
    c.t *= params.beta;
    c.q = exp_map(pk, d, c.t);
    c.X = problem.subgradient(c.q, rng);
    c.fq = problem.objective(c.q);
  }
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Riemannian convex bundle method. Returns the last serious iterate.
inline SolverReport rcbm(const Problem& problem, const Point& p0, const SolverParams& params,
                         const IterationObserver& observer = {}) {
  const auto start = std::chrono::steady_clock::now();
  params.validate();
  problem.curvature.validate();
  require(p0.kind() == problem.kind, "rcbm: initial point lives on the wrong manifold");
  require(problem.is_interior(p0), "rcbm: initial point must lie in the interior of the domain");

  Rng rng(params.seed);
  const double rho_value = rho(problem.curvature);

  Point p = p0;
  double fp = problem.objective(p);
  require(std::isfinite(fp), "rcbm: objective must be finite at the initial point");

  Bundle bundle(p, fp, rho_value, params.bundle_cap);
  bundle.append(0, p, problem.subgradient(p, rng), fp);

  SolverReport report(p, fp);
  std::size_t k = 0;
  for (;; ++k) {
    SubproblemInput in{bundle.gram(), bundle.linear()};
    Vector lambda;
    try {
      lambda = solve_simplex_qp(in, params.qp_tol);
    } catch (const QpError& err) {
      report.termination = Termination::subproblem_failure;
      report.diagnostic = err.what();
      break;
    }
    bundle.set_weights(lambda);
    const SubproblemSolution sol = aggregate(bundle, in, lambda);
    report.max_kkt_residual = std::max(report.max_kkt_residual, sol.kkt_residual);
    if (observer) observer(IterationView{k, p, fp, bundle, in, sol});

    TraceRecord rec{fp, norm(sol.g), sol.epsilon, sol.sigma, sol.xi, StepKind::stop, 0.0};
    if (-sol.xi <= params.tol) {
      report.termination = Termination::tolerance_met;
      report.trace.push_back(rec);
      break;
    }
    if (k >= params.max_iters) {
      report.termination = Termination::iteration_cap;
      report.trace.push_back(rec);
      break;
    }

    const TangentVector d = -sol.g;
    std::optional<TrialStep> trial;
    try {
      trial = domain_backtrack(problem, p, d, params);
    } catch (const StepFailure& err) {
      report.termination = Termination::subproblem_failure;
      report.diagnostic = err.what();
      report.trace.push_back(rec);
      break;
    }

    Candidate cand{trial->t, std::move(trial->q), zero_tangent(p), 0.0};
    cand.X = problem.subgradient(cand.q, rng);
    cand.fq = problem.objective(cand.q);

    Point next = p;
    double f_next = fp;
    if (cand.fq <= fp + params.m * cand.t * sol.xi) {
      next = cand.q;
      f_next = cand.fq;
      rec.step = StepKind::serious;
      rec.t = cand.t;
      ++report.serious_steps;
    } else {
      NullStepResult ns = null_step_search(problem, p, fp, sol.g, sol.xi, std::move(cand), rho_value, params, rng);
      cand = std::move(ns.candidate);
      rec.t = cand.t;
      if (ns.cap_hit) ++report.null_search_cap_hits;
      // an exhausted search can end on a sufficient-decrease point; take it
      if (ns.cap_hit && cand.fq <= fp + params.m * cand.t * sol.xi) {
        next = cand.q;
        f_next = cand.fq;
        rec.step = StepKind::serious;
        ++report.serious_steps;
        ++report.cap_promotions;
      } else {
        rec.step = StepKind::null;
        ++report.null_steps;
      }
    }
    report.trace.push_back(rec);

    bundle.purge();
    bundle.refresh(next, f_next);
    bundle.append(k + 1, std::move(cand.q), std::move(cand.X), cand.fq);
    p = std::move(next);
    fp = f_next;
  }

  report.final_point = p;
  report.final_value = fp;
  report.iterations = k;
  report.clamped_errors = bundle.clamped_errors();
  report.wall_time = detail::seconds_since(start);
  return report;
}

// ---------------------------------------------------------------- SGM

/// Step length t_k as a function of the iteration and the subgradient norm.
using StepRule = std::function<double(std::size_t k, double subgradient_norm)>;

/// t_k = a / (k + 1).
inline StepRule diminishing_step(double a) {
  return [a](std::size_t k, double) { return a / static_cast<double>(k + 1); };
}

/// t_k = a / ((k + 1) |X_k|), i.e. geodesic step length a / (k + 1).
inline StepRule normalized_diminishing_step(double a) {
  return [a](std::size_t k, double n) { return a / (static_cast<double>(k + 1) * n); };
}

/// Subgradient method p_{k+1} = exp(p_k, -t_k X_k). Reports the best iterate seen;
/// steps leaving the domain are shrunk by beta up to 100 times.
inline SolverReport sgm(const Problem& problem, const Point& p0, const StepRule& step_rule, std::size_t max_iters,
                        std::uint64_t seed = 0, double beta = 0.975) {
  const auto start = std::chrono::steady_clock::now();
  require(p0.kind() == problem.kind, "sgm: initial point lives on the wrong manifold");
  require(problem.is_interior(p0), "sgm: initial point must lie in the interior of the domain");
  Rng rng(seed);

  Point p = p0;
  double fp = problem.objective(p);
  SolverReport report(p, fp);
  report.termination = Termination::iteration_cap;
  std::size_t k = 0;
  for (; k < max_iters; ++k) {
    const TangentVector x = problem.subgradient(p, rng);
    const double nx = norm(x);
    TraceRecord rec{fp, nx, 0.0, 0.0, 0.0, StepKind::serious, 0.0};
    if (nx == 0.0) {
      rec.step = StepKind::stop;
      report.trace.push_back(rec);
      report.termination = Termination::tolerance_met;
      break;
    }
    double t = step_rule(k, nx);
    std::optional<Point> q;
    for (int retry = 0; retry <= 100; ++retry, t *= beta) {
      Point trial = exp_map(p, x, -t);
      if (problem.is_interior(trial)) {
        q = std::move(trial);
        break;
      }
    }
    rec.t = q ? t : 0.0;
    report.trace.push_back(rec);
    if (!q) continue;
    p = std::move(*q);
    fp = problem.objective(p);
    if (fp < report.final_value) {
      report.final_value = fp;
      report.final_point = p;
    }
  }
  report.iterations = k;
  report.serious_steps = k;
  report.wall_time = detail::seconds_since(start);
  return report;
}

}  // namespace geobundle
