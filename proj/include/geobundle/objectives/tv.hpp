#pragma once

// Total-variation denoising of manifold-valued signals on a power manifold:
//   f(p) = (1/n) ( ½ Σ dist²(p_i, q_i) + α Σ dist(p_i, p_{i+1}) ).

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "geobundle/errors.hpp"
#include "geobundle/manifold.hpp"
#include "geobundle/objectives/common.hpp"
#include "geobundle/problem.hpp"

namespace geobundle {

struct TVProblem {
  ManifoldKind inner_kind;
  int n = 0;
  Point noisy;  // data signal on the power manifold
  double alpha = 0.5;

  ManifoldKind kind() const { return ManifoldKind::power(inner_kind, n); }

  void validate() const {
    require(n >= 2, "tv: signal length must be at least 2");
    require(alpha > 0.0, "tv: alpha must be positive");
    require(noisy.kind() == kind(), "tv: data signal lives on the wrong manifold");
  }
};

namespace detail {

inline Point component_point(const Point& p, int i) {
  return Point(p.kind().inner(), p.component(i));
}

}  // namespace detail

inline double tv_fidelity(const TVProblem& prob, const Point& p) {
  double s = 0.0;
  const auto g = prob.inner_kind.geometry();
  for (int i = 0; i < prob.n; ++i) {
    const double d = detail::dist(g, p.component(i), prob.noisy.component(i));
    s += d * d;
  }
  return 0.5 * s;
}

inline double total_variation(const Point& p) {
  double s = 0.0;
  const auto g = p.kind().geometry();
  for (int i = 0; i + 1 < p.kind().count(); ++i) s += detail::dist(g, p.component(i), p.component(i + 1));
  return s;
}

inline double tv_value(const TVProblem& prob, const Point& p) {
  return (tv_fidelity(prob, p) + prob.alpha * total_variation(p)) / static_cast<double>(prob.n);
}

inline TangentVector tv_subgradient(const TVProblem& prob, const Point& p, Rng& rng) {
  Matrix out(p.coords().rows(), p.coords().cols());
  const auto c = prob.inner_kind.inner_cols();
  for (int i = 0; i < prob.n; ++i) {
    Point pi = detail::component_point(p, i);
    Matrix comp = -log_map(pi, detail::component_point(prob.noisy, i)).coords();
    if (i + 1 < prob.n)
      comp += prob.alpha * distance_subgradient(pi, detail::component_point(p, i + 1), rng).coords();
    if (i > 0) comp += prob.alpha * distance_subgradient(pi, detail::component_point(p, i - 1), rng).coords();
    out.middleCols(i * c, c) = comp / static_cast<double>(prob.n);
  }
  return TangentVector(p, std::move(out));
}

inline Problem make_problem(const TVProblem& prob, const CurvatureProfile& curvature) {
  return Problem{prob.kind(),
                 [&prob](const Point& p) { return tv_value(prob, p); },
                 [&prob](const Point& p, Rng& rng) { return tv_subgradient(prob, p, rng); },
                 {},
                 curvature};
}

/// (1/n) sqrt(Σ dist²(p_i, q_i)); a non-power point counts as n = 1.
inline double mse(const Point& p, const Point& q) {
  require(p.kind() == q.kind(), "mse: signals must live on the same manifold");
  return distance(p, q) / static_cast<double>(p.kind().count());
}

// ------------------------------------------------------- test signal

struct SquareWave {
  double a = -6.0;
  double b = 6.0;
  double period = 3.0;
  int samples = 496;  // grid points N on [a, b]
};

struct Signal {
  Point clean;
  Point noisy;
};

/// Lifts (x, y) in the plane onto the hyperboloid: (x, y, sqrt(x² + y² + 1)).
inline Point lift_to_hyperboloid(double x, double y) {
  Matrix v(3, 1);
  v << x, y, std::sqrt(x * x + y * y + 1.0);
  return Point(ManifoldKind::hyperbolic(2), std::move(v));
}

/// Square wave t -> (t, sgn sin(2πt/T)) sampled on N grid points, split into its
/// constant runs; each run contributes floor(N T / (2 (b - a))) points along the
/// H² geodesic between its lifted endpoints. The noisy copy moves every point by
/// exp of a Gaussian tangent.
inline Signal square_wave_signal(const SquareWave& wave, Rng& rng, double noise_stddev) {
  require(wave.b > wave.a, "square wave: interval must satisfy b > a");
  require(wave.period > 0.0, "square wave: period must be positive");
  require(wave.samples >= 4, "square wave: need at least 4 grid points");
  require(noise_stddev >= 0.0, "square wave: noise stddev must be nonnegative");
  const int N = wave.samples;
  const int per_run = static_cast<int>(std::floor(N * wave.period / (2.0 * (wave.b - wave.a))));
  require(per_run >= 1, "square wave: too few grid points for the period");

  const double step = (wave.b - wave.a) / static_cast<double>(N - 1);
  auto t_at = [&](int i) { return wave.a + step * i; };
  auto level = [&](int i) { return std::sin(2.0 * std::numbers::pi * t_at(i) / wave.period) >= 0.0 ? 1.0 : -1.0; };

  // endpoints of maximal constant runs
  std::vector<std::pair<int, int>> runs;
  int first = 0;
  for (int i = 1; i <= N; ++i) {
    if (i == N || level(i) != level(first)) {
      runs.emplace_back(first, i - 1);
      first = i;
    }
  }

  const int n = per_run * static_cast<int>(runs.size());
  const ManifoldKind inner = ManifoldKind::hyperbolic(2);
  const ManifoldKind kind = ManifoldKind::power(inner, n);
  Matrix clean(3, n);
  int col = 0;
  for (auto [i0, i1] : runs) {
    Point s0 = lift_to_hyperboloid(t_at(i0), level(i0));
    Point s1 = lift_to_hyperboloid(t_at(i1), level(i1));
    TangentVector v = log_map(s0, s1);
    for (int k = 0; k < per_run; ++k) {
      const double frac = per_run == 1 ? 0.0 : static_cast<double>(k) / (per_run - 1);
      clean.col(col++) = exp_map(s0, v, frac).coords();
    }
  }
  Point clean_point(kind, clean);

  Matrix noisy(3, n);
  for (int i = 0; i < n; ++i) {
    Point ci = detail::component_point(clean_point, i);
    noisy.col(i) = exp_map(ci, random_tangent(ci, rng, noise_stddev)).coords();
  }
  return Signal{std::move(clean_point), Point(kind, std::move(noisy))};
}

/// Largest distance between any two components of a power point.
inline double max_component_distance(const Point& p) {
  std::vector<Point> parts;
  for (int i = 0; i < p.kind().count(); ++i) parts.push_back(detail::component_point(p, i));
  return max_pairwise_distance(parts);
}

}  // namespace geobundle
