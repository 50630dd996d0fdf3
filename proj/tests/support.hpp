#pragma once

// Shared generators and reference oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "geobundle/geobundle.hpp"

namespace geobundle::testing {

/// Kinds exercised by the geometry property tests.
inline std::vector<ManifoldKind> geometry_kinds() {
  return {ManifoldKind::euclidean(3),
          ManifoldKind::sphere(2),
          ManifoldKind::sphere(5),
          ManifoldKind::hyperbolic(2),
          ManifoldKind::hyperbolic(4),
          ManifoldKind::spd(2),
          ManifoldKind::spd(3),
          ManifoldKind::special_orthogonal(3),
          ManifoldKind::special_orthogonal(4),
          ManifoldKind::power(ManifoldKind::hyperbolic(2), 4),
          ManifoldKind::power(ManifoldKind::spd(2), 3)};
}

/// Length budget for random tangent steps, half of a conservative injectivity bound.
inline double safe_step(const ManifoldKind& kind) {
  switch (kind.geometry()) {
    case Geometry::sphere: return 0.5 * std::numbers::pi;
    case Geometry::special_orthogonal: return 0.5 * std::numbers::pi;
    case Geometry::hyperbolic:
    case Geometry::spd: return 1.5;
    default: return 2.0;
  }
}

/// Random tangent at p rescaled to a uniformly drawn length in [0, max_len].
inline TangentVector tangent_with_length(const Point& p, Rng& rng, double max_len) {
  std::uniform_real_distribution<double> unif(0.0, max_len);
  TangentVector x = random_tangent(p, rng, 1.0);
  const double n = norm(x);
  if (n == 0.0) return x;
  return (unif(rng) / n) * x;
}

struct Triple {
  Point p;
  Point q;
  TangentVector x;  // at p
};

inline Triple random_triple(const ManifoldKind& kind, Rng& rng) {
  Point p = random_point(kind, rng);
  // power components each get the full budget, so scale by sqrt(count)
  const double budget = safe_step(kind) * std::sqrt(static_cast<double>(kind.count()));
  Point q = exp_map(p, tangent_with_length(p, rng, budget));
  TangentVector x = tangent_with_length(p, rng, budget);
  return {std::move(p), std::move(q), std::move(x)};
}

/// Tolerance helper: relative to max(1, scale).
inline double rel(double tol, double scale) { return tol * std::max(1.0, std::abs(scale)); }

// ------------------------------------------------------- QP grid oracle

/// Brute-force minimum of ½λᵀGλ + cᵀλ over a regular grid on the simplex
/// (dimension 1..3), returning the best objective.
inline double grid_simplex_minimum(const Matrix& G, const Vector& c, double step) {
  const Eigen::Index n = c.size();
  auto obj = [&](const Vector& l) { return 0.5 * l.dot(G * l) + c.dot(l); };
  const long m = std::lround(1.0 / step);
  double best = std::numeric_limits<double>::infinity();
  if (n == 1) return obj(Vector::Ones(1));
  if (n == 2) {
    for (long i = 0; i <= m; ++i) {
      Vector l(2);
      l << static_cast<double>(i) / m, 1.0 - static_cast<double>(i) / m;
      best = std::min(best, obj(l));
    }
    return best;
  }
  for (long i = 0; i <= m; ++i)
    for (long j = 0; i + j <= m; ++j) {
      Vector l(3);
      l << static_cast<double>(i) / m, static_cast<double>(j) / m, static_cast<double>(m - i - j) / m;
      best = std::min(best, obj(l));
    }
  return best;
}

/// Exact minimum of a convex quadratic over the 1-simplex via the closed-form
/// 1-D minimizer; a finer oracle for refining the grid result.
inline double segment_minimum(const Matrix& G, const Vector& c) {
  // λ = (s, 1 - s)
  const double a = G(0, 0) - 2.0 * G(0, 1) + G(1, 1);
  const double b = G(0, 1) - G(1, 1) + c(0) - c(1);
  auto obj = [&](double s) {
    Vector l(2);
    l << s, 1.0 - s;
    return 0.5 * l.dot(G * l) + c.dot(l);
  };
  double best = std::min(obj(0.0), obj(1.0));
  if (a > 0.0) {
    const double s = std::clamp(-b / a, 0.0, 1.0);
    best = std::min(best, obj(s));
  }
  return best;
}

/// Exact minimum over the 2-simplex: interior stationary point or any edge.
inline double triangle_minimum(const Matrix& G, const Vector& c) {
  double best = std::numeric_limits<double>::infinity();
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pr : pairs) {
    Matrix g2(2, 2);
    g2 << G(pr[0], pr[0]), G(pr[0], pr[1]), G(pr[1], pr[0]), G(pr[1], pr[1]);
    Vector c2(2);
    c2 << c(pr[0]), c(pr[1]);
    best = std::min(best, segment_minimum(g2, c2));
  }
  // interior KKT: [G 1; 1ᵀ 0]
  Matrix k = Matrix::Zero(4, 4);
  k.topLeftCorner(3, 3) = G;
  k.block(0, 3, 3, 1).setOnes();
  k.block(3, 0, 1, 3).setOnes();
  Vector rhs(4);
  rhs << -c, 1.0;
  Eigen::FullPivLU<Matrix> lu(k);
  if (lu.isInvertible()) {
    Vector l = lu.solve(rhs).head(3);
    if (l.minCoeff() >= 0.0) best = std::min(best, 0.5 * l.dot(G * l) + c.dot(l));
  }
  return best;
}

/// Gram of n random vectors in R^r (r in 1..3) with norms in [0, 1], as for
/// subgradients of a 1-Lipschitz objective, and a nonnegative linear term.
inline SubproblemInput random_subproblem(Eigen::Index n, Rng& rng) {
  std::uniform_int_distribution<int> rank_dist(1, 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int r = rank_dist(rng);
  Matrix v = gaussian_matrix(r, n, rng);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double len = v.col(j).norm();
    if (len > 0.0) v.col(j) *= unif(rng) / len;
  }
  Matrix G = v.transpose() * v;
  Vector c(n);
  for (Eigen::Index j = 0; j < n; ++j) c(j) = unif(rng) < 0.3 ? 0.0 : unif(rng);
  return {G, c};
}

}  // namespace geobundle::testing
