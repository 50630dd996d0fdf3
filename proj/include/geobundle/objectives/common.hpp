#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "geobundle/curvature.hpp"
#include "geobundle/manifold.hpp"

namespace geobundle {

struct CurvatureBounds {
  double omega;
  double Omega;
};

/// Sectional curvature bounds of each supported manifold. Products pick up a
/// zero-curvature mixed plane, so power manifolds widen the range to include 0.
inline CurvatureBounds curvature_for(const ManifoldKind& kind) {
  CurvatureBounds b{0.0, 0.0};
  switch (kind.geometry()) {
    case Geometry::euclidean: b = {0.0, 0.0}; break;
    case Geometry::sphere: b = {1.0, 1.0}; break;
    case Geometry::hyperbolic: b = {-1.0, -1.0}; break;
    case Geometry::spd: b = {-0.5, 0.0}; break;
    case Geometry::special_orthogonal: b = {0.0, 0.25}; break;
  }
  if (kind.is_power()) b = {std::min(b.omega, 0.0), std::max(b.Omega, 0.0)};
  return b;
}

inline CurvatureProfile profile_for(const ManifoldKind& kind, double delta) {
  const auto b = curvature_for(kind);
  return CurvatureProfile{b.omega, b.Omega, delta};
}

/// Element of the subdifferential of dist(., q) at p: the unit vector -log_p q / dist
/// away from q, or a random unit tangent when p and q coincide.
inline TangentVector distance_subgradient(const Point& p, const Point& q, Rng& rng) {
  if (p == q) return random_unit_tangent(p, rng);
  const double d = distance(p, q);
  if (d == 0.0) return random_unit_tangent(p, rng);
  return (-1.0 / d) * log_map(p, q);
}

/// Open geodesic ball {p : dist(p, center) < radius}, with 1e-10 slack.
struct GeodesicBall {
  Point center;
  double radius;

  bool contains(const Point& p) const { return distance(p, center) < radius - 1e-10; }
};

inline double max_pairwise_distance(const std::vector<Point>& points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::max(best, distance(points[i], points[j]));
  return best;
}

}  // namespace geobundle
