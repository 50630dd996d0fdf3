#pragma once

#include <functional>

#include "geobundle/curvature.hpp"
#include "geobundle/manifold.hpp"

namespace geobundle {

/// Minimize f over a manifold. f may be +inf outside its domain; the interior
/// test defaults to "everywhere" when left empty. Oracles must be reentrant:
/// all randomness comes through the Rng argument.
struct Problem {
  ManifoldKind kind;
  std::function<double(const Point&)> objective;
  std::function<TangentVector(const Point&, Rng&)> subgradient;
  std::function<bool(const Point&)> interior;
  CurvatureProfile curvature;

  bool is_interior(const Point& p) const { return !interior || interior(p); }
};

}  // namespace geobundle
