#pragma once

// Closed-form geometry for a single (non-power) manifold, on raw ambient
// coordinates. Sphere and hyperbolic points are column vectors, SPD and SO(d)
// points are square matrices.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geobundle/errors.hpp"
#include "geobundle/kind.hpp"
#include "geobundle/linalg.hpp"

namespace geobundle::detail {

// Distances this close to pi on the sphere are treated as cut-locus pairs.
inline constexpr double kSphereCutSlack = 1e-8;
// Rotations pᵀq with cos(angle) below -1 + slack are treated as cut-locus pairs.
inline constexpr double kRotationCutSlack = 1e-10;

inline double minkowski(const MatrixRef& x, const MatrixRef& y) {
  const Eigen::Index n = x.rows() - 1;
  return x.topRows(n).cwiseProduct(y.topRows(n)).sum() - x(n, 0) * y(n, 0);
}

inline double frobenius(const MatrixRef& x, const MatrixRef& y) { return x.cwiseProduct(y).sum(); }

// ---------------------------------------------------------------- sphere

inline double sphere_dist(const MatrixRef& p, const MatrixRef& q) {
  const double c = frobenius(p, q);
  const double s = (q - c * p).norm();
  return std::atan2(s, c);
}

inline Matrix sphere_log(const MatrixRef& p, const MatrixRef& q) {
  const double c = frobenius(p, q);
  Matrix v = q - c * p;
  const double s = v.norm();
  const double theta = std::atan2(s, c);
  if (theta > std::numbers::pi - kSphereCutSlack)
    throw DomainError("sphere: log undefined for antipodal points");
  if (s == 0.0) return Matrix::Zero(p.rows(), p.cols());
  return (theta / s) * v;
}

inline Matrix sphere_exp(const MatrixRef& p, const MatrixRef& x) {
  const double nx = x.norm();
  if (nx == 0.0) return p;
  Matrix r = std::cos(nx) * p + (std::sin(nx) / nx) * x;
  return r / r.norm();
}

inline Matrix sphere_transport(const MatrixRef& p, const MatrixRef& q, const MatrixRef& x) {
  if (sphere_dist(p, q) > std::numbers::pi - kSphereCutSlack)
    throw DomainError("sphere: transport undefined between antipodal points");
  const double c = frobenius(p, q);
  Matrix r = x - (frobenius(q, x) / (1.0 + c)) * (p + q);
  // drop the rounding-level normal component
  return r - frobenius(q, r) * q;
}

inline Matrix sphere_project(const MatrixRef& p, const MatrixRef& a) {
  return a - frobenius(p, a) * p;
}

// ------------------------------------------------------------ hyperbolic

inline double hyperbolic_dist(const MatrixRef& p, const MatrixRef& q) {
  // chord form for nearby points, arccosh once the points are far apart
  const double c = -minkowski(p, q);
  if (c > 2.0) return std::acosh(c);
  Matrix diff = p - q;
  const double chord2 = std::max(0.0, minkowski(diff, diff));
  return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

inline Matrix hyperbolic_log(const MatrixRef& p, const MatrixRef& q) {
  const double d = hyperbolic_dist(p, q);
  if (d == 0.0) return Matrix::Zero(p.rows(), p.cols());
  const double c = std::max(1.0, -minkowski(p, q));
  Matrix v = q - c * p;
  // re-project to kill rounding in the normal direction
  v += minkowski(p, v) * p;
  const double nv = std::sqrt(std::max(0.0, minkowski(v, v)));
  if (nv == 0.0) return Matrix::Zero(p.rows(), p.cols());
  return (d / nv) * v;
}

inline Matrix hyperbolic_normalize(Matrix r) {
  const Eigen::Index n = r.rows() - 1;
  r(n, 0) = std::sqrt(1.0 + r.topRows(n).squaredNorm());
  return r;
}

inline Matrix hyperbolic_exp(const MatrixRef& p, const MatrixRef& x) {
  const double nx = std::sqrt(std::max(0.0, minkowski(x, x)));
  if (nx == 0.0) return p;
  return hyperbolic_normalize(std::cosh(nx) * p + (std::sinh(nx) / nx) * x);
}

inline Matrix hyperbolic_transport(const MatrixRef& p, const MatrixRef& q, const MatrixRef& x) {
  const double denom = 1.0 - minkowski(p, q);
  Matrix r = x + (minkowski(q, x) / denom) * (p + q);
  return r + minkowski(q, r) * q;
}

inline Matrix hyperbolic_project(const MatrixRef& p, const MatrixRef& a) {
  return a + minkowski(p, a) * p;
}

// ------------------------------------------------------------------ SPD

inline double spd_inner(const MatrixRef& p, const MatrixRef& x, const MatrixRef& y) {
  Eigen::LLT<Matrix> llt(p);
  Matrix a = llt.solve(Matrix(x));
  Matrix b = llt.solve(Matrix(y));
  return (a * b).trace();
}

inline double spd_dist(const MatrixRef& p, const MatrixRef& q) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(linalg::sym(q), linalg::sym(p),
                                                      Eigen::EigenvaluesOnly);
  return ges.eigenvalues().array().log().matrix().norm();
}

inline Matrix spd_exp(const MatrixRef& p, const MatrixRef& x) {
  auto roots = linalg::sym_roots(p);
  Matrix inner = roots.inv_sqrt * linalg::sym(x) * roots.inv_sqrt;
  return linalg::sym(roots.sqrt * linalg::sym_exp(inner) * roots.sqrt);
}

inline Matrix spd_log(const MatrixRef& p, const MatrixRef& q) {
  auto roots = linalg::sym_roots(p);
  Matrix inner = roots.inv_sqrt * linalg::sym(q) * roots.inv_sqrt;
  return linalg::sym(roots.sqrt * linalg::sym_log(inner) * roots.sqrt);
}

inline Matrix spd_transport(const MatrixRef& p, const MatrixRef& q, const MatrixRef& x) {
  auto roots = linalg::sym_roots(p);
  Matrix inner = roots.inv_sqrt * linalg::sym(q) * roots.inv_sqrt;
  Matrix half = linalg::sym_apply(inner, [](double v) { return std::sqrt(v); });
  Matrix e = roots.sqrt * half * roots.inv_sqrt;
  return linalg::sym(e * linalg::sym(x) * e.transpose());
}

// ---------------------------------------------------------------- SO(d)

inline Matrix rotation_log(const MatrixRef& r) {
  if (linalg::min_sym_eigenvalue(r) < -1.0 + kRotationCutSlack)
    throw DomainError("so: principal logarithm undefined (rotation angle pi)");
  Matrix l = Matrix(r).log();
  return linalg::skew(l);
}

inline Matrix so_log(const MatrixRef& p, const MatrixRef& q) {
  return p * rotation_log(p.transpose() * q);
}

inline double so_dist(const MatrixRef& p, const MatrixRef& q) {
  return rotation_log(p.transpose() * q).norm();
}

inline Matrix so_exp(const MatrixRef& p, const MatrixRef& x) {
  Matrix r = p * linalg::skew_exp(p.transpose() * x);
  return 0.5 * (r + r.transpose().inverse());
}

inline Matrix so_transport(const MatrixRef& p, const MatrixRef& q, const MatrixRef& x) {
  Matrix w = rotation_log(p.transpose() * q);
  Matrix e = linalg::skew_exp(0.5 * w);
  Matrix alg = linalg::skew(p.transpose() * x);
  return q * linalg::skew(e.transpose() * alg * e);
}

inline Matrix so_project(const MatrixRef& p, const MatrixRef& a) {
  return p * linalg::skew(p.transpose() * a);
}

// ------------------------------------------------------------- dispatch

inline double inner(Geometry g, const MatrixRef& p, const MatrixRef& x, const MatrixRef& y) {
  switch (g) {
    case Geometry::hyperbolic: return minkowski(x, y);
    case Geometry::spd: return spd_inner(p, x, y);
    default: return frobenius(x, y);
  }
}

inline double dist(Geometry g, const MatrixRef& p, const MatrixRef& q) {
  switch (g) {
    case Geometry::euclidean: return (q - p).norm();
    case Geometry::sphere: return sphere_dist(p, q);
    case Geometry::hyperbolic: return hyperbolic_dist(p, q);
    case Geometry::spd: return spd_dist(p, q);
    case Geometry::special_orthogonal: return so_dist(p, q);
  }
  return 0.0;
}

inline Matrix exp(Geometry g, const MatrixRef& p, const MatrixRef& x) {
  switch (g) {
    case Geometry::euclidean: return p + x;
    case Geometry::sphere: return sphere_exp(p, x);
    case Geometry::hyperbolic: return hyperbolic_exp(p, x);
    case Geometry::spd: return spd_exp(p, x);
    case Geometry::special_orthogonal: return so_exp(p, x);
  }
  return p;
}

inline Matrix log(Geometry g, const MatrixRef& p, const MatrixRef& q) {
  switch (g) {
    case Geometry::euclidean: return q - p;
    case Geometry::sphere: return sphere_log(p, q);
    case Geometry::hyperbolic: return hyperbolic_log(p, q);
    case Geometry::spd: return spd_log(p, q);
    case Geometry::special_orthogonal: return so_log(p, q);
  }
  return Matrix::Zero(p.rows(), p.cols());
}

inline Matrix transport(Geometry g, const MatrixRef& p, const MatrixRef& q, const MatrixRef& x) {
  switch (g) {
    case Geometry::euclidean: return x;
    case Geometry::sphere: return sphere_transport(p, q, x);
    case Geometry::hyperbolic: return hyperbolic_transport(p, q, x);
    case Geometry::spd: return spd_transport(p, q, x);
    case Geometry::special_orthogonal: return so_transport(p, q, x);
  }
  return x;
}

inline Matrix project(Geometry g, const MatrixRef& p, const MatrixRef& a) {
  switch (g) {
    case Geometry::euclidean: return a;
    case Geometry::sphere: return sphere_project(p, a);
    case Geometry::hyperbolic: return hyperbolic_project(p, a);
    case Geometry::spd: return linalg::sym(a);
    case Geometry::special_orthogonal: return so_project(p, a);
  }
  return a;
}

}  // namespace geobundle::detail
