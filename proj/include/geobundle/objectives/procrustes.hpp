#pragma once

// Spectral Procrustes  min_{p in SO(d)} |A - B p|_2.

#include <utility>

#include "geobundle/errors.hpp"
#include "geobundle/manifold.hpp"
#include "geobundle/problem.hpp"

namespace geobundle {

struct ProcrustesProblem {
  Matrix A;  // n x d
  Matrix B;  // n x d

  int d() const { return static_cast<int>(A.cols()); }
  ManifoldKind kind() const { return ManifoldKind::special_orthogonal(d()); }

  void validate() const {
    require(A.rows() == B.rows() && A.cols() == B.cols(), "procrustes: A and B must have the same shape");
    require(A.cols() >= 2 && A.rows() >= A.cols(), "procrustes: need n >= d >= 2");
  }
};

inline double procrustes_value(const ProcrustesProblem& prob, const Point& p) {
  Eigen::JacobiSVD<Matrix> svd(prob.A - prob.B * p.coords());
  return svd.singularValues()(0);
}

/// Tangent projection of the Euclidean subgradient -Bᵀ u vᵀ, with (u, v) the top
/// singular pair of A - B p.
inline TangentVector procrustes_subgradient(const ProcrustesProblem& prob, const Point& p) {
  Eigen::JacobiSVD<Matrix> svd(prob.A - prob.B * p.coords(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix euclidean = -prob.B.transpose() * svd.matrixU().col(0) * svd.matrixV().col(0).transpose();
  return project_tangent(p, euclidean);
}

/// Orthogonal-Procrustes minimizer U Vᵀ of |A - B p|_F (SVD of BᵀA), moved onto
/// SO(d) by flipping the last column of U when the determinant is negative.
inline Point procrustes_init(const ProcrustesProblem& prob) {
  prob.validate();
  Matrix m = prob.B.transpose() * prob.A;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-12 * s(0)))
    throw SolverError("procrustes_init: BᵀA is rank deficient; the orthogonal Procrustes minimizer is not unique");
  Matrix u = svd.matrixU();
  Matrix p = u * svd.matrixV().transpose();
  if (p.determinant() < 0.0) {
    u.col(u.cols() - 1) *= -1.0;
    p = u * svd.matrixV().transpose();
  }
  return Point(prob.kind(), std::move(p));
}

inline Problem make_problem(const ProcrustesProblem& prob, const CurvatureProfile& curvature) {
  return Problem{prob.kind(),
                 [&prob](const Point& p) { return procrustes_value(prob, p); },
                 [&prob](const Point& p, Rng&) { return procrustes_subgradient(prob, p); },
                 {},
                 curvature};
}

}  // namespace geobundle
