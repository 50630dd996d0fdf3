#pragma once

// Dense matrix helpers shared by the manifold kernels.

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace geobundle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixRef = Eigen::Ref<const Eigen::MatrixXd>;

namespace linalg {

inline Matrix sym(const MatrixRef& a) { return 0.5 * (a + a.transpose()); }
inline Matrix skew(const MatrixRef& a) { return 0.5 * (a - a.transpose()); }

inline double max_abs(const MatrixRef& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Applies a scalar function to a symmetric matrix through its eigendecomposition.
template <typename F>
Matrix sym_apply(const MatrixRef& s, F&& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym(s));
  Vector values = eig.eigenvalues().unaryExpr(f);
  const Matrix& v = eig.eigenvectors();
  Matrix out = v * values.asDiagonal() * v.transpose();
  return sym(out);
}

inline Matrix sym_exp(const MatrixRef& s) {
  return sym_apply(s, [](double x) { return std::exp(x); });
}
inline Matrix sym_log(const MatrixRef& s) {
  return sym_apply(s, [](double x) { return std::log(x); });
}
inline Matrix sym_sqrt(const MatrixRef& s) {
  return sym_apply(s, [](double x) { return std::sqrt(x); });
}
inline Matrix sym_inv_sqrt(const MatrixRef& s) {
  return sym_apply(s, [](double x) { return 1.0 / std::sqrt(x); });
}

/// Square root and inverse square root from a single decomposition.
struct SymRoots {
  Matrix sqrt;
  Matrix inv_sqrt;
};

inline SymRoots sym_roots(const MatrixRef& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym(s));
  const Matrix& v = eig.eigenvectors();
  Vector root = eig.eigenvalues().cwiseSqrt();
  Vector inv_root = root.cwiseInverse();
  return {sym(v * root.asDiagonal() * v.transpose()),
          sym(v * inv_root.asDiagonal() * v.transpose())};
}

inline double min_sym_eigenvalue(const MatrixRef& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym(s), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

/// Exponential of a skew-symmetric matrix, snapped back onto the orthogonal group.
inline Matrix skew_exp(const MatrixRef& w) {
  Matrix a = skew(w);
  Matrix r = a.exp();
  // one Newton step of the polar iteration removes rounding drift
  return 0.5 * (r + r.transpose().inverse());
}

/// Closest orthogonal matrix in Frobenius norm.
inline Matrix polar_orthogonal(const MatrixRef& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace linalg
}  // namespace geobundle
