#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include "geobundle/detail/kernels.hpp"
#include "geobundle/errors.hpp"
#include "geobundle/kind.hpp"
#include "geobundle/linalg.hpp"

namespace geobundle {

/// Seeded generator used everywhere randomness enters (data, noise, oracles).
using Rng = std::mt19937_64;

/// A point in ambient coordinates. Power points keep their components side by
/// side: component i occupies columns [i*inner_cols, (i+1)*inner_cols).
class Point {
 public:
  Point(ManifoldKind kind, Matrix coords) : kind_(std::move(kind)), coords_(std::move(coords)) {
    require(coords_.rows() == kind_.rows() && coords_.cols() == kind_.cols(),
            "point coordinates do not match the ambient shape of " + kind_.name());
  }

  const ManifoldKind& kind() const { return kind_; }
  const Matrix& coords() const { return coords_; }

  auto component(int i) const {
    return coords_.middleCols(i * kind_.inner_cols(), kind_.inner_cols());
  }

  friend bool operator==(const Point& a, const Point& b) {
    return a.kind_ == b.kind_ && a.coords_ == b.coords_;
  }

 private:
  ManifoldKind kind_;
  Matrix coords_;
};

/// A tangent vector together with the point it is attached to.
class TangentVector {
 public:
  TangentVector(Point base, Matrix coords) : base_(std::move(base)), coords_(std::move(coords)) {
    require(coords_.rows() == base_.coords().rows() && coords_.cols() == base_.coords().cols(),
            "tangent coordinates do not match the base point shape");
  }

  const Point& base() const { return base_; }
  const ManifoldKind& kind() const { return base_.kind(); }
  const Matrix& coords() const { return coords_; }

  auto component(int i) const {
    return coords_.middleCols(i * kind().inner_cols(), kind().inner_cols());
  }

 private:
  Point base_;
  Matrix coords_;
};

/// Points agree to representation accuracy (bitwise equality is the common case).
inline bool same_point(const Point& a, const Point& b) {
  if (!(a.kind() == b.kind())) return false;
  if (a.coords() == b.coords()) return true;
  const double scale = 1.0 + linalg::max_abs(a.coords());
  return linalg::max_abs(a.coords() - b.coords()) <= 1e-12 * scale;
}

namespace detail {

inline void require_same_kind(const Point& p, const Point& q) {
  if (!(p.kind() == q.kind()))
    throw ContractViolation("manifold kind mismatch: " + p.kind().name() + " vs " + q.kind().name());
}

inline void require_based_at(const TangentVector& x, const Point& p) {
  require(same_point(x.base(), p), "tangent vector is not based at the given point");
}

template <typename F>
Matrix componentwise(const ManifoldKind& kind, F&& f) {
  Matrix out(kind.rows(), kind.cols());
  const auto c = kind.inner_cols();
  for (int i = 0; i < kind.count(); ++i) out.middleCols(i * c, c) = f(i);
  return out;
}

}  // namespace detail

// ------------------------------------------------------------- metric

inline double inner(const TangentVector& x, const TangentVector& y) {
  require(same_point(x.base(), y.base()), "inner: tangent vectors have different base points");
  const auto g = x.kind().geometry();
  double sum = 0.0;
  for (int i = 0; i < x.kind().count(); ++i)
    sum += detail::inner(g, x.base().component(i), x.component(i), y.component(i));
  return sum;
}

inline double norm(const TangentVector& x) { return std::sqrt(std::max(0.0, inner(x, x))); }

inline double distance(const Point& p, const Point& q) {
  detail::require_same_kind(p, q);
  const auto g = p.kind().geometry();
  if (!p.kind().is_power()) return detail::dist(g, p.coords(), q.coords());
  double sum = 0.0;
  for (int i = 0; i < p.kind().count(); ++i) {
    const double d = detail::dist(g, p.component(i), q.component(i));
    sum += d * d;
  }
  return std::sqrt(sum);
}

// -------------------------------------------------------- maps

inline Point exp_map(const Point& p, const TangentVector& x) {
  detail::require_based_at(x, p);
  const auto g = p.kind().geometry();
  return Point(p.kind(), detail::componentwise(p.kind(), [&](int i) -> Matrix {
                 if (x.component(i).isZero(0.0)) return p.component(i);
                 return detail::exp(g, p.component(i), x.component(i));
               }));
}

/// Point reached after time t along the geodesic with initial velocity x.
inline Point exp_map(const Point& p, const TangentVector& x, double t) {
  return exp_map(p, TangentVector(x.base(), t * x.coords()));
}

inline TangentVector log_map(const Point& p, const Point& q) {
  detail::require_same_kind(p, q);
  const auto g = p.kind().geometry();
  return TangentVector(p, detail::componentwise(p.kind(), [&](int i) {
                         return detail::log(g, p.component(i), q.component(i));
                       }));
}

/// Parallel transport of x (based at p) along the minimal geodesic to q.
inline TangentVector parallel_transport(const Point& p, const Point& q, const TangentVector& x) {
  detail::require_same_kind(p, q);
  detail::require_based_at(x, p);
  const auto g = p.kind().geometry();
  return TangentVector(q, detail::componentwise(p.kind(), [&](int i) {
                         return detail::transport(g, p.component(i), q.component(i), x.component(i));
                       }));
}

inline TangentVector project_tangent(const Point& p, const Matrix& ambient) {
  require(ambient.rows() == p.coords().rows() && ambient.cols() == p.coords().cols(),
          "project_tangent: ambient array has the wrong shape");
  const auto g = p.kind().geometry();
  const auto c = p.kind().inner_cols();
  return TangentVector(p, detail::componentwise(p.kind(), [&](int i) {
                         return detail::project(g, p.component(i), ambient.middleCols(i * c, c));
                       }));
}

inline TangentVector zero_tangent(const Point& p) {
  return TangentVector(p, Matrix::Zero(p.coords().rows(), p.coords().cols()));
}

// ------------------------------------------------- tangent arithmetic

inline TangentVector operator+(const TangentVector& x, const TangentVector& y) {
  require(same_point(x.base(), y.base()), "adding tangent vectors at different points");
  return TangentVector(x.base(), x.coords() + y.coords());
}
inline TangentVector operator-(const TangentVector& x, const TangentVector& y) {
  require(same_point(x.base(), y.base()), "subtracting tangent vectors at different points");
  return TangentVector(x.base(), x.coords() - y.coords());
}
inline TangentVector operator*(double a, const TangentVector& x) {
  return TangentVector(x.base(), a * x.coords());
}
inline TangentVector operator-(const TangentVector& x) { return TangentVector(x.base(), -x.coords()); }

// ------------------------------------------------------- invariants

namespace detail {

inline std::string check_point_component(Geometry g, const MatrixRef& p) {
  switch (g) {
    case Geometry::euclidean: return {};
    case Geometry::sphere:
      if (std::abs(p.squaredNorm() - 1.0) > 1e-9) return "sphere point is not unit length";
      return {};
    case Geometry::hyperbolic:
      if (std::abs(minkowski(p, p) + 1.0) > 1e-9 * std::max(1.0, p(p.rows() - 1, 0) * p(p.rows() - 1, 0)))
        return "hyperbolic point is off the hyperboloid";
      if (p(p.rows() - 1, 0) <= 0.0) return "hyperbolic point is on the lower sheet";
      return {};
    case Geometry::spd:
      if (linalg::max_abs(p - p.transpose()) > 1e-9) return "spd point is not symmetric";
      if (linalg::min_sym_eigenvalue(p) <= 1e-12) return "spd point is not positive definite";
      return {};
    case Geometry::special_orthogonal: {
      const Matrix id = Matrix::Identity(p.rows(), p.cols());
      if (linalg::max_abs(p.transpose() * p - id) > 1e-8) return "so point is not orthogonal";
      if (Matrix(p).determinant() <= 0.0) return "so point has negative determinant";
      return {};
    }
  }
  return {};
}

inline std::string check_tangent_component(Geometry g, const MatrixRef& p, const MatrixRef& x) {
  switch (g) {
    case Geometry::euclidean: return {};
    case Geometry::sphere:
      if (std::abs(frobenius(p, x)) > 1e-9) return "sphere tangent is not orthogonal to its base";
      return {};
    case Geometry::hyperbolic:
      if (std::abs(minkowski(p, x)) > 1e-9) return "hyperbolic tangent is not Minkowski-orthogonal";
      return {};
    case Geometry::spd:
      if (linalg::max_abs(x - x.transpose()) > 1e-9) return "spd tangent is not symmetric";
      return {};
    case Geometry::special_orthogonal:
      if (linalg::max_abs(p * x.transpose() + x * p.transpose()) > 1e-8)
        return "so tangent violates p Xᵀ + X pᵀ = 0";
      return {};
  }
  return {};
}

}  // namespace detail

/// Empty string when p satisfies its manifold's invariants, else the first violation.
inline std::string point_violation(const Point& p) {
  for (int i = 0; i < p.kind().count(); ++i) {
    auto msg = detail::check_point_component(p.kind().geometry(), p.component(i));
    if (!msg.empty()) return msg;
  }
  return {};
}

inline std::string tangent_violation(const TangentVector& x) {
  for (int i = 0; i < x.kind().count(); ++i) {
    auto msg = detail::check_tangent_component(x.kind().geometry(), x.base().component(i), x.component(i));
    if (!msg.empty()) return msg;
  }
  return {};
}

inline void validate(const Point& p) {
  if (auto msg = point_violation(p); !msg.empty()) throw ContractViolation(msg);
}
inline void validate(const TangentVector& x) {
  if (auto msg = tangent_violation(x); !msg.empty()) throw ContractViolation(msg);
}

// ------------------------------------------------------- sampling

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double stddev = 1.0) {
  if (stddev == 0.0) return Matrix::Zero(rows, cols);
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix m(rows, cols);
  // column-major fill keeps the draw order independent of Eigen internals
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// Ambient Gaussian coordinates with the given standard deviation, projected to T_p.
inline TangentVector random_tangent(const Point& p, Rng& rng, double stddev) {
  if (stddev == 0.0) return zero_tangent(p);
  return project_tangent(p, gaussian_matrix(p.coords().rows(), p.coords().cols(), rng, stddev));
}

/// Uniformly distributed unit tangent vector at p.
inline TangentVector random_unit_tangent(const Point& p, Rng& rng) {
  for (;;) {
    TangentVector x = random_tangent(p, rng, 1.0);
    const double n = norm(x);
    if (n > 1e-12) return (1.0 / n) * x;
  }
}

namespace detail {

inline Matrix random_component(const ManifoldKind& inner, Rng& rng) {
  const int n = inner.dim();
  switch (inner.geometry()) {
    case Geometry::euclidean: return gaussian_matrix(n, 1, rng);
    case Geometry::sphere: {
      for (;;) {
        Matrix v = gaussian_matrix(n + 1, 1, rng);
        const double nv = v.norm();
        if (nv > 1e-12) return v / nv;
      }
    }
    case Geometry::hyperbolic: {
      Matrix pole = Matrix::Zero(n + 1, 1);
      pole(n, 0) = 1.0;
      Matrix x = Matrix::Zero(n + 1, 1);
      x.topRows(n) = gaussian_matrix(n, 1, rng);
      return hyperbolic_exp(pole, x);
    }
    case Geometry::spd:
      return linalg::sym_exp(linalg::sym(gaussian_matrix(n, n, rng, 0.5)));
    case Geometry::special_orthogonal: {
      Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, n, rng));
      Matrix q = qr.householderQ();
      Vector d = qr.matrixQR().diagonal().array().sign();
      q = q * d.asDiagonal();
      if (q.determinant() < 0.0) q.col(0) *= -1.0;
      return q;
    }
  }
  return {};
}

}  // namespace detail

inline Point random_point(const ManifoldKind& kind, Rng& rng) {
  const ManifoldKind inner = kind.inner();
  return Point(kind, detail::componentwise(kind, [&](int) { return detail::random_component(inner, rng); }));
}

/// Canonical base point: origin, north pole, hyperboloid vertex, identity.
inline Point reference_point(const ManifoldKind& kind) {
  const ManifoldKind inner = kind.inner();
  return Point(kind, detail::componentwise(kind, [&](int) -> Matrix {
                 switch (inner.geometry()) {
                   case Geometry::euclidean: return Matrix::Zero(inner.rows(), 1);
                   case Geometry::sphere:
                   case Geometry::hyperbolic: {
                     Matrix v = Matrix::Zero(inner.rows(), 1);
                     v(inner.rows() - 1, 0) = 1.0;
                     return v;
                   }
                   default: return Matrix::Identity(inner.rows(), inner.cols());
                 }
               }));
}

}  // namespace geobundle
