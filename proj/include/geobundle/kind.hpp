#pragma once

#include <string>

#include <Eigen/Core>

#include "geobundle/errors.hpp"

namespace geobundle {

enum class Geometry { euclidean, sphere, hyperbolic, spd, special_orthogonal };

inline std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::euclidean: return "euclidean";
    case Geometry::sphere: return "sphere";
    case Geometry::hyperbolic: return "hyperbolic";
    case Geometry::spd: return "spd";
    case Geometry::special_orthogonal: return "so";
  }
  return "unknown";
}

/// Which manifold a point lives on. A power manifold stores `count` copies of
/// one non-power inner manifold side by side.
class ManifoldKind {
 public:
  static ManifoldKind euclidean(int n) { return {Geometry::euclidean, n, 1}; }
  static ManifoldKind sphere(int n) { return {Geometry::sphere, n, 1}; }
  static ManifoldKind hyperbolic(int n) { return {Geometry::hyperbolic, n, 1}; }
  static ManifoldKind spd(int n) { return {Geometry::spd, n, 1}; }
  static ManifoldKind special_orthogonal(int d) {
    return {Geometry::special_orthogonal, d, 2};
  }
  static ManifoldKind power(const ManifoldKind& inner, int count) {
    require(!inner.is_power(), "power manifold nesting depth is 1");
    require(count >= 1, "power manifold count must be >= 1");
    ManifoldKind k = inner;
    k.count_ = count;
    return k;
  }

  Geometry geometry() const { return geometry_; }
  /// n for Euclidean/Sphere/Hyperbolic/SPD, d for SO(d).
  int dim() const { return dim_; }
  bool is_power() const { return count_ > 0; }
  int count() const { return is_power() ? count_ : 1; }
  ManifoldKind inner() const { return {geometry_, dim_, geometry_ == Geometry::special_orthogonal ? 2 : 1}; }

  Eigen::Index inner_rows() const {
    switch (geometry_) {
      case Geometry::sphere:
      case Geometry::hyperbolic: return dim_ + 1;
      default: return dim_;
    }
  }
  Eigen::Index inner_cols() const {
    switch (geometry_) {
      case Geometry::spd:
      case Geometry::special_orthogonal: return dim_;
      default: return 1;
    }
  }
  Eigen::Index rows() const { return inner_rows(); }
  Eigen::Index cols() const { return inner_cols() * count(); }

  /// Intrinsic dimension of the manifold.
  int manifold_dimension() const {
    int d = dim_;
    switch (geometry_) {
      case Geometry::spd: d = dim_ * (dim_ + 1) / 2; break;
      case Geometry::special_orthogonal: d = dim_ * (dim_ - 1) / 2; break;
      default: break;
    }
    return d * count();
  }

  std::string name() const {
    std::string base = to_string(geometry_) + "(" + std::to_string(dim_) + ")";
    if (!is_power()) return base;
    return "power(" + base + "," + std::to_string(count_) + ")";
  }

  friend bool operator==(const ManifoldKind& a, const ManifoldKind& b) {
    return a.geometry_ == b.geometry_ && a.dim_ == b.dim_ && a.count_ == b.count_;
  }

 private:
  ManifoldKind(Geometry g, int dim, int min_dim) : geometry_(g), dim_(dim) {
    if (dim < min_dim) throw ContractViolation(to_string(g) + " requires dimension >= " + std::to_string(min_dim));
  }

  Geometry geometry_;
  int dim_;
  int count_ = 0;
};

}  // namespace geobundle
