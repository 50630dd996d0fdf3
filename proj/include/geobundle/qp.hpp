#pragma once

// Simplex-constrained convex QP  min ½ λᵀGλ + cᵀλ  s.t.  Σλ = 1, λ ≥ 0,
// and the aggregation of its solution into a search direction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "geobundle/bundle.hpp"
#include "geobundle/errors.hpp"
#include "geobundle/linalg.hpp"
#include "geobundle/manifold.hpp"

namespace geobundle {

inline constexpr double kDefaultQpTolerance = 1e-10;

struct SubproblemInput {
  Matrix gram;    // G_ij = <P X_i, P X_j>
  Vector linear;  // c_j = e_j + r_j

  Eigen::Index dim() const { return linear.size(); }

  /// Largest magnitude among the data, at least 1. Residual tolerances scale with it.
  double scale() const { return std::max({1.0, linalg::max_abs(gram), linalg::max_abs(linear)}); }

  void validate() const {
    require(gram.rows() == gram.cols() && gram.rows() == linear.size() && linear.size() >= 1,
            "subproblem: gram must be square and match the linear term");
    require(linalg::max_abs(gram - gram.transpose()) <= 1e-10 * scale(), "subproblem: gram is not symmetric");
    require(linear.minCoeff() >= 0.0, "subproblem: linear term must be nonnegative");
    require(linalg::min_sym_eigenvalue(gram) >= -1e-9 * scale(), "subproblem: gram is not positive semidefinite");
  }
};

class QpError : public SolverError {
 public:
  QpError(const std::string& what, Vector best, double residual)
      : SolverError(what), best_(std::move(best)), residual_(residual) {}
  const Vector& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  Vector best_;
  double residual_;
};

inline double qp_objective(const SubproblemInput& in, const Vector& lambda) {
  return 0.5 * lambda.dot(in.gram * lambda) + in.linear.dot(lambda);
}

/// Lagrange multiplier of the simplex constraint, -λᵀGλ - cᵀλ.
inline double qp_multiplier(const SubproblemInput& in, const Vector& lambda) {
  return -lambda.dot(in.gram * lambda) - in.linear.dot(lambda);
}

/// Largest violation among primal feasibility, dual feasibility (Gλ + c + ξ ≥ 0)
/// and complementary slackness, with ξ recomputed from λ.
inline double kkt_residual(const SubproblemInput& in, const Vector& lambda) {
  require(lambda.size() == in.dim(), "kkt_residual: lambda has the wrong size");
  const double xi = qp_multiplier(in, lambda);
  Vector slack = (in.gram * lambda + in.linear).array() + xi;
  double r = std::abs(lambda.sum() - 1.0);
  r = std::max(r, -lambda.minCoeff());
  r = std::max(r, -slack.minCoeff());
  r = std::max(r, lambda.cwiseProduct(slack).cwiseAbs().maxCoeff());
  return r;
}

namespace detail {

// Minimizer of the QP restricted to the free set with the simplex equality only.
inline Vector subspace_minimizer(const SubproblemInput& in, const std::vector<Eigen::Index>& free) {
  const auto m = static_cast<Eigen::Index>(free.size());
  Matrix kkt = Matrix::Zero(m + 1, m + 1);
  Vector rhs(m + 1);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) kkt(a, b) = in.gram(free[a], free[b]);
    kkt(a, m) = 1.0;
    kkt(m, a) = 1.0;
    rhs(a) = -in.linear(free[a]);
  }
  rhs(m) = 1.0;
  Eigen::FullPivLU<Matrix> lu(kkt);
  if (lu.rank() < m + 1) {
    const double trace = in.gram.trace();
    const double reg = trace > 0.0 ? 1e-12 * trace / static_cast<double>(in.dim()) : 1e-12;
    kkt.topLeftCorner(m, m).diagonal().array() += reg;
    lu.compute(kkt);
  }
  return lu.solve(rhs).head(m);
}

}  // namespace detail

/// Primal active-set solver over the probability simplex. Returns λ with
/// kkt_residual(λ) ≤ tol·scale; throws QpError with the best iterate otherwise.
inline Vector solve_simplex_qp(const SubproblemInput& in, double tol = kDefaultQpTolerance) {
  const Eigen::Index n = in.dim();
  require(n >= 1 && in.gram.rows() == n && in.gram.cols() == n, "solve_simplex_qp: malformed input");
  if (n == 1) return Vector::Ones(1);

  const double scale = in.scale();
  const double dual_threshold = 0.1 * tol * scale;

  // start at the best vertex
  Eigen::Index start = 0;
  double best_vertex = 0.5 * in.gram(0, 0) + in.linear(0);
  for (Eigen::Index j = 1; j < n; ++j) {
    const double v = 0.5 * in.gram(j, j) + in.linear(j);
    if (v < best_vertex) {
      best_vertex = v;
      start = j;
    }
  }
  Vector lambda = Vector::Zero(n);
  lambda(start) = 1.0;
  std::vector<bool> is_free(static_cast<std::size_t>(n), false);
  is_free[static_cast<std::size_t>(start)] = true;

  const long budget = 10L * n * n;
  for (long change = 0; change < budget; ++change) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < n; ++j)
      if (is_free[static_cast<std::size_t>(j)]) free.push_back(j);

    Vector target = detail::subspace_minimizer(in, free);
    double step = 1.0;
    Eigen::Index blocking = -1;
    for (std::size_t a = 0; a < free.size(); ++a) {
      const double cur = lambda(free[a]);
      const double dir = target(static_cast<Eigen::Index>(a)) - cur;
      if (dir < 0.0 && target(static_cast<Eigen::Index>(a)) < 0.0) {
        const double ratio = cur / -dir;
        if (ratio < step) {
          step = ratio;
          blocking = free[a];
        }
      }
    }
    for (std::size_t a = 0; a < free.size(); ++a) {
      const Eigen::Index j = free[a];
      lambda(j) += step * (target(static_cast<Eigen::Index>(a)) - lambda(j));
    }
    if (blocking >= 0) {
      lambda(blocking) = 0.0;
      is_free[static_cast<std::size_t>(blocking)] = false;
      continue;
    }

    // stationary on the free set: release the most violated bound, if any
    const double xi = qp_multiplier(in, lambda);
    Vector slack = (in.gram * lambda + in.linear).array() + xi;
    Eigen::Index enter = -1;
    double worst = -dual_threshold;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (is_free[static_cast<std::size_t>(j)]) continue;
      if (slack(j) < worst) {
        worst = slack(j);
        enter = j;
      }
    }
    if (enter < 0) {
      lambda = lambda.cwiseMax(0.0);
      lambda /= lambda.sum();
      const double residual = kkt_residual(in, lambda);
      if (residual > tol * scale)
        throw QpError("simplex QP: KKT residual " + std::to_string(residual) + " above tolerance", lambda,
                      residual);
      return lambda;
    }
    is_free[static_cast<std::size_t>(enter)] = true;
  }
  lambda = lambda.cwiseMax(0.0);
  lambda /= lambda.sum();
  throw QpError("simplex QP: working-set budget exhausted", lambda, kkt_residual(in, lambda));
}

/// Aggregated quantities at the serious point for given QP weights.
struct SubproblemSolution {
  Vector lambda;
  TangentVector g;  // Σ λ_j P X_j
  double epsilon = 0.0;
  double sigma = 0.0;
  double xi = 0.0;  // -|g|² - ε - σ
  double kkt_residual = 0.0;
};

inline SubproblemSolution aggregate(const Bundle& bundle, const SubproblemInput& in, const Vector& lambda) {
  require(static_cast<std::size_t>(lambda.size()) == bundle.size(), "aggregate: weight vector size mismatch");
  const Point& p = bundle.serious_point();
  Matrix g = Matrix::Zero(p.coords().rows(), p.coords().cols());
  double epsilon = 0.0;
  double sigma = 0.0;
  for (std::size_t j = 0; j < bundle.size(); ++j) {
    const double w = lambda(static_cast<Eigen::Index>(j));
    g += w * bundle.transported(j).coords();
    epsilon += w * bundle.entries()[j].e;
    sigma += w * bundle.entries()[j].r;
  }
  TangentVector direction(p, std::move(g));
  const double g2 = inner(direction, direction);
  const double residual = kkt_residual(in, lambda);
  return SubproblemSolution{lambda, std::move(direction), epsilon, sigma, -g2 - epsilon - sigma, residual};
}

inline SubproblemSolution aggregate(const Bundle& bundle, const Vector& lambda) {
  return aggregate(bundle, SubproblemInput{bundle.gram(), bundle.linear()}, lambda);
}

}  // namespace geobundle
