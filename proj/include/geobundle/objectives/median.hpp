#pragma once

// Weighted Riemannian geometric median  f(p) = Σ w_j dist(p, q_j).

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "geobundle/errors.hpp"
#include "geobundle/manifold.hpp"
#include "geobundle/objectives/common.hpp"
#include "geobundle/problem.hpp"

namespace geobundle {

struct MedianProblem {
  ManifoldKind kind;
  std::vector<Point> data;
  std::vector<double> weights;
  std::optional<GeodesicBall> domain;  // f = +inf outside when present

  void validate() const {
    require(!data.empty() && data.size() == weights.size(), "median: data and weights must match");
    double total = 0.0;
    for (double w : weights) {
      require(w >= 0.0, "median: weights must be nonnegative");
      total += w;
    }
    require(std::abs(total - 1.0) <= 1e-12, "median: weights must sum to one");
    for (const auto& q : data) {
      require(q.kind() == kind, "median: data point on the wrong manifold");
      if (domain) require(domain->contains(q), "median: data point outside the domain ball");
    }
  }
};

inline MedianProblem uniform_median(std::vector<Point> data, std::optional<GeodesicBall> domain = std::nullopt) {
  require(!data.empty(), "median: need at least one data point");
  ManifoldKind kind = data.front().kind();
  std::vector<double> w(data.size(), 1.0 / static_cast<double>(data.size()));
  return MedianProblem{kind, std::move(data), std::move(w), std::move(domain)};
}

inline bool median_interior(const MedianProblem& prob, const Point& p) {
  return !prob.domain || prob.domain->contains(p);
}

inline double median_value(const MedianProblem& prob, const Point& p) {
  if (!median_interior(prob, p)) return std::numeric_limits<double>::infinity();
  double f = 0.0;
  for (std::size_t j = 0; j < prob.data.size(); ++j) f += prob.weights[j] * distance(p, prob.data[j]);
  return f;
}

inline TangentVector median_subgradient(const MedianProblem& prob, const Point& p, Rng& rng) {
  Matrix acc = Matrix::Zero(p.coords().rows(), p.coords().cols());
  for (std::size_t j = 0; j < prob.data.size(); ++j)
    acc += prob.weights[j] * distance_subgradient(p, prob.data[j], rng).coords();
  return TangentVector(p, std::move(acc));
}

inline Problem make_problem(const MedianProblem& prob, const CurvatureProfile& curvature) {
  Problem out{prob.kind,
              [&prob](const Point& p) { return median_value(prob, p); },
              [&prob](const Point& p, Rng& rng) { return median_subgradient(prob, p, rng); },
              {},
              curvature};
  if (prob.domain) out.interior = [&prob](const Point& p) { return median_interior(prob, p); };
  return out;
}

/// N points exp_base(X) with X Gaussian (ambient stddev, projected). With a
/// radius cap, samples whose tangent norm reaches the cap are redrawn.
inline std::vector<Point> gaussian_data(const Point& base, std::size_t count, double stddev, Rng& rng,
                                        std::optional<double> max_radius = std::nullopt) {
  std::vector<Point> out;
  out.reserve(count);
  while (out.size() < count) {
    TangentVector x = random_tangent(base, rng, stddev);
    if (max_radius && norm(x) >= *max_radius) continue;
    out.push_back(exp_map(base, x));
  }
  return out;
}

/// Indices of a pair realizing the maximal pairwise distance.
inline std::pair<std::size_t, std::size_t> farthest_pair(const std::vector<Point>& points) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  double dmax = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(points[i], points[j]);
      if (d > dmax) {
        dmax = d;
        best = {i, j};
      }
    }
  return best;
}

}  // namespace geobundle
