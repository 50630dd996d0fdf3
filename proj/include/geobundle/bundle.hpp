#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "geobundle/errors.hpp"
#include "geobundle/manifold.hpp"

namespace geobundle {

/// QP weights at or below this are treated as zero when purging.
inline constexpr double kPositiveWeight = 1e-12;
/// Linearization errors below -kErrorSlack count as clamped (oracle error or non-convexity).
inline constexpr double kErrorSlack = 1e-10;

struct BundleEntry {
  std::size_t index = 0;  // iteration that produced the candidate
  Point q;                // candidate point
  TangentVector X;        // subgradient at q
  double fq = 0.0;
  double e = 0.0;  // linearization error against the serious point
  double r = 0.0;  // curvature remainder against the serious point
  double lambda = 0.0;
};

namespace detail {

inline double raw_linearization_error(double f_pk, const BundleEntry& entry, const TangentVector& log_q_pk) {
  return f_pk - entry.fq - inner(entry.X, log_q_pk);
}

}  // namespace detail

/// e = f(p) - f(q) - <X_q, log_q p>, clamped at zero. Clamps below -kErrorSlack are
/// counted in `clamped` when given.
inline double linearization_error(double f_pk, const BundleEntry& entry, const Point& pk,
                                  std::size_t* clamped = nullptr) {
  const double raw = detail::raw_linearization_error(f_pk, entry, log_map(entry.q, pk));
  if (raw < -kErrorSlack && clamped != nullptr) ++*clamped;
  return std::max(raw, 0.0);
}

/// r = rho * |X_q| * |log_q p|.
inline double remainder(double rho, const BundleEntry& entry, const Point& pk) {
  if (rho == 0.0) return 0.0;
  return rho * norm(entry.X) * norm(log_map(entry.q, pk));
}

/// Candidate points and subgradients collected by the bundle method, with their
/// errors and transported subgradients kept current for one serious point.
class Bundle {
 public:
  Bundle(Point serious_point, double serious_value, double rho, std::size_t cap)
      : serious_point_(std::move(serious_point)), serious_value_(serious_value), rho_(rho), cap_(cap) {
    require(cap >= 1, "bundle cap must be positive");
    require(rho >= 0.0, "bundle rho must be nonnegative");
  }

  const std::vector<BundleEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Point& serious_point() const { return serious_point_; }
  double serious_value() const { return serious_value_; }
  double rho() const { return rho_; }
  std::size_t cap() const { return cap_; }
  std::size_t clamped_errors() const { return clamped_; }

  /// Subgradient of entry j transported to the serious point.
  const TangentVector& transported(std::size_t j) const { return cache_[j].transported; }

  /// Appends a candidate, computes its e and r against the serious point, and
  /// enforces the size cap.
  void append(std::size_t index, Point q, TangentVector X, double fq) {
    require(same_point(X.base(), q), "bundle entry subgradient must be based at its point");
    entries_.push_back(BundleEntry{index, std::move(q), std::move(X), fq, 0.0, 0.0, 0.0});
    cache_.push_back(compute(entries_.back()));
    enforce_cap();
  }

  void set_weights(const Vector& lambda) {
    require(static_cast<std::size_t>(lambda.size()) == entries_.size(), "weight vector size mismatch");
    for (std::size_t j = 0; j < entries_.size(); ++j) entries_[j].lambda = lambda(static_cast<Eigen::Index>(j));
  }

  /// Drops entries whose latest QP weight is not positive.
  void purge() {
    std::vector<BundleEntry> kept;
    std::vector<Cache> kept_cache;
    for (std::size_t j = 0; j < entries_.size(); ++j) {
      if (entries_[j].lambda <= kPositiveWeight) continue;
      kept.push_back(std::move(entries_[j]));
      kept_cache.push_back(std::move(cache_[j]));
    }
    entries_ = std::move(kept);
    cache_ = std::move(kept_cache);
  }

  /// Recomputes e, r and the transported subgradients against a new serious point.
  /// A call with the current serious point changes nothing.
  void refresh(const Point& new_serious_point, double new_value) {
    if (new_serious_point == serious_point_ && new_value == serious_value_) return;
    serious_point_ = new_serious_point;
    serious_value_ = new_value;
    for (std::size_t j = 0; j < entries_.size(); ++j) cache_[j] = compute(entries_[j]);
  }

  /// G_ij = <P X_i, P X_j> at the serious point.
  Matrix gram() const {
    const auto n = static_cast<Eigen::Index>(entries_.size());
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) {
        g(i, j) = inner(cache_[i].transported, cache_[j].transported);
        g(j, i) = g(i, j);
      }
    return g;
  }

  /// c_j = e_j + r_j.
  Vector linear() const {
    Vector c(static_cast<Eigen::Index>(entries_.size()));
    for (std::size_t j = 0; j < entries_.size(); ++j) c(static_cast<Eigen::Index>(j)) = entries_[j].e + entries_[j].r;
    return c;
  }

  /// Cutting-plane model f(p) + max_j { -e_j + <X_j, log_{q_j} q - log_{q_j} p> }.
  double model_value(const Point& q) const {
    require(!entries_.empty(), "model of an empty bundle");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < entries_.size(); ++j) {
      const auto& entry = entries_[j];
      TangentVector diff = log_map(entry.q, q) - cache_[j].log_to_serious;
      best = std::max(best, -entry.e + inner(entry.X, diff));
    }
    return serious_value_ + best;
  }

 private:
  struct Cache {
    TangentVector log_to_serious;  // log_{q_j} p, based at q_j
    TangentVector transported;     // P_{p <- q_j} X_j
  };

  Cache compute(BundleEntry& entry) {
    TangentVector log_q_p = log_map(entry.q, serious_point_);
    const double raw = detail::raw_linearization_error(serious_value_, entry, log_q_p);
    if (raw < -kErrorSlack) ++clamped_;
    entry.e = std::max(raw, 0.0);
    entry.r = rho_ == 0.0 ? 0.0 : rho_ * norm(entry.X) * norm(log_q_p);
    TangentVector moved = parallel_transport(entry.q, serious_point_, entry.X);
    return Cache{std::move(log_q_p), std::move(moved)};
  }

  void enforce_cap() {
    while (entries_.size() > cap_) {
      const std::size_t victim = (entries_.size() > 1 && entries_.front().q == serious_point_) ? 1 : 0;
      entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
      cache_.erase(cache_.begin() + static_cast<std::ptrdiff_t>(victim));
    }
  }

  Point serious_point_;
  double serious_value_;
  double rho_;
  std::size_t cap_;
  std::vector<BundleEntry> entries_;
  std::vector<Cache> cache_;
  std::size_t clamped_ = 0;
};

}  // namespace geobundle
