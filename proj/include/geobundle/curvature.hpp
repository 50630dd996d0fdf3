#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "geobundle/errors.hpp"

namespace geobundle {

/// Sectional curvature bounds omega <= K <= Omega over dom f, plus its diameter.
struct CurvatureProfile {
  double omega = 0.0;
  double Omega = 0.0;
  double delta = std::numeric_limits<double>::infinity();

  bool flat() const { return omega == 0.0 && Omega == 0.0; }

  void validate() const {
    require(omega <= Omega, "curvature profile: omega must not exceed Omega");
    require(delta > 0.0, "curvature profile: diameter must be positive");
    if (omega < 0.0 || Omega > 0.0)
      require(std::isfinite(delta), "curvature profile: curved domains need a finite diameter");
    if (Omega > 0.0)
      require(delta < std::numbers::pi / std::sqrt(Omega),
              "curvature profile: diameter must stay below pi/sqrt(Omega)");
  }
};

/// Lower comparison factor: 1 for omega >= 0, else x coth(x) with x = sqrt(-omega) s.
inline double zeta1(double omega, double s) {
  require(s >= 0.0, "zeta1: s must be nonnegative");
  if (omega >= 0.0) return 1.0;
  const double x = std::sqrt(-omega) * s;
  if (x == 0.0) return 1.0;
  return x / std::tanh(x);
}

/// Upper comparison factor: 1 for Omega <= 0, else x cot(x) with x = sqrt(Omega) s < pi.
inline double zeta2(double Omega, double s) {
  require(s >= 0.0, "zeta2: s must be nonnegative");
  if (Omega <= 0.0) return 1.0;
  const double x = std::sqrt(Omega) * s;
  if (x >= std::numbers::pi)
    throw DomainError("zeta2: s must be below pi/sqrt(Omega), got s = " + std::to_string(s));
  if (x == 0.0) return 1.0;
  return x / std::tan(x);
}

/// Curvature remainder coefficient max{zeta1 - 1, 1 - zeta2} at the domain diameter.
inline double rho(const CurvatureProfile& profile) {
  profile.validate();
  if (profile.flat()) return 0.0;
  return std::max(zeta1(profile.omega, profile.delta) - 1.0, 1.0 - zeta2(profile.Omega, profile.delta));
}

}  // namespace geobundle
