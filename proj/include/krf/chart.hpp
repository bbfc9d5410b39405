// Pole chart for U(n)-invariant profiles on CP^n.
//
// The cylinder coordinate s = log|z|^2 covers CP^n minus the two fixed-point
// sets; both ends are coordinate singularities of an otherwise smooth
// geometry.  The chart angle
//
//     theta = 2*atan(e^{s/2})  in (0, pi)
//
// is the Fubini-Study colatitude.  A rotation-invariant function that is
// smooth on the manifold is a smooth *even* function of theta at theta = 0
// and of (pi - theta) at theta = pi, so finite differences in theta stay
// uniformly accurate all the way into the poles.  All derivative machinery
// differentiates in theta and pulls back to s through
//
//     d/ds = sigma(theta) d/dtheta,   sigma = sin(theta)/2.
#pragma once

#include <array>
#include <cmath>

namespace krf {

inline double theta_of_s(double s) { return 2.0 * std::atan(std::exp(0.5 * s)); }

inline double s_of_theta(double theta) { return 2.0 * std::log(std::tan(0.5 * theta)); }

inline double sigma_of_theta(double theta) { return 0.5 * std::sin(theta); }

// Pull s-derivatives (orders 1..4) back from theta-derivatives at one point.
// Coefficients are the Bell polynomials of d/ds = sigma d/dtheta with
// sigma'' = -sigma, sigma''' = -sigma'.
inline std::array<double, 4> pullback_derivatives(double theta,
                                                  const std::array<double, 4>& dpsi_dtheta) {
  const double g = 0.5 * std::sin(theta);   // sigma
  const double gp = 0.5 * std::cos(theta);  // sigma'
  const double gpp = -g;
  const double gppp = -gp;
  const double p1 = dpsi_dtheta[0], p2 = dpsi_dtheta[1], p3 = dpsi_dtheta[2],
               p4 = dpsi_dtheta[3];
  std::array<double, 4> d;
  d[0] = g * p1;
  d[1] = g * gp * p1 + g * g * p2;
  d[2] = g * (g * gpp + gp * gp) * p1 + 3.0 * g * g * gp * p2 + g * g * g * p3;
  d[3] = g * (gp * gp * gp + 4.0 * g * gp * gpp + g * g * gppp) * p1 +
         g * g * (7.0 * gp * gp + 4.0 * g * gpp) * p2 + 6.0 * g * g * g * gp * p3 +
         g * g * g * g * p4;
  return d;
}

// Fubini-Study potential F(s) = (n+1) log(1 + e^s) and its s-derivatives.
// With q = e^s/(1+e^s) the derivatives are logistic polynomials; q is also
// sin^2(theta/2), which is what ties this chart to the FS arclength.
struct FsPotential {
  int n;

  explicit FsPotential(int dim) : n(dim) {}

  static double softplus(double s) {
    return s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
  }
  static double logistic(double s) {
    return s > 0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
  }

  double value(double s) const { return (n + 1) * softplus(s); }

  // Orders 1..4 at s.
  std::array<double, 4> derivatives(double s) const {
    const double q = logistic(s);
    const double w = q * (1.0 - q);
    const double c = static_cast<double>(n + 1);
    return {c * q, c * w, c * w * (1.0 - 2.0 * q), c * w * (1.0 - 6.0 * q + 6.0 * q * q)};
  }
};

}  // namespace krf
