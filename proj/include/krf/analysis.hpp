// Geometric diagnostics: diameter, first Laplace eigenvalue, Sobolev and
// Poincare surrogates, and the small-L1-Ricci diameter criterion.
//
// Conventions: distances, eigenvalues and gradients are those of the real
// Riemannian metric (the Laplace-Beltrami operator is twice the complex
// trace Laplacian); curvature eigenvalues are shared with the curvature
// module.
#pragma once

#include "krf/profile.hpp"

namespace krf {

struct DiameterParts {
  double radial = 0.0;        // pole-to-pole meridian length, tails included
  double divisor = 0.0;       // great-circle length of the divisor at s = L
  double circle_max = 0.0;    // max over s of pi sqrt(F'(s)/2)
  double value = 0.0;         // reported diameter
};

// For n = 1 the radial meridian is exact; for n >= 2 the value is the max
// of the candidate lengths (an estimate, as labeled).
DiameterParts diameter(const RadialProfile& P);

struct SpectrumResult {
  double lambda1 = 0.0;            // reported first nonzero eigenvalue
  double lambda1_invariant = 0.0;  // rotation-invariant sector
  double lambda1_k1 = 0.0;         // first charged sector (n = 1 only)
  bool sector_bound_only = false;  // n >= 2: invariant sector value reported
};

// First nonzero Laplace-Beltrami eigenvalue via the weighted 1-D
// Sturm-Liouville problem, P1 elements with lumped mass.
SpectrumResult lambda1(const RadialProfile& P);

// Smallest sigma with ||f||_{2n/(n-1)}^2 <= sigma (||grad f||^2 + ||f||^2)
// over a fixed 32-function radial family (a lower bound on the true
// constant).  For n = 1 the left side degenerates to ||f||_inf^2.
double sobolev_proxy(const RadialProfile& P);

struct GeometryDigest {
  DiameterParts diameter;
  SpectrumResult spectrum;
  double sobolev_proxy = 0.0;
  double poincare_proxy = 0.0;  // 1 / lambda1
  bool liyau_applicable = false;
  bool liyau_ok = true;  // lambda1 >= pi^2 / (4 D^2) when Ric >= 0
};

GeometryDigest geometry_digest(const RadialProfile& P, bool with_sobolev = true);

struct SprouseReport {
  double integral = 0.0;    // (1/V) int ((m-1) - Ric_-)_+
  double threshold = 0.0;   // epsilon_0(n)
  double diameter = 0.0;
  double delta = 0.0;
  bool hypothesis_met = false;   // Ric >= -1
  bool below_threshold = false;
  bool asserts_bound = false;    // hypothesis and integral < threshold
  bool diameter_ok = true;       // diameter < pi + delta when asserted
};

SprouseReport sprouse_check(const RadialProfile& P, double delta);

}  // namespace krf
