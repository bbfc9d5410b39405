// Pointwise curvature of U(n)-invariant metrics in a unitary frame.
//
// At the reference point (e^{s/2}, 0, ..., 0) the metric is diagonal with
// coordinate eigenvalues (F'' e^{-s}, F' e^{-s}) and the curvature tensor
// has four distinct unitary-frame components: radial-radial, radial-
// transverse, transverse same-plane and transverse cross-plane.  Every
// index combination expands from these through
//
//     R_{i jbar k lbar} = (delta_ij delta_kl + delta_il delta_kj) B(i, k)
//
// which also encodes all Kahler symmetries.
//
// Norm conventions (recorded in output metadata): |Riem| and |Q0| are
// unitary-frame l2 norms over all 4-index combinations; |Ric0| and scalar
// quantities use the complex trace convention (scalar R = n at the
// Kahler-Einstein point).  The trace bound is |R| <= c_norm(n) |Riem| with
// c_norm(n) = n.
#pragma once

#include <string>
#include <vector>

#include "krf/profile.hpp"

namespace krf {

inline constexpr const char* kNormConvention = "unitary-frame-l2-all-index-tuples";
inline double c_norm(int n) { return static_cast<double>(n); }

struct CurvatureFrame {
  double s = 0.0;
  int n = 0;
  double metric_rad = 0.0, metric_trans = 0.0;  // coordinate-frame eigenvalues
  // Distinct unitary-frame components of R_{i jbar k lbar}.
  double r_rr = 0.0, r_rt = 0.0, r_tt_same = 0.0, r_tt_cross = 0.0;
  // Ricci eigenvalues relative to the metric, from the rank-4 trace.
  double ric_rad = 0.0, ric_trans = 0.0;
  // Same from the log-determinant potential route (independent stencil path).
  double ric_rad_potential = 0.0, ric_trans_potential = 0.0;
  double scalar = 0.0;     // complex trace; equals n for Kahler-Einstein
  double ric0_norm = 0.0;  // |Ric - omega|
  double q0_norm = 0.0;    // |Q0|
  double riem_norm = 0.0;  // |Riem|

  // Unitary-frame component for indices in {0 = radial, 1..n-1 transverse}.
  double expand(int i, int j, int k, int l) const;
  double min_ricci_eig() const { return n == 1 ? ric_rad : std::min(ric_rad, ric_trans); }
};

// Frame from pointwise potential derivatives alone (no potential-route Ricci).
CurvatureFrame curvature_from_derivatives(int n, double s, const Derivs4& d);

// Per-node geometry of a whole profile.  The potential-route Ricci is filled
// by differentiating log F'' + (n-1) log F' - n s along the grid, which
// cross-checks the rank-4 trace through an independent discrete path.
struct GeometryTable {
  std::vector<CurvatureFrame> frames;
  std::vector<Derivs4> derivs;       // F' ... F'''' per node
  std::vector<double> G1, G2;        // potential-route Ricci ingredients
};

GeometryTable compute_geometry(const RadialProfile& P);

// Full frame at an arbitrary point (rank-4 route).
CurvatureFrame curvature_at(const RadialProfile& P, double s);

// Minimum over nodes of the smallest Ricci eigenvalue relative to the metric.
double ricci_lower_bound(const RadialProfile& P);

// Max over nodes of the unitary-frame norm |Riem|.
double riem_sup_norm(const RadialProfile& P);

}  // namespace krf
