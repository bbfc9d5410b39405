// Geodesics on CP^1 profiles viewed as surfaces of revolution, and the
// Monte-Carlo check of the segment inequality between two polar caps.
//
// The real metric is (F''/2) ds^2 + 2 F'' dalpha^2; along a unit-speed
// geodesic the Clairaut constant c = G alpha_dot is preserved, so a
// connecting geodesic between cap points is found by shooting in c.
#pragma once

#include <cstdint>

#include "krf/profile.hpp"

namespace krf {

struct SurfacePoint {
  double s = 0.0;
  double alpha = 0.0;
};

class RevolutionSurface {
 public:
  explicit RevolutionSurface(const RadialProfile& P);

  // Geodesic distance between points (s-monotone branch); also returns the
  // integral of a radial function f along the connecting geodesic.
  // Returns false when the shooting bracket fails.
  bool connect(const SurfacePoint& x, const SurfacePoint& y, double* length,
               double* f_integral, std::span<const double> f_nodes) const;

  double distance_from_south(double s) const;
  double distance_from_north(double s) const;
  // s at given distance from the pole (inverse of the above).
  double s_at_south_distance(double dist) const;
  double s_at_north_distance(double dist) const;
  // Cap volumes: 2 pi F'(s) measures B(south, r) up to the boundary radius.
  double cap_volume_south(double r) const;
  double cap_volume_north(double r) const;
  double total_volume() const { return total_volume_; }
  double total_length() const { return cumlen_.back() + tail_south_ + tail_north_; }

 private:
  const GridScheme* scheme_;
  std::vector<double> G_;       // 2 F'' (angular metric coefficient)
  std::vector<double> dl_;      // dl/dtheta along meridians
  std::vector<double> cumlen_;  // meridian arclength from the south cut
  std::vector<double> tau_;     // F'
  double tail_south_ = 0.0, tail_north_ = 0.0;
  double total_volume_ = 0.0;

  double interp(const std::vector<double>& table, double theta) const;
  double sweep_alpha(double th_a, double th_b, double c) const;
  void arc_integrals(double th_a, double th_b, double c, std::span<const double> f_fine,
                     double* length, double* f_integral) const;
  double meridian_f(double th_a, double th_b, std::span<const double> f_fine) const;
  double turning_theta(double c, bool south) const;
};

struct SegmentInequalityReport {
  double lhs = 0.0;            // MC estimate of the double cap integral
  double rhs = 0.0;            // C(m)(diam vol + diam vol) \int_M f
  double ratio = 0.0;          // lhs / rhs
  double constant = 2.0;       // C(m) = 2^{m-1}, m = 2
  int pairs_requested = 0;
  int pairs_used = 0;
  int pairs_skipped = 0;
  bool skip_flag = false;      // more than 5% skipped
  bool holds = false;          // lhs <= rhs
};

// Monte-Carlo over point pairs in polar caps of radius cap_radius, with
// f = sum of |real Ricci eigenvalues - 1| integrated along connecting
// geodesics.  Deterministic for a fixed seed at any worker count.
SegmentInequalityReport segment_inequality_check(const RadialProfile& P,
                                                 double cap_radius, int pairs,
                                                 uint64_t seed);

}  // namespace krf
