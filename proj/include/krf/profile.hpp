// Radial representation of U(n)-invariant Kahler metrics on CP^n.
//
// A profile stores the potential F(s) on a grid, s = log|z|^2, with
// F' > 0, F'' > 0 (metric positivity) and the compactification boundary
// behaviour F -> const + a e^s (south) and F -> (n+1)s + const + b e^{-s}
// (north).  All differentiation happens in the pole chart (see chart.hpp):
// the engine works on psi = F - F_FS, which extends to a smooth even
// function of the chart angle across both poles, so stencils keep full
// order at the ends of the grid.
#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "krf/chart.hpp"

namespace krf {

// Per-grid immutable differentiation/quadrature scheme, shared by every
// object living on the same grid.
class GridScheme {
 public:
  explicit GridScheme(std::vector<double> s);

  int size() const { return static_cast<int>(s_.size()); }
  const std::vector<double>& s() const { return s_; }
  const std::vector<double>& theta() const { return theta_; }
  double s_min() const { return s_.front(); }
  double s_max() const { return s_.back(); }

  // d^k/dtheta^k (k = 1..max_order <= 4) of a smooth nodal function at all
  // nodes, using reflected ghosts at the poles.  out[j][k-1] is order k.
  void theta_derivatives(std::span<const double> values, int max_order,
                         std::vector<std::array<double, 4>>& out) const;

  // Same at one arbitrary point theta (also returns order 0 interpolation).
  void theta_derivatives_at(std::span<const double> values, double theta, int max_order,
                            double* value0, std::array<double, 4>* derivs) const;

  // Batched version: orders 0..max_order at many points with one ghost fill.
  // out[i][k] is the order-k value at thetas[i].
  void theta_derivatives_multi(std::span<const double> values,
                               std::span<const double> thetas, int max_order,
                               std::vector<std::array<double, 5>>& out) const;

  // Node weights for \int f(s) ds over the grid span.  Built from composite
  // cubic quadrature in theta, where integrands of compactified metrics are
  // smooth; weights are all positive on the standard grids.
  const std::vector<double>& quad_s() const { return quad_s_; }

  double integrate_s(std::span<const double> f) const;

 private:
  static constexpr int kGhosts = 4;
  static constexpr int kWindow = 9;

  std::vector<double> s_;
  std::vector<double> theta_;
  std::vector<double> ext_theta_;          // ghosted theta nodes
  std::vector<int> ext_src_;               // source node for each ext slot
  std::vector<std::array<double, 4>> wts_; // per (node, window-slot): orders 1..4
  std::vector<int> win_lo_;                // ext window start per node
  std::vector<double> quad_s_;

  void fill_extended(std::span<const double> v, std::vector<double>& ext) const;
};

struct BoundaryModel {
  double a = 0.0;        // south coefficient: F ~ c_south + a e^{s}
  double b = 0.0;        // north coefficient: F ~ (n+1)s + c_north + b e^{-s}
  double c_south = 0.0;
  double c_north = 0.0;
};

// Potential derivatives F', F'', F''', F'''' at a point.
using Derivs4 = std::array<double, 4>;

class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(int n, std::vector<double> grid, std::vector<double> F,
                double tol_bc = 1e-6);
  // Shares an existing scheme (same grid); used by the flow inner loop.
  RadialProfile(int n, std::shared_ptr<const GridScheme> scheme, std::vector<double> F,
                double tol_bc = 1e-6);

  int n = 0;
  std::vector<double> F;
  double tol_bc = 1e-6;
  BoundaryModel boundary_model;

  const std::vector<double>& grid() const { return scheme_->s(); }
  const GridScheme& scheme() const { return *scheme_; }
  std::shared_ptr<const GridScheme> scheme_ptr() const { return scheme_; }
  const std::vector<double>& psi() const { return psi_; }

  double F_at(double s) const;
  Derivs4 derivatives_at(double s) const;

  // Per-node derivative table, orders 1..4.
  const std::vector<Derivs4>& node_derivatives() const;

  // Throws on invariant violations: positivity of F', F'' at interior nodes
  // and boundary closure within max(tol_bc, truncation allowance).
  void validate() const;
  bool is_valid() const;

 private:
  std::shared_ptr<const GridScheme> scheme_;
  std::vector<double> psi_;                       // F - F_FS at nodes
  mutable std::vector<Derivs4> node_derivs_;      // lazy
  void init();
};

RadialProfile fubini_study_profile(int n, std::vector<double> grid);
RadialProfile fubini_study_profile(int n, std::shared_ptr<const GridScheme> scheme);

// Coordinate-frame metric eigenvalues (radial, transverse) at s.
std::pair<double, double> metric_at(const RadialProfile& P, double s);

// Legendre-dual description: tau = F'(s) in [0, n+1], phi(tau) = F''(s(tau)).
struct MomentumProfile {
  int n = 0;
  std::vector<double> tau_grid;
  std::vector<double> phi;
  double anchor_s = 0.0;    // s at tau_grid[anchor_index]
  double anchor_F = 0.0;    // F there; fixes the Legendre gauge
  int anchor_index = 0;
  double tol_bc = 1e-6;

  void validate() const;
};

MomentumProfile to_momentum(const RadialProfile& P);
// Reconstructs F on the momentum profile's own implied s-grid.
RadialProfile from_momentum(const MomentumProfile& M);

}  // namespace krf
