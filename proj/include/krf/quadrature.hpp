// Volume-normalized integrals against the radial measure of a metric.
//
// Every manifold integral of a rotation-invariant function reduces to
// (1/V) \int f(s) w(s) ds with w = F'' (F')^{n-1}; the angular factor
// cancels against the normalisation.  The cut ends [L, inf) contribute
// exponentially small tails which are restored from the boundary model:
// \int_L^inf w ds = ((n+1)^n - F'(L)^n)/n exactly.
#pragma once

#include <span>
#include <vector>

#include "krf/profile.hpp"

namespace krf {

struct RadialMeasure {
  const GridScheme* scheme = nullptr;
  std::vector<double> w;            // F'' F'^{n-1} at nodes
  std::vector<double> node_weight;  // quadrature weight times w
  double tail_south = 0.0;          // \int w over (-inf, s_min]
  double tail_north = 0.0;          // \int w over [s_max, inf)
  double volume = 0.0;              // core + tails; equals (n+1)^n / n

  // \int f w ds including tails (f frozen at its end values there).
  double integrate(std::span<const double> f) const;
  // (1/V) \int f w ds.
  double average(std::span<const double> f) const;
};

RadialMeasure radial_measure(const GridScheme& scheme, int n,
                             std::span<const Derivs4> derivs);

inline RadialMeasure radial_measure(const RadialProfile& P) {
  return radial_measure(P.scheme(), P.n, P.node_derivatives());
}

// \int f ds over the grid plus exponential tails f ~ f_end e^{-rate |s|}.
double integrate_with_exp_tails(const GridScheme& scheme, std::span<const double> f,
                                double rate_south, double rate_north);

}  // namespace krf
