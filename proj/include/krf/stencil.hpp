// Finite-difference weights for arbitrary node sets (Fornberg's algorithm)
// and integration weights for composite cubic quadrature on a 1-D grid.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace krf {

// Weights of derivative orders 0..max_order at point x0 from values at
// `nodes`.  out[k][i] multiplies f(nodes[i]) in the order-k approximation.
// Exact for polynomials of degree < nodes.size().
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int max_order);

// Node weights W with sum_i W[i] f(x[i]) ~ integral of f over [x.front(),
// x.back()].  Each cell integrates the cubic through a 4-node window; the
// resulting composite rule is 4th order on smoothly varying grids.
std::vector<double> composite_cubic_weights(std::span<const double> x);

// Weights for integrating the cubic through nodes xs[0..3] over [a, b].
std::array<double, 4> cubic_cell_weights(const double* xs, double a, double b);

// Same for an interpolating polynomial through `count` nodes (count <= 8).
std::vector<double> poly_cell_weights(const double* xs, int count, double a, double b);

}  // namespace krf
