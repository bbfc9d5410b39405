#include "krf/stencil.hpp"

#include <array>
#include <cmath>

namespace krf {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes,
                                                  int max_order) {
  const int nn = static_cast<int>(nodes.size());
  const int m = max_order;
  std::vector<std::vector<double>> c(nn, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  // Transpose to [order][node].
  std::vector<std::vector<double>> out(m + 1, std::vector<double>(nn, 0.0));
  for (int i = 0; i < nn; ++i)
    for (int k = 0; k <= m; ++k) out[k][i] = c[i][k];
  // Derivatives of constants vanish identically; enforce the zero row sum
  // exactly so constant shifts of the data cannot leak through near-zero
  // denominators downstream.
  for (int k = 1; k <= m; ++k) {
    double sum = 0.0;
    int imax = 0;
    for (int i = 0; i < nn; ++i) {
      sum += out[k][i];
      if (std::abs(out[k][i]) > std::abs(out[k][imax])) imax = i;
    }
    out[k][imax] -= sum;
  }
  return out;
}

// Integral over [a, b] of the Lagrange basis on `count` nodes, by exact
// monomial integration in a shifted/scaled variable.
std::vector<double> poly_cell_weights(const double* xs, int count, double a, double b) {
  // Work in u = (x - a) / (b - a) so the cell is [0, 1].
  const double h = b - a;
  std::vector<double> u(count), w(count, 0.0);
  for (int i = 0; i < count; ++i) u[i] = (xs[i] - a) / h;
  std::vector<double> poly(count);
  for (int i = 0; i < count; ++i) {
    // ell_i(u) = prod_{j != i} (u - u[j]) / (u[i] - u[j]); expand numerator.
    std::fill(poly.begin(), poly.end(), 0.0);
    poly[0] = 1.0;
    int deg = 0;
    double denom = 1.0;
    for (int j = 0; j < count; ++j) {
      if (j == i) continue;
      denom *= (u[i] - u[j]);
      for (int k = deg + 1; k >= 1; --k) poly[k] = poly[k - 1] - u[j] * poly[k];
      poly[0] *= -u[j];
      ++deg;
    }
    double integral = 0.0;
    for (int k = 0; k < count; ++k) integral += poly[k] / (k + 1);
    w[i] = h * integral / denom;
  }
  return w;
}

std::array<double, 4> cubic_cell_weights(const double* xs, double a, double b) {
  const auto w = poly_cell_weights(xs, 4, a, b);
  return {w[0], w[1], w[2], w[3]};
}

std::vector<double> composite_cubic_weights(std::span<const double> x) {
  const size_t n = x.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  if (n < 4) {  // trapezoid fallback for tiny grids
    for (size_t j = 0; j + 1 < n; ++j) {
      const double h = 0.5 * (x[j + 1] - x[j]);
      w[j] += h;
      w[j + 1] += h;
    }
    return w;
  }
  for (size_t j = 0; j + 1 < n; ++j) {
    size_t lo = (j == 0) ? 0 : (j + 2 >= n ? n - 4 : j - 1);
    const auto cw = cubic_cell_weights(&x[lo], x[j], x[j + 1]);
    for (int i = 0; i < 4; ++i) w[lo + i] += cw[i];
  }
  return w;
}

}  // namespace krf
