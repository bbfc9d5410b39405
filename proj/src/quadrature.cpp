#include "krf/quadrature.hpp"

#include <cmath>

#include "krf/numerics.hpp"

namespace krf {

double RadialMeasure::integrate(std::span<const double> f) const {
  KahanSum acc;
  for (size_t j = 0; j < node_weight.size(); ++j) acc.add(node_weight[j] * f[j]);
  acc.add(tail_south * f.front());
  acc.add(tail_north * f.back());
  return acc.value();
}

double RadialMeasure::average(std::span<const double> f) const {
  return integrate(f) / volume;
}

RadialMeasure radial_measure(const GridScheme& scheme, int n,
                             std::span<const Derivs4> derivs) {
  RadialMeasure m;
  m.scheme = &scheme;
  const int N = scheme.size();
  m.w.resize(N);
  m.node_weight.resize(N);
  for (int j = 0; j < N; ++j) {
    m.w[j] = derivs[j][1] * std::pow(derivs[j][0], n - 1);
    m.node_weight[j] = scheme.quad_s()[j] * m.w[j];
  }
  m.tail_south = std::pow(derivs.front()[0], n) / n;
  m.tail_north = (std::pow(static_cast<double>(n + 1), n) - std::pow(derivs.back()[0], n)) / n;
  KahanSum v;
  for (int j = 0; j < N; ++j) v.add(m.node_weight[j]);
  v.add(m.tail_south);
  v.add(m.tail_north);
  m.volume = v.value();
  return m;
}

double integrate_with_exp_tails(const GridScheme& scheme, std::span<const double> f,
                                double rate_south, double rate_north) {
  double core = scheme.integrate_s(f);
  if (rate_south > 0.0) core += f.front() / rate_south;
  if (rate_north > 0.0) core += f.back() / rate_north;
  return core;
}

}  // namespace krf
