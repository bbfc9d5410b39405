// Analytic profile fixtures shared by the test suites.  Each fixture knows
// its potential and the first four s-derivatives in closed form, which is
// what the independent oracles differentiate and integrate.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "krf/chart.hpp"
#include "krf/grid.hpp"
#include "krf/profile.hpp"

namespace krf::testing {

struct AnalyticProfile {
  int n = 1;
  std::function<double(double)> F;
  std::function<std::array<double, 4>(double)> derivs;  // F'..F''''

  RadialProfile sample(std::shared_ptr<const GridScheme> scheme) const {
    std::vector<double> vals(scheme->size());
    for (int j = 0; j < scheme->size(); ++j) vals[j] = F(scheme->s()[j]);
    return RadialProfile(n, std::move(scheme), std::move(vals));
  }
  RadialProfile sample(double L, int nodes) const {
    return sample(std::make_shared<GridScheme>(fs_arclength_grid(L, nodes)));
  }
};

inline AnalyticProfile fs_analytic(int n) {
  FsPotential fs(n);
  return {n, [fs](double s) { return fs.value(s); },
          [fs](double s) { return fs.derivatives(s); }};
}

// sech-bump derivatives up to order 4.
inline std::array<double, 5> sech_bump(double s, double amp) {
  const double se = 1.0 / std::cosh(s), ta = std::tanh(s);
  const double p0 = amp * se;
  const double p1 = -amp * se * ta;
  const double p2 = amp * se * (ta * ta - se * se);
  const double p3 = amp * se * ta * (5.0 * se * se - ta * ta);
  const double p4 = amp * se * (5.0 * se * se * se * se - 18.0 * se * se * ta * ta + ta * ta * ta * ta);
  return {p0, p1, p2, p3, p4};
}

// FS plus amp * sech(s - shift): the standard perturbed fixture.
inline AnalyticProfile perturbed_fs(int n, double amp, double shift = 0.0) {
  FsPotential fs(n);
  return {n,
          [fs, amp, shift](double s) { return fs.value(s) + sech_bump(s - shift, amp)[0]; },
          [fs, amp, shift](double s) {
            auto d = fs.derivatives(s);
            auto p = sech_bump(s - shift, amp);
            return std::array<double, 4>{d[0] + p[1], d[1] + p[2], d[2] + p[3], d[3] + p[4]};
          }};
}

// Deterministic family of admissible profiles: sums of small shifted bumps.
inline AnalyticProfile random_admissible(int n, uint64_t seed) {
  std::vector<double> amps(4), shifts(4);
  uint64_t h = seed;
  auto next = [&h] {
    h = h * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };
  for (int k = 0; k < 4; ++k) {
    amps[k] = 0.02 * (2.0 * next() - 1.0) / (k + 1);
    shifts[k] = 3.0 * (2.0 * next() - 1.0);
  }
  FsPotential fs(n);
  return {n,
          [fs, amps, shifts](double s) {
            double v = fs.value(s);
            for (int k = 0; k < 4; ++k) v += sech_bump(s - shifts[k], amps[k])[0];
            return v;
          },
          [fs, amps, shifts](double s) {
            auto d = fs.derivatives(s);
            std::array<double, 4> out{d[0], d[1], d[2], d[3]};
            for (int k = 0; k < 4; ++k) {
              auto p = sech_bump(s - shifts[k], amps[k]);
              for (int i = 0; i < 4; ++i) out[i] += p[i + 1];
            }
            return out;
          }};
}

}  // namespace krf::testing
