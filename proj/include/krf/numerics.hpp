// Small numeric utilities shared across modules: compensated summation,
// a counter-based RNG for partition-stable sampling, golden-section search.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace krf {

// Neumaier compensated summation; deterministic for a fixed element order.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_dot(std::span<const double> a, std::span<const double> b) {
  KahanSum s;
  for (size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

// splitmix64: stateless hash-style generator.  Seeding by (seed, index)
// makes every draw independent of work partitioning.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform double in [0, 1) from a 64-bit hash state.
inline double uniform01(uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : seed_(splitmix64(seed ^ (stream * 0x9e3779b97f4a7c15ull))) {}
  double next01() { return uniform01(splitmix64(seed_ ^ counter_++)); }
  double next_symmetric() { return 2.0 * next01() - 1.0; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 1;
};

// Golden-section maximizer on [a, b] for unimodal f.
inline double golden_section_max(const std::function<double(double)>& f, double a,
                                 double b, double tol = 1e-14, int max_iter = 400) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Least-squares line fit; returns {slope, intercept, r_squared}.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit out;
  size_t n = x.size();
  if (n < 2) return out;
  KahanSum sx, sy;
  for (size_t i = 0; i < n; ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
  }
  double mx = sx.value() / n, my = sy.value() / n;
  KahanSum sxx, sxy, syy;
  for (size_t i = 0; i < n; ++i) {
    sxx.add((x[i] - mx) * (x[i] - mx));
    sxy.add((x[i] - mx) * (y[i] - my));
    syy.add((y[i] - my) * (y[i] - my));
  }
  if (sxx.value() <= 0.0) return out;
  out.slope = sxy.value() / sxx.value();
  out.intercept = my - out.slope * mx;
  out.r2 = syy.value() > 0.0 ? (sxy.value() * sxy.value()) / (sxx.value() * syy.value()) : 1.0;
  return out;
}

}  // namespace krf
