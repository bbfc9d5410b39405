#include "krf/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "krf/curvature.hpp"
#include "krf/errors.hpp"
#include "krf/numerics.hpp"
#include "krf/quadrature.hpp"
#include "krf/stability.hpp"

namespace krf {

DiameterParts diameter(const RadialProfile& P) {
  const auto& scheme = P.scheme();
  const int N = scheme.size();
  const auto& d = P.node_derivatives();
  DiameterParts out;

  std::vector<double> integrand(N);
  for (int j = 0; j < N; ++j) integrand[j] = std::sqrt(0.5 * d[j][1]);
  double radial = scheme.integrate_s(integrand);
  // Tails from the boundary behaviour F'' ~ a e^{s} / b e^{-s}: each cut end
  // contributes sqrt(2 F''(end) e^{|s|}) e^{-|s|/2} = sqrt(2 F''(end)).
  radial += 2.0 * std::sqrt(0.5 * d.front()[1]);
  radial += 2.0 * std::sqrt(0.5 * d.back()[1]);
  out.radial = radial;

  out.divisor = M_PI * std::sqrt(0.5 * d.back()[0]);
  double taumax = 0.0;
  for (int j = 0; j < N; ++j) taumax = std::max(taumax, d[j][0]);
  out.circle_max = M_PI * std::sqrt(0.5 * taumax);

  out.value = P.n == 1 ? out.radial
                       : std::max({out.radial, out.divisor, out.circle_max});
  return out;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  int count = 0;
  double q = diag[0] - x;
  if (q < 0) ++count;
  for (size_t i = 1; i < diag.size(); ++i) {
    double denom = q;
    if (std::abs(denom) < 1e-300) denom = denom < 0 ? -1e-300 : 1e-300;
    q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (k counts from 1) by bisection.
double tridiag_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off,
                          int k) {
  double hi = 0.0, lo = 0.0;
  for (size_t i = 0; i < diag.size(); ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                     (i + 1 < diag.size() ? std::abs(off[i]) : 0.0);
    hi = std::max(hi, diag[i] + r);
    lo = std::min(lo, diag[i] - r);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) >= k)
      hi = mid;
    else
      lo = mid;
    if (hi - lo < 1e-13 * (1.0 + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// Generalized eigenvalue A u = lambda M u with tridiagonal stiffness and
// lumped (diagonal) mass, reduced to standard symmetric tridiagonal form.
double generalized_eigenvalue(const std::vector<double>& a_diag,
                              const std::vector<double>& a_off,
                              const std::vector<double>& m_diag, int k) {
  const size_t N = a_diag.size();
  std::vector<double> diag(N), off(N - 1);
  for (size_t i = 0; i < N; ++i) diag[i] = a_diag[i] / m_diag[i];
  for (size_t i = 0; i + 1 < N; ++i)
    off[i] = a_off[i] / std::sqrt(m_diag[i] * m_diag[i + 1]);
  return tridiag_eigenvalue(diag, off, k);
}

}  // namespace

namespace {

struct SectorEigs {
  double invariant = 0.0;
  double charged = 0.0;  // n = 1 only
};

// P1 assembly with lumped mass on a refined chart-uniform mesh of M nodes.
SectorEigs assemble_and_solve(const RadialProfile& P, int M) {
  const auto& scheme = P.scheme();
  const int n = P.n;
  const double t0 = scheme.theta().front(), t1 = scheme.theta().back();

  // mesh nodes and midpoints in one batched evaluation
  std::vector<double> th(2 * M - 1), s(2 * M - 1);
  for (int i = 0; i < 2 * M - 1; ++i) {
    th[i] = t0 + (t1 - t0) * i / (2.0 * M - 2.0);
    s[i] = s_of_theta(th[i]);
  }
  std::vector<std::array<double, 5>> dpsi;
  scheme.theta_derivatives_multi(P.psi(), th, 2, dpsi);
  const FsPotential fs(n);
  std::vector<double> d1(2 * M - 1), d2(2 * M - 1);
  for (int i = 0; i < 2 * M - 1; ++i) {
    const auto pb = pullback_derivatives(
        th[i], {dpsi[i][1], dpsi[i][2], 0.0, 0.0});
    const auto fd = fs.derivatives(s[i]);
    d1[i] = fd[0] + pb[0];
    d2[i] = fd[1] + pb[1];
  }

  std::vector<double> a_diag(M, 0.0), a_off(M - 1, 0.0), m_diag(M, 0.0),
      a1_diag(M, 0.0);
  for (int j = 0; j + 1 < M; ++j) {
    const double h = s[2 * j + 2] - s[2 * j];
    const double p = std::pow(d1[2 * j + 1], n - 1) / h;  // midpoint coefficient
    a_diag[j] += p;
    a_diag[j + 1] += p;
    a_off[j] -= p;
    const double wl = d2[2 * j] * std::pow(d1[2 * j], n - 1);
    const double wr = d2[2 * j + 2] * std::pow(d1[2 * j + 2], n - 1);
    m_diag[j] += 0.5 * h * wl;
    m_diag[j + 1] += 0.5 * h * wr;
    a1_diag[j] += 0.25 * 0.5 * h;
    a1_diag[j + 1] += 0.25 * 0.5 * h;
  }
  // End lumps pick up the cut tails of the weight so constants stay exact.
  m_diag.front() += std::pow(d1.front(), n) / n;
  m_diag.back() += (std::pow(n + 1.0, n) - std::pow(d1.back(), n)) / n;

  SectorEigs out;
  out.invariant = 2.0 * generalized_eigenvalue(a_diag, a_off, m_diag, 2);
  if (n == 1) {
    for (int j = 0; j < M; ++j) a1_diag[j] += a_diag[j];
    out.charged = 2.0 * generalized_eigenvalue(a1_diag, a_off, m_diag, 1);
  }
  return out;
}

}  // namespace

SpectrumResult lambda1(const RadialProfile& P) {
  // Second-order elements on an internally refined mesh, plus Richardson
  // extrapolation across a mesh doubling.
  const int M = std::max(4 * P.scheme().size(), 1024);
  const auto coarse = assemble_and_solve(P, M / 2);
  const auto fine = assemble_and_solve(P, M);

  SpectrumResult out;
  out.lambda1_invariant = (4.0 * fine.invariant - coarse.invariant) / 3.0;
  out.lambda1 = out.lambda1_invariant;
  out.sector_bound_only = P.n >= 2;
  if (P.n == 1) {
    out.lambda1_k1 = (4.0 * fine.charged - coarse.charged) / 3.0;
    out.lambda1 = std::min(out.lambda1_invariant, out.lambda1_k1);
  }
  return out;
}

double sobolev_proxy(const RadialProfile& P) {
  const auto& scheme = P.scheme();
  const int N = scheme.size();
  const int n = P.n;
  const auto m = radial_measure(P);

  // Fixed deterministic radial test family in the chart angle.
  std::vector<std::vector<double>> family;
  auto add = [&](auto&& fn) {
    std::vector<double> f(N);
    for (int j = 0; j < N; ++j) f[j] = fn(scheme.theta()[j]);
    family.push_back(std::move(f));
  };
  add([](double) { return 1.0; });
  for (int k = 1; k <= 10; ++k)
    add([k](double t) { return std::cos(k * t); });
  for (int k = 1; k <= 11; ++k) {
    const double c = M_PI * k / 12.0;
    add([c](double t) { return std::exp(-4.0 * (t - c) * (t - c)); });
  }
  for (int k = 1; k <= 10; ++k) {
    const double c = M_PI * k / 11.0;
    add([c](double t) { return std::tanh(3.0 * (t - c)); });
  }

  double sigma = 0.0;
  std::vector<std::array<double, 4>> dth;
  std::vector<double> grad2(N), lhs_pow(N), f2(N);
  for (const auto& f : family) {
    scheme.theta_derivatives(f, 1, dth);
    for (int j = 0; j < N; ++j) {
      const double fp = sigma_of_theta(scheme.theta()[j]) * dth[j][0];
      grad2[j] = 2.0 * fp * fp / std::max(P.node_derivatives()[j][1], 1e-300);
      f2[j] = f[j] * f[j];
    }
    double lhs;
    if (n == 1) {
      double sup = 0.0;
      for (int j = 0; j < N; ++j) sup = std::max(sup, std::abs(f[j]));
      lhs = sup * sup;
    } else {
      const double p = 2.0 * n / (n - 1.0);
      for (int j = 0; j < N; ++j) lhs_pow[j] = std::pow(std::abs(f[j]), p);
      lhs = std::pow(m.integrate(lhs_pow), (n - 1.0) / n);
    }
    const double rhs = m.integrate(grad2) + m.integrate(f2);
    if (rhs > 1e-14) sigma = std::max(sigma, lhs / rhs);
  }
  return sigma;
}

GeometryDigest geometry_digest(const RadialProfile& P, bool with_sobolev) {
  GeometryDigest g;
  g.diameter = diameter(P);
  g.spectrum = lambda1(P);
  g.poincare_proxy = g.spectrum.lambda1 > 0 ? 1.0 / g.spectrum.lambda1 : 0.0;
  if (with_sobolev) g.sobolev_proxy = sobolev_proxy(P);
  const double ric_lo = ricci_lower_bound(P);
  g.liyau_applicable = ric_lo >= 0.0;
  const double bound = M_PI * M_PI / (4.0 * g.diameter.value * g.diameter.value);
  g.liyau_ok = !g.liyau_applicable || g.spectrum.lambda1 >= bound;
  return g;
}

SprouseReport sprouse_check(const RadialProfile& P, double delta) {
  SprouseReport rep;
  rep.delta = delta;
  const int m2 = 2 * P.n;  // real dimension
  const auto T = compute_geometry(P);
  const auto meas = radial_measure(P.scheme(), P.n, T.derivs);
  std::vector<double> integrand(T.frames.size());
  for (size_t j = 0; j < T.frames.size(); ++j)
    integrand[j] = std::max(0.0, (m2 - 1.0) - T.frames[j].min_ricci_eig());
  rep.integral = meas.average(integrand);
  rep.threshold = epsilon0(P.n);
  rep.hypothesis_met = ricci_lower_bound(P) >= -1.0;
  rep.below_threshold = rep.integral < rep.threshold;
  rep.asserts_bound = rep.hypothesis_met && rep.below_threshold;
  rep.diameter = diameter(P).value;
  rep.diameter_ok = !rep.asserts_bound || rep.diameter < M_PI + delta;
  return rep;
}

}  // namespace krf
