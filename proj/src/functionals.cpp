#include "krf/functionals.hpp"

#include <cmath>

#include "krf/errors.hpp"
#include "krf/numerics.hpp"

namespace krf {

namespace {

// Eigenvalue pair of a diagonal radial (1,1)-form with multiplicity.
struct FormEig {
  double A = 0.0;  // radial (second potential derivative)
  double B = 0.0;  // transverse (first potential derivative)
  int mult = 0;
};

// (1/n) sum over forms taking the radial slot.
double wedge_density(std::span<const FormEig> forms, int n) {
  double total = 0.0;
  for (size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].mult == 0) continue;
    double term = forms[i].mult * forms[i].A;
    for (size_t j = 0; j < forms.size(); ++j) {
      int p = forms[j].mult - (i == j ? 1 : 0);
      for (int q = 0; q < p; ++q) term *= forms[j].B;
    }
    total += term;
  }
  return total / n;
}

struct MetricTables {
  RadialProfile profile;           // reference + phi
  std::vector<Derivs4> d;          // its derivatives
  std::vector<double> ricA, ricB;  // Ricci form pair (-G'', -G')
  std::vector<double> scalar;      // complex scalar curvature
};

MetricTables metric_tables(std::span<const double> phi, const RadialProfile& ref,
                           bool need_ricci) {
  const auto& scheme = ref.scheme();
  std::vector<double> F(ref.F);
  for (int j = 0; j < scheme.size(); ++j) F[j] += phi[j];
  MetricTables t{RadialProfile(ref.n, ref.scheme_ptr(), std::move(F), ref.tol_bc), {}, {}, {}, {}};
  t.d = t.profile.node_derivatives();
  for (const auto& dj : t.d)
    if (dj[0] <= 0.0 || dj[1] <= 0.0)
      throw DomainError("potential leaves the Kahler cone: omega_phi not positive");
  if (need_ricci) {
    auto G = compute_geometry(t.profile);
    const int N = scheme.size();
    t.ricA.resize(N);
    t.ricB.resize(N);
    t.scalar.resize(N);
    for (int j = 0; j < N; ++j) {
      t.ricA[j] = -G.G2[j];
      t.ricB[j] = -G.G1[j];
      t.scalar[j] = G.frames[j].scalar;
    }
  }
  return t;
}

// \int f * density ds with exponential tails (rate n south, 1 north), the
// decay of every volume-type density of the class.
double integrate_density(const GridScheme& scheme, int n, std::span<const double> f,
                         std::span<const double> density) {
  KahanSum acc;
  for (int j = 0; j < scheme.size(); ++j) acc.add(scheme.quad_s()[j] * f[j] * density[j]);
  acc.add(f.front() * density.front() / n);
  acc.add(f.back() * density.back());
  return acc.value();
}

std::vector<double> phidot_gradient(const GridScheme& scheme, std::span<const double> phidot) {
  std::vector<std::array<double, 4>> dth;
  scheme.theta_derivatives(phidot, 1, dth);
  std::vector<double> out(scheme.size());
  for (int j = 0; j < scheme.size(); ++j)
    out[j] = sigma_of_theta(scheme.theta()[j]) * dth[j][0];
  return out;
}

}  // namespace

void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  if (m < 4) throw ConfigError("path quadrature needs at least 4 nodes");
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_m over [-1, 1], Chebyshev initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[m - 1 - i] = 0.5 * (1.0 + x);
    weights[m - 1 - i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
}

std::vector<double> h_potential(const RadialProfile& ref) {
  const auto& scheme = ref.scheme();
  const auto& d = ref.node_derivatives();
  const int N = scheme.size();
  const int n = ref.n;
  std::vector<double> h(N), expo(N);
  for (int j = 0; j < N; ++j) {
    const double G = std::log(d[j][1]) + (n - 1) * std::log(d[j][0]) - n * scheme.s()[j];
    h[j] = -(G + ref.F[j]);
    expo[j] = std::exp(n * scheme.s()[j] - ref.F[j]);  // e^{-G-F} w = e^{ns-F}
  }
  const auto m = radial_measure(scheme, n, d);
  const double integral = integrate_with_exp_tails(scheme, expo, n, 1.0);
  if (!(integral > 0.0) || !std::isfinite(integral))
    throw NumericalError("h_potential normalisation integral failed");
  const double c = std::log(m.volume / integral);
  for (int j = 0; j < N; ++j) h[j] += c;
  return h;
}

double ek0_energy(std::span<const double> phi, const RadialProfile& ref, int k) {
  const int n = ref.n;
  if (k < 0 || k > n) throw ConfigError("E_k needs 0 <= k <= n");
  const auto& scheme = ref.scheme();
  const int N = scheme.size();
  const auto t = metric_tables(phi, ref, true);
  const auto& dr = ref.node_derivatives();
  const auto h = h_potential(ref);
  const auto mref = radial_measure(ref);

  // reference Ricci pair for the constant c_k
  auto Gref = compute_geometry(ref);

  std::vector<double> integrand(N), density(N), cden(N);
  for (int j = 0; j < N; ++j) {
    const double logratio = std::log(t.d[j][1] / dr[j][1]) +
                            (n - 1) * std::log(t.d[j][0] / dr[j][0]);
    integrand[j] = logratio - h[j];
    double D = 0.0, Dc = 0.0;
    for (int i = 0; i <= k; ++i) {
      const FormEig f1[] = {{t.ricA[j], t.ricB[j], i},
                            {dr[j][1], dr[j][0], k - i},
                            {t.d[j][1], t.d[j][0], n - k}};
      D += wedge_density(f1, n);
      const FormEig f2[] = {{-Gref.G2[j], -Gref.G1[j], i}, {dr[j][1], dr[j][0], n - i}};
      Dc += wedge_density(f2, n);
    }
    density[j] = D;
    cden[j] = Dc;
  }
  const double main = integrate_density(scheme, n, integrand, density) / mref.volume;
  const double ck = integrate_density(scheme, n, h, cden) / mref.volume;
  return main + ck;
}

double jk_energy(std::span<const double> phi, const RadialProfile& ref, int k,
                 const PathSpec& path) {
  const int n = ref.n;
  if (k < 0 || k > n) throw ConfigError("J_k needs 0 <= k <= n");
  if (k == n) return 0.0;
  const auto& scheme = ref.scheme();
  const int N = scheme.size();
  const auto& dr = ref.node_derivatives();
  const auto mref = radial_measure(ref);

  std::vector<double> tq, wq;
  gauss_legendre_01(path.quadrature_nodes, tq, wq);

  KahanSum J;
  std::vector<double> phit(N), phidot(N), diff(N), ones(N, 1.0);
  for (int q = 0; q < path.quadrature_nodes; ++q) {
    double tval = tq[q], speed = 1.0;
    if (path.kind == PathSpec::Kind::reparam) {
      tval = std::pow(tq[q], path.power);
      speed = path.power * std::pow(tq[q], path.power - 1.0);
    }
    for (int j = 0; j < N; ++j) {
      phit[j] = tval * phi[j];
      phidot[j] = speed * phi[j];
    }
    MetricTables t = [&] {
      try {
        return metric_tables(phit, ref, false);
      } catch (const DomainError&) {
        throw DomainError(
            "path positivity failure inside J_k; use more nodes or another path");
      }
    }();
    for (int j = 0; j < N; ++j) {
      const double w_t = t.d[j][1] * std::pow(t.d[j][0], n - 1);
      const FormEig mixed[] = {{dr[j][1], dr[j][0], k + 1},
                               {t.d[j][1], t.d[j][0], n - k - 1}};
      diff[j] = phidot[j] * (w_t - wedge_density(mixed, n));
    }
    J.add(-wq[q] * (n - k) / mref.volume * integrate_density(scheme, n, ones, diff));
  }
  return J.value();
}

double ek_energy(std::span<const double> phi, const RadialProfile& ref, int k,
                 const PathSpec& path) {
  return ek0_energy(phi, ref, k) - jk_energy(phi, ref, k, path);
}

DerivativeSplit dek_dt_formula(std::span<const double> phi, std::span<const double> phidot,
                               const RadialProfile& ref, int k) {
  const int n = ref.n;
  if (k < 0 || k > n) throw ConfigError("derivative formula needs 0 <= k <= n");
  const auto& scheme = ref.scheme();
  const int N = scheme.size();
  const auto t = metric_tables(phi, ref, true);
  const auto mref = radial_measure(ref);

  // phidot derivatives (smooth function on the manifold)
  std::vector<std::array<double, 4>> dth;
  scheme.theta_derivatives(phidot, 2, dth);
  std::vector<double> pd1(N), pd2(N), lap(N);
  for (int j = 0; j < N; ++j) {
    const auto ds = pullback_derivatives(scheme.theta()[j], dth[j]);
    pd1[j] = ds[0];
    pd2[j] = ds[1];
    lap[j] = pd2[j] / t.d[j][1] + (n - 1) * pd1[j] / t.d[j][0];
  }

  DerivativeSplit out;
  std::vector<double> ones(N, 1.0), tmp(N);

  // trace term
  for (int j = 0; j < N; ++j) {
    const FormEig f[] = {{t.ricA[j], t.ricB[j], k}, {t.d[j][1], t.d[j][0], n - k}};
    tmp[j] = lap[j] * wedge_density(f, n);
  }
  out.term_trace = (k + 1.0) / mref.volume * integrate_density(scheme, n, ones, tmp);

  // mixed term
  if (k < n) {
    for (int j = 0; j < N; ++j) {
      const FormEig f[] = {{t.ricA[j], t.ricB[j], k + 1}, {t.d[j][1], t.d[j][0], n - k - 1}};
      const double w_phi = t.d[j][1] * std::pow(t.d[j][0], n - 1);
      tmp[j] = phidot[j] * (wedge_density(f, n) - w_phi);
    }
    out.term_mixed =
        -(n - k) / mref.volume * integrate_density(scheme, n, ones, tmp);
  }
  out.total = out.term_trace + out.term_mixed;

  if (k == 1) {
    for (int j = 0; j < N; ++j) {
      const double r = n - t.scalar[j];
      tmp[j] = r * r * t.d[j][1] * std::pow(t.d[j][0], n - 1);
    }
    out.scalar_part =
        -2.0 / (n * mref.volume) * integrate_density(scheme, n, ones, tmp);
    if (n >= 2) {
      // i d(pd) ^ dbar(pd) has pair (pd1^2, 0); gradient-type integrands
      // vanish quadratically at the poles, so no tail terms.
      for (int j = 0; j < N; ++j) {
        const double XB = t.ricB[j] + t.d[j][0];
        tmp[j] = pd1[j] * pd1[j] * XB * std::pow(t.d[j][0], n - 2) / n;
      }
      out.gradient_part = -(n - 1.0) / mref.volume * scheme.integrate_s(tmp);
    }
  }
  return out;
}

double e0_variation(std::span<const double> phi, std::span<const double> phidot,
                    const RadialProfile& ref) {
  const int n = ref.n;
  const auto& scheme = ref.scheme();
  const auto t = metric_tables(phi, ref, false);
  const auto mref = radial_measure(ref);
  const auto pd1 = phidot_gradient(scheme, phidot);
  std::vector<double> tmp(scheme.size());
  for (int j = 0; j < scheme.size(); ++j)
    tmp[j] = pd1[j] * pd1[j] * std::pow(t.d[j][0], n - 1);
  return -scheme.integrate_s(tmp) / mref.volume;
}

EnergyReport l2_pinching_report(std::span<const double> phi, const RadialProfile& ref) {
  EnergyReport rep;
  const int n = ref.n;
  const auto& scheme = ref.scheme();
  const int N = scheme.size();
  std::vector<double> F(ref.F);
  for (int j = 0; j < N; ++j) F[j] += phi[j];
  RadialProfile P(n, ref.scheme_ptr(), std::move(F), ref.tol_bc);
  const auto G = compute_geometry(P);
  const auto m = radial_measure(scheme, n, G.derivs);
  std::vector<double> ric0(N), sc(N), q0(N);
  for (int j = 0; j < N; ++j) {
    ric0[j] = G.frames[j].ric0_norm * G.frames[j].ric0_norm;
    const double r = G.frames[j].scalar - n;
    sc[j] = r * r;
    q0[j] = G.frames[j].q0_norm * G.frames[j].q0_norm;
  }
  rep.l2_ric0 = m.average(ric0);
  rep.l2_scalar = m.average(sc);
  rep.l2_Q0 = m.average(q0);
  const double floor = 1e-14;
  rep.identity_rel_error = std::abs(rep.l2_ric0 - rep.l2_scalar) /
                           std::max({rep.l2_ric0, rep.l2_scalar, floor});
  rep.identity_ok = rep.identity_rel_error < 1e-6 ||
                    std::max(rep.l2_ric0, rep.l2_scalar) < 1e-12;
  return rep;
}

EnergyReport energy_report(std::span<const double> phi, std::span<const double> phidot,
                           const RadialProfile& ref, bool full_ek_table) {
  EnergyReport rep = l2_pinching_report(phi, ref);
  rep.E0 = ek_energy(phi, ref, 0);
  rep.E1 = ek_energy(phi, ref, 1);
  rep.dE1_dt_formula = dek_dt_formula(phi, phidot, ref, 1).total;
  if (full_ek_table) {
    rep.Ek.resize(ref.n + 1);
    rep.Jk.resize(ref.n + 1);
    for (int k = 0; k <= ref.n; ++k) {
      rep.Jk[k] = jk_energy(phi, ref, k);
      rep.Ek[k] = ek0_energy(phi, ref, k) - rep.Jk[k];
    }
  }
  return rep;
}

}  // namespace krf
