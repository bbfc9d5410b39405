#include "krf/curvature.hpp"

#include <cmath>
#include <functional>

#include "krf/errors.hpp"
#include "krf/numerics.hpp"
#include "krf/parallel.hpp"

namespace krf {

double CurvatureFrame::expand(int i, int j, int k, int l) const {
  auto pair_value = [this](int p, int q) {
    if (p == 0 && q == 0) return 0.5 * r_rr;
    if (p == 0 || q == 0) return r_rt;
    return r_tt_cross;  // r_tt_same = 2 * r_tt_cross only for the space form
  };
  // For p = q > 0 the same-plane component need not be twice the cross-plane
  // one away from the space form, so handle the fully-repeated case first.
  if (i == j && k == l && i == k) return i == 0 ? r_rr : r_tt_same;
  double v = 0.0;
  if (i == j && k == l) v += pair_value(i, k);
  if (i == l && k == j) v += pair_value(i, k);
  return v;
}

CurvatureFrame curvature_from_derivatives(int n, double s, const Derivs4& d) {
  const double d1 = d[0], d2 = d[1], d3 = d[2], d4 = d[3];
  if (d1 <= 0.0 || d2 <= 0.0)
    throw DomainError("curvature evaluation on a non-positive metric at s = " +
                      std::to_string(s));
  CurvatureFrame f;
  f.s = s;
  f.n = n;
  const double es = std::exp(-s);
  f.metric_rad = d2 * es;
  f.metric_trans = d1 * es;

  // Unitary-frame components; e^{-2s} factors cancel against the frame
  // normalisation 1/(g_ii g_jj g_kk g_ll)^{1/2}.
  f.r_rr = (-d4 + 2.0 * d3 - d2 + (d3 - d2) * (d3 - d2) / d2) / (d2 * d2);
  f.r_rt = (-d3 + 2.0 * d2 - d1 + (d2 - d1) * (d2 - d1) / d1) / (d2 * d1);
  f.r_tt_same = 2.0 * (d1 - d2) / (d1 * d1);
  f.r_tt_cross = (d1 - d2) / (d1 * d1);

  f.ric_rad = f.r_rr + (n - 1) * f.r_rt;
  f.ric_trans = n >= 2 ? f.r_rt + f.r_tt_same + (n - 2) * f.r_tt_cross : 0.0;
  f.scalar = f.ric_rad + (n - 1) * f.ric_trans;

  const double c = 1.0 / (n + 1);
  const double q_rr = f.r_rr - 2.0 * c;
  const double q_rt = f.r_rt - c;
  const double q_ts = f.r_tt_same - 2.0 * c;
  const double q_tx = f.r_tt_cross - c;
  f.q0_norm = std::sqrt(q_rr * q_rr + 4.0 * (n - 1) * q_rt * q_rt +
                        (n - 1) * q_ts * q_ts + 2.0 * (n - 1) * (n - 2) * q_tx * q_tx);
  f.riem_norm = std::sqrt(f.r_rr * f.r_rr + 4.0 * (n - 1) * f.r_rt * f.r_rt +
                          (n - 1) * f.r_tt_same * f.r_tt_same +
                          2.0 * (n - 1) * (n - 2) * f.r_tt_cross * f.r_tt_cross);
  const double a = f.ric_rad - 1.0, b = f.ric_trans - 1.0;
  f.ric0_norm = std::sqrt(a * a + (n - 1) * b * b);
  return f;
}

GeometryTable compute_geometry(const RadialProfile& P) {
  const auto& scheme = P.scheme();
  const int N = scheme.size();
  const int n = P.n;
  GeometryTable T;
  T.derivs = P.node_derivatives();
  T.frames.resize(N);

  parallel_for(static_cast<size_t>(N), [&](size_t j) {
    T.frames[j] = curvature_from_derivatives(n, scheme.s()[j], T.derivs[j]);
  });

  // Potential route: G = log F'' + (n-1) log F' - n s differs from the
  // analytic FS value by smooth correction logs, which differentiate
  // accurately in the pole chart.
  const FsPotential fs(n);
  std::vector<double> x(N), y(N);
  for (int j = 0; j < N; ++j) {
    const auto fsd = fs.derivatives(scheme.s()[j]);
    x[j] = std::log(T.derivs[j][1] / fsd[1]);
    y[j] = std::log(T.derivs[j][0] / fsd[0]);
  }
  std::vector<std::array<double, 4>> dx, dy;
  scheme.theta_derivatives(x, 2, dx);
  scheme.theta_derivatives(y, 2, dy);
  T.G1.resize(N);
  T.G2.resize(N);
  for (int j = 0; j < N; ++j) {
    const double theta = scheme.theta()[j];
    const auto xs = pullback_derivatives(theta, dx[j]);
    const auto ys = pullback_derivatives(theta, dy[j]);
    const auto fsd = fs.derivatives(scheme.s()[j]);
    T.G1[j] = -fsd[0] + xs[0] + (n - 1) * ys[0];
    T.G2[j] = -fsd[1] + xs[1] + (n - 1) * ys[1];
    T.frames[j].ric_rad_potential = -T.G2[j] / T.derivs[j][1];
    T.frames[j].ric_trans_potential = n >= 2 ? -T.G1[j] / T.derivs[j][0] : 0.0;
  }
  return T;
}

CurvatureFrame curvature_at(const RadialProfile& P, double s) {
  auto f = curvature_from_derivatives(P.n, s, P.derivatives_at(s));
  // Potential-route values interpolated from the node tables.
  const auto T = compute_geometry(P);
  const auto& scheme = P.scheme();
  std::vector<double> g1(T.G1), g2(T.G2);
  double v1 = 0.0, v2 = 0.0;
  // G' + F_FS' and G'' + F_FS'' are smooth corrections; interpolate those.
  const FsPotential fs(P.n);
  for (int j = 0; j < scheme.size(); ++j) {
    const auto fsd = fs.derivatives(scheme.s()[j]);
    g1[j] += fsd[0];
    g2[j] += fsd[1];
  }
  scheme.theta_derivatives_at(g1, theta_of_s(s), 0, &v1, nullptr);
  scheme.theta_derivatives_at(g2, theta_of_s(s), 0, &v2, nullptr);
  const auto fsd = fs.derivatives(s);
  const auto d = P.derivatives_at(s);
  f.ric_rad_potential = -(v2 - fsd[1]) / d[1];
  f.ric_trans_potential = P.n >= 2 ? -(v1 - fsd[0]) / d[0] : 0.0;
  return f;
}

namespace {

// Node scan followed by a continuous local search around the extremal node;
// pure node sampling misses extrema falling between nodes by O(h^2), which
// matters for near-zero minima.
double refine_extremum(const RadialProfile& P, int arg, bool maximize,
                       const std::function<double(const CurvatureFrame&)>& value) {
  const auto& s = P.grid();
  const int N = static_cast<int>(s.size());
  const double lo = s[std::max(0, arg - 1)];
  const double hi = s[std::min(N - 1, arg + 1)];
  auto eval = [&](double x) {
    const double v = value(curvature_from_derivatives(P.n, x, P.derivatives_at(x)));
    return maximize ? v : -v;
  };
  const double x = golden_section_max(eval, lo, hi, 1e-12);
  const double v = eval(x);
  return maximize ? v : -v;
}

}  // namespace

double ricci_lower_bound(const RadialProfile& P) {
  const auto T = compute_geometry(P);
  int arg = 0;
  for (int j = 1; j < static_cast<int>(T.frames.size()); ++j)
    if (T.frames[j].min_ricci_eig() < T.frames[arg].min_ricci_eig()) arg = j;
  return refine_extremum(P, arg, false,
                         [](const CurvatureFrame& f) { return f.min_ricci_eig(); });
}

double riem_sup_norm(const RadialProfile& P) {
  const auto T = compute_geometry(P);
  int arg = 0;
  for (int j = 1; j < static_cast<int>(T.frames.size()); ++j)
    if (T.frames[j].riem_norm > T.frames[arg].riem_norm) arg = j;
  return refine_extremum(P, arg, true,
                         [](const CurvatureFrame& f) { return f.riem_norm; });
}

}  // namespace krf
