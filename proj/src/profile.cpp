#include "krf/profile.hpp"

#include <algorithm>
#include <cmath>

#include "krf/errors.hpp"
#include "krf/grid.hpp"
#include "krf/numerics.hpp"
#include "krf/stencil.hpp"

namespace krf {

GridScheme::GridScheme(std::vector<double> s) : s_(std::move(s)) {
  validate_grid(s_);
  const int N = size();
  theta_.resize(N);
  for (int j = 0; j < N; ++j) theta_[j] = theta_of_s(s_[j]);

  // Ghost nodes: even reflection of the chart angle through both poles.
  // A rotation-invariant smooth function satisfies psi(-theta) = psi(theta)
  // and psi(2*pi - theta) = psi(theta).
  ext_theta_.resize(N + 2 * kGhosts);
  ext_src_.resize(N + 2 * kGhosts);
  for (int g = 0; g < kGhosts; ++g) {
    const int src = kGhosts - 1 - g;  // ghosts: -theta[2], -theta[1], -theta[0]
    ext_theta_[g] = -theta_[src];
    ext_src_[g] = src;
  }
  for (int j = 0; j < N; ++j) {
    ext_theta_[kGhosts + j] = theta_[j];
    ext_src_[kGhosts + j] = j;
  }
  for (int g = 0; g < kGhosts; ++g) {
    const int src = N - 1 - g;
    ext_theta_[kGhosts + N + g] = 2.0 * M_PI - theta_[src];
    ext_src_[kGhosts + N + g] = src;
  }

  // Per-node derivative weights over the 7-point window around each node.
  wts_.resize(static_cast<size_t>(N) * kWindow);
  win_lo_.resize(N);
  for (int j = 0; j < N; ++j) {
    const int lo = j;  // ext index of window start = (j + kGhosts) - kGhosts
    win_lo_[j] = lo;
    auto w = fornberg_weights(theta_[j], std::span(ext_theta_).subspan(lo, kWindow), 4);
    for (int i = 0; i < kWindow; ++i)
      wts_[static_cast<size_t>(j) * kWindow + i] = {w[1][i], w[2][i], w[3][i], w[4][i]};
  }

  // Quadrature in theta (smooth there), scaled back by ds/dtheta = 2/sin.
  quad_s_ = composite_cubic_weights(theta_);
  for (int j = 0; j < N; ++j) quad_s_[j] *= 2.0 / std::sin(theta_[j]);
}

void GridScheme::fill_extended(std::span<const double> v, std::vector<double>& ext) const {
  ext.resize(ext_theta_.size());
  for (size_t i = 0; i < ext.size(); ++i) ext[i] = v[ext_src_[i]];
}

void GridScheme::theta_derivatives(std::span<const double> values, int max_order,
                                   std::vector<std::array<double, 4>>& out) const {
  const int N = size();
  out.assign(N, {0.0, 0.0, 0.0, 0.0});
  std::vector<double> ext;
  fill_extended(values, ext);
  for (int j = 0; j < N; ++j) {
    const double* w = &wts_[static_cast<size_t>(j) * kWindow][0];
    const double* v = &ext[win_lo_[j]];
    for (int k = 0; k < max_order; ++k) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += w[static_cast<size_t>(i) * 4 + k] * v[i];
      out[j][k] = acc;
    }
  }
}

void GridScheme::theta_derivatives_at(std::span<const double> values, double theta,
                                      int max_order, double* value0,
                                      std::array<double, 4>* derivs) const {
  std::vector<double> ext;
  fill_extended(values, ext);
  auto it = std::lower_bound(ext_theta_.begin(), ext_theta_.end(), theta);
  int idx = static_cast<int>(it - ext_theta_.begin());
  int lo = std::clamp(idx - kWindow / 2 - 1, 0, static_cast<int>(ext_theta_.size()) - kWindow);
  auto w = fornberg_weights(theta, std::span(ext_theta_).subspan(lo, kWindow), max_order);
  if (value0) {
    double acc = 0.0;
    for (int i = 0; i < kWindow; ++i) acc += w[0][i] * ext[lo + i];
    *value0 = acc;
  }
  if (derivs) {
    derivs->fill(0.0);
    for (int k = 1; k <= max_order; ++k) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += w[k][i] * ext[lo + i];
      (*derivs)[k - 1] = acc;
    }
  }
}

void GridScheme::theta_derivatives_multi(std::span<const double> values,
                                         std::span<const double> thetas, int max_order,
                                         std::vector<std::array<double, 5>>& out) const {
  std::vector<double> ext;
  fill_extended(values, ext);
  out.assign(thetas.size(), {});
  for (size_t q = 0; q < thetas.size(); ++q) {
    const double theta = thetas[q];
    auto it = std::lower_bound(ext_theta_.begin(), ext_theta_.end(), theta);
    int idx = static_cast<int>(it - ext_theta_.begin());
    int lo = std::clamp(idx - kWindow / 2 - 1, 0,
                        static_cast<int>(ext_theta_.size()) - kWindow);
    auto w = fornberg_weights(theta, std::span(ext_theta_).subspan(lo, kWindow), max_order);
    for (int k = 0; k <= max_order; ++k) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += w[k][i] * ext[lo + i];
      out[q][k] = acc;
    }
  }
}

double GridScheme::integrate_s(std::span<const double> f) const {
  KahanSum acc;
  for (int j = 0; j < size(); ++j) acc.add(quad_s_[j] * f[j]);
  return acc.value();
}

RadialProfile::RadialProfile(int n_, std::vector<double> grid, std::vector<double> F_,
                             double tol)
    : n(n_), F(std::move(F_)), tol_bc(tol),
      scheme_(std::make_shared<GridScheme>(std::move(grid))) {
  init();
}

RadialProfile::RadialProfile(int n_, std::shared_ptr<const GridScheme> scheme,
                             std::vector<double> F_, double tol)
    : n(n_), F(std::move(F_)), tol_bc(tol), scheme_(std::move(scheme)) {
  init();
}

void RadialProfile::init() {
  if (n < 1) throw ConfigError("complex dimension n must be >= 1");
  if (F.size() != static_cast<size_t>(scheme_->size()))
    throw ConfigError("profile value count does not match the grid");
  const FsPotential fs(n);
  psi_.resize(F.size());
  for (int j = 0; j < scheme_->size(); ++j) psi_[j] = F[j] - fs.value(scheme_->s()[j]);
  node_derivs_.clear();

  const auto& d = node_derivatives();
  const double s0 = scheme_->s_min(), sN = scheme_->s_max();
  boundary_model.a = d.front()[0] * std::exp(-s0);
  boundary_model.c_south = F.front() - d.front()[0];
  boundary_model.b = ((n + 1) - d.back()[0]) * std::exp(sN);
  boundary_model.c_north = F.back() - (n + 1) * sN - ((n + 1) - d.back()[0]);
}

const std::vector<Derivs4>& RadialProfile::node_derivatives() const {
  if (!node_derivs_.empty()) return node_derivs_;
  const int N = scheme_->size();
  std::vector<std::array<double, 4>> dpsi;
  scheme_->theta_derivatives(psi_, 4, dpsi);
  node_derivs_.resize(N);
  const FsPotential fs(n);
  for (int j = 0; j < N; ++j) {
    const auto fsd = fs.derivatives(scheme_->s()[j]);
    const auto pd = pullback_derivatives(scheme_->theta()[j], dpsi[j]);
    for (int k = 0; k < 4; ++k) node_derivs_[j][k] = fsd[k] + pd[k];
  }
  return node_derivs_;
}

double RadialProfile::F_at(double s) const {
  if (s < scheme_->s_min() - 1e-12 || s > scheme_->s_max() + 1e-12)
    throw DomainError("evaluation point outside grid span");
  double psi0 = 0.0;
  scheme_->theta_derivatives_at(psi_, theta_of_s(s), 0, &psi0, nullptr);
  return FsPotential(n).value(s) + psi0;
}

Derivs4 RadialProfile::derivatives_at(double s) const {
  if (s < scheme_->s_min() - 1e-12 || s > scheme_->s_max() + 1e-12)
    throw DomainError("evaluation point outside grid span");
  std::array<double, 4> dtheta{};
  scheme_->theta_derivatives_at(psi_, theta_of_s(s), 4, nullptr, &dtheta);
  const auto pd = pullback_derivatives(theta_of_s(s), dtheta);
  const auto fsd = FsPotential(n).derivatives(s);
  Derivs4 out;
  for (int k = 0; k < 4; ++k) out[k] = fsd[k] + pd[k];
  return out;
}

void RadialProfile::validate() const {
  const auto& d = node_derivatives();
  const int N = scheme_->size();
  for (int j = 0; j < N; ++j) {
    if (!std::isfinite(F[j])) throw DomainError("profile has non-finite values");
    if (d[j][0] <= 0.0)
      throw DomainError("metric positivity violated: F' <= 0 at s = " +
                        std::to_string(scheme_->s()[j]));
    if (d[j][1] <= 0.0)
      throw DomainError("metric positivity violated: F'' <= 0 at s = " +
                        std::to_string(scheme_->s()[j]));
  }
  // Boundary closure: at the cut ends F' must sit within the truncation
  // allowance of its compactified limits (0 south, n+1 north).
  const double allow_s = std::max(tol_bc, 4.0 * (n + 1) * std::exp(scheme_->s_min()));
  const double allow_n = std::max(tol_bc, 4.0 * (n + 1) * std::exp(-scheme_->s_max()));
  if (std::abs(d.front()[0]) > allow_s)
    throw DomainError("boundary closure violated at south end: F'(-L) = " +
                      std::to_string(d.front()[0]));
  if (std::abs(d.back()[0] - (n + 1)) > allow_n)
    throw DomainError("boundary closure violated at north end: F'(L) - (n+1) = " +
                      std::to_string(d.back()[0] - (n + 1)));
}

bool RadialProfile::is_valid() const {
  try {
    validate();
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

RadialProfile fubini_study_profile(int n, std::vector<double> grid) {
  return fubini_study_profile(n, std::make_shared<GridScheme>(std::move(grid)));
}

RadialProfile fubini_study_profile(int n, std::shared_ptr<const GridScheme> scheme) {
  if (n < 1) throw ConfigError("complex dimension n must be >= 1");
  const FsPotential fs(n);
  std::vector<double> F(scheme->size());
  for (int j = 0; j < scheme->size(); ++j) F[j] = fs.value(scheme->s()[j]);
  RadialProfile P(n, std::move(scheme), std::move(F));
  P.validate();
  return P;
}

std::pair<double, double> metric_at(const RadialProfile& P, double s) {
  const auto d = P.derivatives_at(s);
  const double es = std::exp(-s);
  const double radial = d[1] * es, transverse = d[0] * es;
  if (radial <= 0.0 || transverse <= 0.0)
    throw DomainError("metric positivity violated at s = " + std::to_string(s));
  return {radial, transverse};
}

MomentumProfile to_momentum(const RadialProfile& P) {
  const auto& d = P.node_derivatives();
  MomentumProfile M;
  M.n = P.n;
  M.tol_bc = P.tol_bc;
  const int N = static_cast<int>(d.size());
  M.tau_grid.resize(N);
  M.phi.resize(N);
  for (int j = 0; j < N; ++j) {
    M.tau_grid[j] = d[j][0];
    M.phi[j] = d[j][1];
  }
  for (int j = 0; j + 1 < N; ++j)
    if (!(M.tau_grid[j] < M.tau_grid[j + 1]))
      throw DomainError("convexity violation: momentum map F' is not increasing");
  M.anchor_index = N / 2;
  M.anchor_s = P.grid()[M.anchor_index];
  M.anchor_F = P.F[M.anchor_index];
  return M;
}

void MomentumProfile::validate() const {
  const int N = static_cast<int>(tau_grid.size());
  if (N < 16) throw ConfigError("momentum profile needs at least 16 nodes");
  for (int j = 0; j < N; ++j) {
    if (!(tau_grid[j] > 0.0 && tau_grid[j] < n + 1))
      throw DomainError("momentum coordinate outside (0, n+1)");
    if (!(phi[j] > 0.0)) throw DomainError("convexity violation: phi <= 0");
    if (j > 0 && !(tau_grid[j] > tau_grid[j - 1]))
      throw DomainError("momentum grid not increasing");
  }
  // Closure: phi(tau) = tau + O(tau^2) at the south end and
  // phi = (n+1-tau) + O((n+1-tau)^2) at the north end.
  const double t0 = tau_grid.front(), tN = (n + 1) - tau_grid.back();
  if (std::abs(phi.front() - t0) > std::max(tol_bc, 0.5 * t0))
    throw DomainError("boundary closure violated: phi(0) != 0 or phi'(0) != 1");
  if (std::abs(phi.back() - tN) > std::max(tol_bc, 0.5 * tN))
    throw DomainError("boundary closure violated: phi(n+1) != 0 or phi'(n+1) != -1");
}

RadialProfile from_momentum(const MomentumProfile& M) {
  M.validate();
  const int N = static_cast<int>(M.tau_grid.size());
  const double c = M.n + 1;
  // Work in the momentum-side chart angle: tau = (n+1) sin^2(angle/2).
  // Relative to the FS map, both s and F differ by corrections whose
  // angle-derivatives are smooth and vanish at the poles:
  //   d(s - 2 log tan(angle/2))/dangle = 2 (phi_FS - phi) / (phi sin(angle))
  // with phi_FS = tau (1 - tau/(n+1)), and dF picks up the factor tau.
  std::vector<double> ang(N), du(N), dv(N);
  for (int j = 0; j < N; ++j) {
    const double tau = M.tau_grid[j];
    ang[j] = 2.0 * std::asin(std::sqrt(tau / c));
    const double phi_fs = tau * (1.0 - tau / c);
    du[j] = 2.0 * (phi_fs - M.phi[j]) / (M.phi[j] * std::sin(ang[j]));
    dv[j] = tau * du[j];
  }
  // Ghost nodes by odd reflection through the poles keep the cells centered:
  // the integrands flip sign with sin(angle).
  constexpr int G = 3;
  constexpr int W = 6;
  std::vector<double> ea(N + 2 * G), edu(N + 2 * G), edv(N + 2 * G);
  for (int g = 0; g < G; ++g) {
    const int src = G - 1 - g;
    ea[g] = -ang[src];
    edu[g] = -du[src];
    edv[g] = -dv[src];
    const int srcN = N - 1 - g;
    ea[G + N + g] = 2.0 * M_PI - ang[srcN];
    edu[G + N + g] = -du[srcN];
    edv[G + N + g] = -dv[srcN];
  }
  for (int j = 0; j < N; ++j) {
    ea[G + j] = ang[j];
    edu[G + j] = du[j];
    edv[G + j] = dv[j];
  }
  std::vector<double> u(N, 0.0), v(N, 0.0);
  for (int j = 0; j + 1 < N; ++j) {
    const int lo = G + j - (W / 2 - 1);
    const auto wj = poly_cell_weights(&ea[lo], W, ang[j], ang[j + 1]);
    double iu = 0.0, iv = 0.0;
    for (int i = 0; i < W; ++i) {
      iu += wj[i] * edu[lo + i];
      iv += wj[i] * edv[lo + i];
    }
    u[j + 1] = u[j] + iu;
    v[j + 1] = v[j] + iv;
  }
  // Gauge fixed at the anchor; FS parts restored analytically.
  std::vector<double> s(N), Fv(N);
  const double u_anchor = M.anchor_s - 2.0 * std::log(std::tan(0.5 * ang[M.anchor_index]));
  const double v_anchor =
      M.anchor_F + 2.0 * c * std::log(std::cos(0.5 * ang[M.anchor_index]));
  for (int j = 0; j < N; ++j) {
    const double uj = u[j] - u[M.anchor_index] + u_anchor;
    const double vj = v[j] - v[M.anchor_index] + v_anchor;
    s[j] = 2.0 * std::log(std::tan(0.5 * ang[j])) + uj;
    Fv[j] = -2.0 * c * std::log(std::cos(0.5 * ang[j])) + vj;
  }
  return RadialProfile(M.n, std::move(s), std::move(Fv), M.tol_bc);
}

}  // namespace krf
