#include "krf/flow.hpp"

#include <cmath>

#include "krf/analysis.hpp"
#include "krf/errors.hpp"
#include "krf/grid.hpp"
#include "krf/numerics.hpp"
#include "krf/quadrature.hpp"

namespace krf {

std::vector<double> initial_potential(const GridScheme& scheme, const InitialData& init) {
  const int N = scheme.size();
  std::vector<double> phi(N, 0.0);
  if (init.type == "fs") return phi;
  if (init.type != "fs_plus_perturbation")
    throw ConfigError("unknown initial data type: " + init.type);
  auto sech = [](double x) { return 1.0 / std::cosh(x); };
  if (init.shape == "sech") {
    for (int j = 0; j < N; ++j) phi[j] = init.amplitude * sech(scheme.s()[j]);
  } else if (init.shape == "gauss") {
    for (int j = 0; j < N; ++j)
      phi[j] = init.amplitude * std::exp(-0.25 * scheme.s()[j] * scheme.s()[j]);
  } else if (init.shape == "random_modes") {
    CounterRng rng(init.seed, 0x6d6f646573ull);
    for (int k = 1; k <= 4; ++k) {
      const double c = rng.next_symmetric() / k;
      const double d = 2.0 * rng.next_symmetric();
      for (int j = 0; j < N; ++j)
        phi[j] += init.amplitude * c * sech(scheme.s()[j] - d);
    }
  } else {
    throw ConfigError("unknown perturbation shape: " + init.shape);
  }
  return phi;
}

FlowEngine::FlowEngine(const FlowConfig& config)
    : config_(config),
      ref_(fubini_study_profile(config.n,
                                std::make_shared<GridScheme>(
                                    make_grid(config.grid_kind, config.L, config.nodes)))) {
  h_ = h_potential(ref_);
  const auto m = radial_measure(ref_);
  gauge_row_ = m.node_weight;
  gauge_volume_ = m.volume;
  phi_ = initial_potential(ref_.scheme(), config_.initial);
  // Start gauge-normalized; later projections then subtract only dt-sized
  // constants, which keeps their rounding footprint negligible.
  gauge_project(phi_, nullptr);
  // The initial metric must be admissible as a profile.
  RadialProfile start = current_profile();
  start.validate();
}

RadialProfile FlowEngine::current_profile() const {
  std::vector<double> F(ref_.F);
  for (size_t j = 0; j < F.size(); ++j) F[j] += phi_[j];
  return RadialProfile(config_.n, ref_.scheme_ptr(), std::move(F), ref_.tol_bc);
}

bool FlowEngine::rhs_into(const std::vector<double>& phi, std::vector<double>& out,
                          double* lambda_max) const {
  const auto& scheme = ref_.scheme();
  const int N = scheme.size();
  const int n = config_.n;
  const auto& dr = ref_.node_derivatives();
  std::vector<std::array<double, 4>> dth;
  scheme.theta_derivatives(phi, 2, dth);
  out.resize(N);
  double lam = 1.0;
  for (int j = 0; j < N; ++j) {
    const auto pd = pullback_derivatives(scheme.theta()[j], dth[j]);
    const double d1 = dr[j][0] + pd[0];
    const double d2 = dr[j][1] + pd[1];
    if (!(d1 > 0.0) || !(d2 > 0.0)) return false;
    out[j] = std::log(d2 / dr[j][1]) + (n - 1) * std::log(d1 / dr[j][0]) + phi[j] - h_[j];
    if (!std::isfinite(out[j])) return false;
    if (lambda_max) {
      // discrete symbol of the linearized operator in the chart variable:
      // d/ds = sigma d/dtheta gives the diffusive scale
      // (4 sigma^2/dtheta^2)/F'' per node.  The 1.5 factor covers the polar
      // advection inside the chart Laplacian, whose worst-case symbol is
      // pessimistic (pole parity) but which measurably shifts the stability
      // edge.
      const auto& th = scheme.theta();
      const double hl = j > 0 ? th[j] - th[j - 1] : th[1] - th[0];
      const double hr = j + 1 < N ? th[j + 1] - th[j] : hl;
      const double h = std::min(hl, hr);
      const double sg = sigma_of_theta(th[j]);
      lam = std::max(lam, 1.5 * 4.0 * sg * sg / (h * h * d2) +
                              2.0 * (n - 1) * sg / (h * d1) + 1.0);
    }
  }
  if (lambda_max) *lambda_max = lam;
  return true;
}

std::vector<double> FlowEngine::rhs(const std::vector<double>& phi) const {
  std::vector<double> out;
  if (!rhs_into(phi, out))
    throw DomainError("flow velocity undefined: potential leaves the Kahler cone");
  return out;
}

void FlowEngine::gauge_project(std::vector<double>& phi,
                               std::vector<double>* rhs_adjust) const {
  if (!config_.gauge_projection) return;
  const double mean = compensated_dot(gauge_row_, phi) / gauge_volume_;
  for (auto& v : phi) v -= mean;
  // rhs(phi - c) = rhs(phi) - c: keep the cached velocity consistent.
  if (rhs_adjust)
    for (auto& v : *rhs_adjust) v -= mean;
}

double FlowEngine::base_dt() const {
  if (!k1_valid_) {
    if (!rhs_into(phi_, k1_cache_, &lambda_cache_))
      throw DomainError("flow state left the Kahler cone");
    k1_valid_ = true;
  }
  if (config_.dt_policy.kind == DtPolicy::Kind::fixed) return config_.dt_policy.dt;
  return config_.dt_policy.cfl * 2.78 / lambda_cache_;
}

double FlowEngine::advance(double dt_max) {
  const int N = static_cast<int>(phi_.size());
  double dt = std::min(dt_max, base_dt());  // also fills the k1 cache
  const std::vector<double>& k1 = k1_cache_;
  std::vector<double> k2, k3, k4, tmp(N), next(N), probe;
  double lam_probe = 0.0;
  for (int halving = 0; halving <= 20; ++halving) {
    bool ok = true;
    for (int j = 0; j < N; ++j) tmp[j] = phi_[j] + 0.5 * dt * k1[j];
    ok = rhs_into(tmp, k2);
    if (ok) {
      for (int j = 0; j < N; ++j) tmp[j] = phi_[j] + 0.5 * dt * k2[j];
      ok = rhs_into(tmp, k3);
    }
    if (ok) {
      for (int j = 0; j < N; ++j) tmp[j] = phi_[j] + dt * k3[j];
      ok = rhs_into(tmp, k4);
    }
    if (ok) {
      for (int j = 0; j < N; ++j)
        next[j] = phi_[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      // accept only if the new state is inside the cone with sane magnitude;
      // the probe doubles as the next step's k1
      ok = rhs_into(next, probe, &lam_probe);
      for (int j = 0; ok && j < N; ++j)
        if (!(std::abs(next[j]) < 1e6)) ok = false;
    }
    if (ok) {
      phi_ = next;
      gauge_project(phi_, &probe);
      k1_cache_ = probe;
      lambda_cache_ = lam_probe;
      k1_valid_ = true;
      t_ += dt;
      return dt;
    }
    dt *= 0.5;
  }
  throw StiffnessError(
      "time step underflow after 20 halvings at t = " + std::to_string(t_) +
      "; state max|phi| = " + std::to_string([&] {
        double m = 0.0;
        for (double v : phi_) m = std::max(m, std::abs(v));
        return m;
      }()));
}

void FlowEngine::restore(double t, std::vector<double> phi) {
  if (phi.size() != phi_.size()) throw ConfigError("checkpoint size mismatch");
  t_ = t;
  phi_ = std::move(phi);
  k1_valid_ = false;
}

SeriesRow FlowEngine::digest_row() {
  SeriesRow row;
  row.t = t_;
  auto P = current_profile();
  const auto T = compute_geometry(P);
  const auto meas = radial_measure(ref_.scheme(), config_.n, T.derivs);
  const int N = ref_.scheme().size();
  const int n = config_.n;

  std::vector<double> ric0sq(N), scsq(N), q0sq(N), lp(N);
  const double p_exp = n + 2.0;  // fixed p > n+1 for the L^p curvature track
  for (int j = 0; j < N; ++j) {
    const auto& f = T.frames[j];
    ric0sq[j] = f.ric0_norm * f.ric0_norm;
    const double r = f.scalar - n;
    scsq[j] = r * r;
    q0sq[j] = f.q0_norm * f.q0_norm;
    lp[j] = std::pow(f.riem_norm, p_exp);
    row.ric_min = j == 0 ? f.min_ricci_eig() : std::min(row.ric_min, f.min_ricci_eig());
    const double rmax = n == 1 ? f.ric_rad : std::max(f.ric_rad, f.ric_trans);
    row.ric_max = j == 0 ? rmax : std::max(row.ric_max, rmax);
    row.riem_sup = std::max(row.riem_sup, f.riem_norm);
    row.ric0_sup = std::max(row.ric0_sup, f.ric0_norm);
    row.q0_sup = std::max(row.q0_sup, f.q0_norm);
    row.phi_max = std::max(row.phi_max, std::abs(phi_[j]));
  }
  row.l2_ric0 = meas.average(ric0sq);
  row.l2_scalar = meas.average(scsq);
  row.l2_Q0 = meas.average(q0sq);
  row.lp_riem = meas.average(lp);

  row.E0 = ek_energy(phi_, ref_, 0);
  row.E1 = ek_energy(phi_, ref_, 1);
  row.dE1_formula = dek_dt_formula(phi_, rhs(phi_), ref_, 1).total;

  row.diameter = diameter(P).value;
  row.lambda1 = lambda1(P).lambda1;
  return row;
}

FlowState FlowEngine::state_snapshot() {
  FlowState st;
  st.t = t_;
  st.phi = phi_;
  auto P = current_profile();
  st.cache = compute_geometry(P).frames;
  double ric_min = st.cache.front().min_ricci_eig(), riem = 0.0;
  for (const auto& f : st.cache) {
    ric_min = std::min(ric_min, f.min_ricci_eig());
    riem = std::max(riem, f.riem_norm);
  }
  st.ric_above_minus1 = ric_min > -1.0;
  st.riem_below_2Lambda =
      !config_.has_budget || riem <= 2.0 * config_.budget.Lambda;
  return st;
}

FlowSeries run_flow(const FlowConfig& config) {
  FlowEngine engine(config);
  FlowSeries out;
  out.rows.push_back(engine.digest_row());
  const double cadence = config.cadence;
  if (!(cadence > 0.0)) throw ConfigError("cadence must be positive");
  const long ticks = std::lround(std::ceil(config.t_end / cadence - 1e-12));
  try {
    for (long m = 1; m <= ticks; ++m) {
      const double tick = std::min(m * cadence, config.t_end);
      while (engine.t() < tick - 1e-13) {
        engine.advance(tick - engine.t());
      }
      engine.restore(tick, std::vector<double>(engine.phi()));  // pin t exactly
      out.rows.push_back(engine.digest_row());
      if (config.stop_when_ric0_below > 0.0 &&
          out.rows.back().ric0_sup < config.stop_when_ric0_below)
        break;  // converged
    }
  } catch (const StiffnessError& e) {
    out.stiffness_failure = true;
    out.failure_message = e.what();
  }
  out.final_phi = engine.phi();
  out.final_t = engine.t();
  return out;
}

MetricFlow::MetricFlow(const RadialProfile& start, DtPolicy policy)
    : scheme_(start.scheme_ptr()), n_(start.n), policy_(policy) {
  const int N = scheme_->size();
  const auto& d = start.node_derivatives();
  const FsPotential fs(n_);
  u_.resize(N);
  v_.resize(N);
  u_fs_.resize(N);
  v_fs_.resize(N);
  for (int j = 0; j < N; ++j) {
    const double es = std::exp(-scheme_->s()[j]);
    u_[j] = d[j][1] * es;
    v_[j] = d[j][0] * es;
    const auto fd = fs.derivatives(scheme_->s()[j]);
    u_fs_[j] = fd[1] * es;
    v_fs_[j] = fd[0] * es;
  }
}

bool MetricFlow::rhs_into(const std::vector<double>& u, const std::vector<double>& v,
                          std::vector<double>& du, std::vector<double>& dv) const {
  const int N = scheme_->size();
  std::vector<double> x(N), y(N);
  for (int j = 0; j < N; ++j) {
    if (!(u[j] > 0.0) || !(v[j] > 0.0)) return false;
    x[j] = std::log(u[j] / u_fs_[j]);
    y[j] = std::log(v[j] / v_fs_[j]);
  }
  std::vector<std::array<double, 4>> dx, dy;
  scheme_->theta_derivatives(x, 2, dx);
  scheme_->theta_derivatives(y, 2, dy);
  du.resize(N);
  dv.resize(N);
  const FsPotential fs(n_);
  for (int j = 0; j < N; ++j) {
    const double theta = scheme_->theta()[j];
    const auto xs = pullback_derivatives(theta, dx[j]);
    const auto ys = pullback_derivatives(theta, dy[j]);
    const auto fd = fs.derivatives(scheme_->s()[j]);
    const double G1 = -fd[0] + xs[0] + (n_ - 1) * ys[0];
    const double G2 = -fd[1] + xs[1] + (n_ - 1) * ys[1];
    const double es = std::exp(-scheme_->s()[j]);
    du[j] = u[j] + G2 * es;
    dv[j] = v[j] + G1 * es;
  }
  return true;
}

double MetricFlow::advance(double dt_max) {
  const int N = scheme_->size();
  double dt = dt_max;
  if (policy_.kind == DtPolicy::Kind::adaptive) {
    // same stability heuristic as the potential stepper
    double lam_max = 1.0;
    const auto& th = scheme_->theta();
    for (int j = 0; j < N; ++j) {
      const double es = std::exp(scheme_->s()[j]);
      const double d2 = std::max(u_[j] * es, 1e-300);
      const double d1 = std::max(v_[j] * es, 1e-300);
      const double hl = j > 0 ? th[j] - th[j - 1] : th[1] - th[0];
      const double hr = j + 1 < N ? th[j + 1] - th[j] : hl;
      const double h = std::min(hl, hr);
      const double sg = sigma_of_theta(th[j]);
      lam_max = std::max(lam_max, 1.5 * 4.0 * sg * sg / (h * h * d2) +
                                      2.0 * (n_ - 1) * sg / (h * d1) + 1.0);
    }
    dt = std::min(dt, policy_.cfl * 2.78 / lam_max);
  } else {
    dt = std::min(dt, policy_.dt);
  }
  std::vector<double> k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, tu(N), tv(N);
  for (int halving = 0; halving <= 20; ++halving) {
    bool ok = rhs_into(u_, v_, k1u, k1v);
    auto stage = [&](const std::vector<double>& ku, const std::vector<double>& kv,
                     double c, std::vector<double>& ou, std::vector<double>& ov) {
      for (int j = 0; j < N; ++j) {
        tu[j] = u_[j] + c * dt * ku[j];
        tv[j] = v_[j] + c * dt * kv[j];
      }
      return rhs_into(tu, tv, ou, ov);
    };
    if (ok) ok = stage(k1u, k1v, 0.5, k2u, k2v);
    if (ok) ok = stage(k2u, k2v, 0.5, k3u, k3v);
    if (ok) ok = stage(k3u, k3v, 1.0, k4u, k4v);
    if (ok) {
      for (int j = 0; j < N; ++j) {
        tu[j] = u_[j] + dt / 6.0 * (k1u[j] + 2 * k2u[j] + 2 * k3u[j] + k4u[j]);
        tv[j] = v_[j] + dt / 6.0 * (k1v[j] + 2 * k2v[j] + 2 * k3v[j] + k4v[j]);
        if (!(tu[j] > 0.0) || !(tv[j] > 0.0)) ok = false;
      }
    }
    if (ok) {
      u_ = tu;
      v_ = tv;
      t_ += dt;
      return dt;
    }
    dt *= 0.5;
  }
  throw StiffnessError("metric-level stepper: time step underflow at t = " +
                       std::to_string(t_));
}

std::vector<double> MetricFlow::scalar_profile() const {
  const int N = scheme_->size();
  std::vector<double> x(N), y(N), R(N);
  for (int j = 0; j < N; ++j) {
    x[j] = std::log(u_[j] / u_fs_[j]);
    y[j] = std::log(v_[j] / v_fs_[j]);
  }
  std::vector<std::array<double, 4>> dx, dy;
  scheme_->theta_derivatives(x, 2, dx);
  scheme_->theta_derivatives(y, 2, dy);
  const FsPotential fs(n_);
  for (int j = 0; j < N; ++j) {
    const double theta = scheme_->theta()[j];
    const auto xs = pullback_derivatives(theta, dx[j]);
    const auto ys = pullback_derivatives(theta, dy[j]);
    const auto fd = fs.derivatives(scheme_->s()[j]);
    const double G1 = -fd[0] + xs[0] + (n_ - 1) * ys[0];
    const double G2 = -fd[1] + xs[1] + (n_ - 1) * ys[1];
    const double es = std::exp(-scheme_->s()[j]);
    R[j] = -G2 * es / u_[j] - (n_ - 1) * G1 * es / v_[j];
  }
  return R;
}

void MetricFlow::ricci_profiles(std::vector<double>& ric_rad,
                                std::vector<double>& ric_trans) const {
  const int N = scheme_->size();
  std::vector<double> x(N), y(N);
  for (int j = 0; j < N; ++j) {
    x[j] = std::log(u_[j] / u_fs_[j]);
    y[j] = std::log(v_[j] / v_fs_[j]);
  }
  std::vector<std::array<double, 4>> dx, dy;
  scheme_->theta_derivatives(x, 2, dx);
  scheme_->theta_derivatives(y, 2, dy);
  const FsPotential fs(n_);
  ric_rad.resize(N);
  ric_trans.resize(N);
  for (int j = 0; j < N; ++j) {
    const double theta = scheme_->theta()[j];
    const auto xs = pullback_derivatives(theta, dx[j]);
    const auto ys = pullback_derivatives(theta, dy[j]);
    const auto fd = fs.derivatives(scheme_->s()[j]);
    const double G1 = -fd[0] + xs[0] + (n_ - 1) * ys[0];
    const double G2 = -fd[1] + xs[1] + (n_ - 1) * ys[1];
    const double es = std::exp(-scheme_->s()[j]);
    ric_rad[j] = -G2 * es;   // coordinate-frame component
    ric_trans[j] = -G1 * es;
  }
}

}  // namespace krf
