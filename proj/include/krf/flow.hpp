// Normalized Kahler-Ricci flow at the potential level,
//
//     dphi/dt = log(omega_phi^n / omega^n) + phi - h_omega,
//
// integrated with explicit RK4 and adaptive halving, plus the direct
// metric-level integrator used as a cross-check.  The reference metric is
// Fubini-Study on the configured grid; the evolving potential is gauge
// projected (its volume mean removed) after every accepted step, which
// removes the unstable constant direction without touching the metric or
// any energy value.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "krf/curvature.hpp"
#include "krf/functionals.hpp"
#include "krf/profile.hpp"
#include "krf/stability.hpp"

namespace krf {

struct DtPolicy {
  enum class Kind { adaptive, fixed };
  Kind kind = Kind::adaptive;
  double dt = 1e-4;  // base step for the fixed policy
  double cfl = 0.8;  // safety factor against the linearized stability limit
};

struct InitialData {
  std::string type = "fs";  // "fs" or "fs_plus_perturbation"
  double amplitude = 0.0;
  std::string shape = "sech";  // "sech" | "gauss" | "random_modes"
  uint64_t seed = 0;
};

struct FlowConfig {
  int n = 1;
  std::string grid_kind = "fs_arclength";
  double L = 12.0;
  int nodes = 256;
  InitialData initial;
  DtPolicy dt_policy;
  double t_end = 1.0;
  double cadence = 0.01;
  bool has_budget = false;
  StabilityBudget budget;
  double eps_n = 0.1;  // pointwise pinching threshold epsilon(n)
  bool gauge_projection = true;
  // terminate early once max|Ric - omega| stays below this level (0 = off)
  double stop_when_ric0_below = 0.0;
  uint64_t config_seed = 0;  // echoed into outputs
};

struct FlowState {
  double t = 0.0;
  std::vector<double> phi;
  std::vector<CurvatureFrame> cache;  // per-node frames, consistent with phi
  bool ric_above_minus1 = true;
  bool riem_below_2Lambda = true;
};

struct SeriesRow {
  double t = 0.0;
  // CSV columns (exact projection)
  double E0 = 0.0, E1 = 0.0, dE1_formula = 0.0;
  double l2_ric0 = 0.0, l2_scalar = 0.0, l2_Q0 = 0.0;
  double ric_min = 0.0, riem_sup = 0.0, diameter = 0.0, lambda1 = 0.0;
  // extra digest fields used by monitors and certificates
  double ric_max = 0.0, ric0_sup = 0.0, q0_sup = 0.0, lp_riem = 0.0, phi_max = 0.0;
};

struct FlowSeries {
  std::vector<SeriesRow> rows;
  std::vector<double> final_phi;
  double final_t = 0.0;
  bool stiffness_failure = false;
  std::string failure_message;
};

class FlowEngine {
 public:
  explicit FlowEngine(const FlowConfig& config);

  const FlowConfig& config() const { return config_; }
  const RadialProfile& reference() const { return ref_; }
  const GridScheme& scheme() const { return ref_.scheme(); }
  double t() const { return t_; }
  const std::vector<double>& phi() const { return phi_; }

  // Flow velocity at a given potential.  Throws DomainError off the cone.
  std::vector<double> rhs(const std::vector<double>& phi) const;

  // Stability-limited base step at the current state.
  double base_dt() const;

  // One accepted RK4 step of at most dt_max (halving on rejection, at most
  // 20 times).  Returns the step actually taken.
  double advance(double dt_max);

  // Restore from a checkpoint.
  void restore(double t, std::vector<double> phi);

  RadialProfile current_profile() const;
  SeriesRow digest_row();
  FlowState state_snapshot();

 private:
  FlowConfig config_;
  RadialProfile ref_;
  std::vector<double> h_;
  std::vector<double> gauge_row_;  // quadrature row of the reference measure
  double gauge_volume_ = 0.0;
  double t_ = 0.0;
  std::vector<double> phi_;
  // cache of rhs(phi_) and the stability estimate at the current state
  mutable std::vector<double> k1_cache_;
  mutable double lambda_cache_ = 0.0;
  mutable bool k1_valid_ = false;

  bool rhs_into(const std::vector<double>& phi, std::vector<double>& out,
                double* lambda_max = nullptr) const;
  void gauge_project(std::vector<double>& phi, std::vector<double>* rhs_adjust) const;
};

std::vector<double> initial_potential(const GridScheme& scheme, const InitialData& init);

FlowSeries run_flow(const FlowConfig& config);

// Metric-level cross-check integrator for d g / dt = g - Ric on the two
// coordinate eigenvalue profiles (g_rad, g_trans).
class MetricFlow {
 public:
  MetricFlow(const RadialProfile& start, DtPolicy policy = {});
  double t() const { return t_; }
  const std::vector<double>& g_rad() const { return u_; }
  const std::vector<double>& g_trans() const { return v_; }
  double advance(double dt_max);
  // Complex scalar curvature profile of the current metric.
  std::vector<double> scalar_profile() const;
  // Coordinate-frame Ricci components (radial, transverse) of the current metric.
  void ricci_profiles(std::vector<double>& ric_rad, std::vector<double>& ric_trans) const;

 private:
  std::shared_ptr<const GridScheme> scheme_;
  int n_;
  DtPolicy policy_;
  double t_ = 0.0;
  std::vector<double> u_, v_;        // metric coordinate eigenvalues
  std::vector<double> u_fs_, v_fs_;  // FS values for the smooth-log split
  bool rhs_into(const std::vector<double>& u, const std::vector<double>& v,
                std::vector<double>& du, std::vector<double>& dv) const;
};

}  // namespace krf
