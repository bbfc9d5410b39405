#include "krf/monitors.hpp"

#include <algorithm>
#include <cmath>

#include "krf/errors.hpp"
#include "krf/numerics.hpp"

namespace krf {

namespace {

// Linear interpolation of a column at time t.
double column_at(const std::vector<SeriesRow>& series, double t,
                 double SeriesRow::* col) {
  if (t <= series.front().t) return series.front().*col;
  if (t >= series.back().t) return series.back().*col;
  for (size_t i = 1; i < series.size(); ++i) {
    if (series[i].t >= t) {
      const double t0 = series[i - 1].t, t1 = series[i].t;
      const double a = (t - t0) / std::max(t1 - t0, 1e-300);
      return series[i - 1].*col * (1.0 - a) + series[i].*col * a;
    }
  }
  return series.back().*col;
}

// max of a column over [t0, t1] (rows inside plus interpolated endpoints).
double column_max(const std::vector<SeriesRow>& series, double t0, double t1,
                  double SeriesRow::* col) {
  double m = std::max(column_at(series, t0, col), column_at(series, t1, col));
  for (const auto& r : series)
    if (r.t >= t0 && r.t <= t1) m = std::max(m, r.*col);
  return m;
}

// trapezoid integral of a column over [t0, t1] with endpoint interpolation.
double column_integral(const std::vector<SeriesRow>& series, double t0, double t1,
                       double SeriesRow::* col) {
  if (t1 <= t0) return 0.0;
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(t0, column_at(series, t0, col));
  for (const auto& r : series)
    if (r.t > t0 && r.t < t1) pts.emplace_back(r.t, r.*col);
  pts.emplace_back(t1, column_at(series, t1, col));
  KahanSum acc;
  for (size_t i = 1; i < pts.size(); ++i)
    acc.add(0.5 * (pts[i].second + pts[i - 1].second) * (pts[i].first - pts[i - 1].first));
  return acc.value();
}

}  // namespace

DoublingVerdict doubling_time_monitor(const std::vector<SeriesRow>& series, double Lambda) {
  if (series.size() < 2) throw ConfigError("doubling monitor needs at least two rows");
  DoublingVerdict v;
  // empirical quadratic-growth constant: max of (dM/dt)_+ / M^2
  for (size_t i = 1; i < series.size(); ++i) {
    const double dt = series[i].t - series[i - 1].t;
    if (dt <= 0) continue;
    const double rate = (series[i].riem_sup - series[i - 1].riem_sup) / dt;
    const double m2 = series[i - 1].riem_sup * series[i - 1].riem_sup;
    if (rate > 0 && m2 > 0) v.c_fit = std::max(v.c_fit, rate / m2);
  }
  const double horizon =
      v.c_fit > 0 ? 1.0 / (2.0 * v.c_fit * Lambda) : series.back().t;
  v.window_end = std::min(horizon, series.back().t);
  v.pass = true;
  for (const auto& r : series) {
    // the first 2*Lambda crossing is reported wherever it happens
    if (r.riem_sup > 2.0 * Lambda && v.first_violation_t < 0)
      v.first_violation_t = r.t;
    if (r.t > v.window_end + 1e-12) continue;
    v.max_riem_in_window = std::max(v.max_riem_in_window, r.riem_sup);
    if (r.riem_sup > 2.0 * Lambda) v.pass = false;
  }
  return v;
}

PinchingVerdict pinching_window_check(const std::vector<SeriesRow>& series,
                                      const StabilityBudget& budget, double eps_n,
                                      double E1_ref) {
  if (series.empty()) throw ConfigError("pinching check needs a series");
  PinchingVerdict v;
  v.eps_n = eps_n;
  const double T = budget.T;
  const double w6 = 6.0 * T;
  v.coverage_ok = series.back().t >= w6 - 1e-12;
  if (!v.coverage_ok) {
    v.failed_window = "coverage: series ends before 6T";
    return v;
  }
  v.energy_gate = series.front().E1 <= E1_ref + budget.eps + 1e-15;
  v.spacetime_l2 = column_integral(series, 0.0, w6, &SeriesRow::l2_ric0) / w6;
  v.spacetime_bound = 0.5 * budget.eps0 * budget.eps0;
  v.a_pass = v.spacetime_l2 <= v.spacetime_bound;

  v.ric0_sup_window = column_max(series, 2.0 * T, 6.0 * T, &SeriesRow::ric0_sup);
  v.b_pass = v.ric0_sup_window <= eps_n;
  v.q0_sup_window = column_max(series, 3.0 * T, 4.0 * T, &SeriesRow::q0_sup);
  v.c_pass = v.q0_sup_window <= eps_n;

  const double st = column_integral(series, 0.0, w6, &SeriesRow::l2_ric0);
  v.moser_ratio = st > 1e-300
                      ? v.ric0_sup_window * v.ric0_sup_window / st
                      : 0.0;
  v.pass = v.a_pass && v.b_pass && v.c_pass;
  if (!v.a_pass)
    v.failed_window = "space-time L2 bound on [0, 6T]";
  else if (!v.b_pass)
    v.failed_window = "pointwise Ricci pinching on [2T, 6T]";
  else if (!v.c_pass)
    v.failed_window = "Q0 pinching on [3T, 4T]";
  return v;
}

ContinuationVerdict continuation_driver(const std::vector<SeriesRow>& series,
                                        const StabilityBudget& budget, double eps_n) {
  if (series.size() < 3) throw ConfigError("continuation needs a series");
  ContinuationVerdict v;
  const double t_start = std::min(6.0 * budget.T, series.back().t);

  // level of the L^p track held on the initial window (doubled as slack)
  double lp0 = 0.0;
  for (const auto& r : series)
    if (r.t <= t_start + 1e-12) lp0 = std::max(lp0, r.lp_riem);
  v.lp_bound = 2.0 * std::max(lp0, 1e-300);

  v.initial_ok = column_max(series, std::min(2.0 * budget.T, t_start), t_start,
                            &SeriesRow::ric0_sup) <= eps_n;

  v.reached_t = t_start;
  for (const auto& r : series) {
    if (r.t < t_start) continue;
    const bool ric_ok = r.ric_min > 1.0 - eps_n && r.ric_max < 1.0 + eps_n;
    const bool lp_ok = r.lp_riem <= v.lp_bound;
    if (!ric_ok || !lp_ok) {
      v.violated = !ric_ok ? "Ricci pinching 1 - eps < Ric < 1 + eps"
                           : "L^p curvature bound";
      v.violation_t = r.t;
      return v;
    }
    v.reached_t = r.t;
  }
  v.reached_end = true;
  v.final_ric0_sup = series.back().ric0_sup;

  // monotone tail of max|Ric - omega| over the last half
  v.tail_monotone = true;
  const double t_half = 0.5 * series.back().t;
  double prev = -1.0;
  for (const auto& r : series) {
    if (r.t < t_half) continue;
    if (prev >= 0 && r.ric0_sup > prev * (1.0 + 1e-6) + 1e-12) v.tail_monotone = false;
    prev = r.ric0_sup;
  }
  return v;
}

ConvergenceVerdict convergence_detector(const std::vector<SeriesRow>& series,
                                        double rate_min, double degenerate_tol) {
  ConvergenceVerdict v;
  if (series.size() < 50) return v;  // inconclusive: not enough samples
  const size_t tail_start = series.size() - std::max<size_t>(50, series.size() * 3 / 5);
  std::vector<double> ts, logs;
  double tail_max = 0.0;
  for (size_t i = tail_start; i < series.size(); ++i) {
    tail_max = std::max(tail_max, series[i].ric0_sup);
    if (series[i].ric0_sup > 1e-300) {
      ts.push_back(series[i].t);
      logs.push_back(std::log(series[i].ric0_sup));
    }
  }
  v.window_t0 = series[tail_start].t;
  v.window_t1 = series.back().t;
  if (tail_max < degenerate_tol) {
    v.kind = ConvergenceVerdict::Kind::degenerate;
    v.rate = 0.0;
    v.r2 = 1.0;
    return v;
  }
  if (ts.size() < 50) return v;
  const auto fit = fit_line(ts, logs);
  v.r2 = fit.r2;
  if (fit.slope < -rate_min && fit.r2 >= 0.99) {
    v.kind = ConvergenceVerdict::Kind::positive;
    v.rate = -fit.slope;
  }
  return v;
}

}  // namespace krf
