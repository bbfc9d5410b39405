// Windowed monitors over a flow series: the curvature doubling window, the
// pinching-recovery windows, the open-closed continuation scan, and the
// exponential-convergence detector.
#pragma once

#include <string>
#include <vector>

#include "krf/flow.hpp"
#include "krf/stability.hpp"

namespace krf {

struct DoublingVerdict {
  double c_fit = 0.0;        // empirical quadratic-growth constant of riem_sup
  double window_end = 0.0;   // min(series end, 1 / (2 c_fit Lambda))
  double max_riem_in_window = 0.0;
  bool pass = false;         // riem_sup <= 2 Lambda on the window
  double first_violation_t = -1.0;
};

DoublingVerdict doubling_time_monitor(const std::vector<SeriesRow>& series, double Lambda);

struct PinchingVerdict {
  bool coverage_ok = false;    // series reaches 6T
  bool energy_gate = false;    // E1(0) <= E1_ref + eps
  double spacetime_l2 = 0.0;   // (1/6T) int_0^{6T} l2_ric0 dt
  double spacetime_bound = 0.0;  // eps0^2 / 2
  bool a_pass = false;
  double ric0_sup_window = 0.0;  // max over [2T, 6T]
  bool b_pass = false;
  double q0_sup_window = 0.0;    // max over [3T, 4T]
  bool c_pass = false;
  double moser_ratio = 0.0;      // sup^2 over window / space-time integral
  double eps_n = 0.0;
  std::string failed_window;     // which window failed, when any
  bool pass = false;
};

PinchingVerdict pinching_window_check(const std::vector<SeriesRow>& series,
                                      const StabilityBudget& budget, double eps_n,
                                      double E1_ref = 0.0);

struct ContinuationVerdict {
  bool initial_ok = false;      // pinching established on [2T, 6T]
  double reached_t = 0.0;       // window extended this far
  bool reached_end = false;
  std::string violated;         // which inequality broke, if any
  double violation_t = -1.0;
  double lp_bound = 0.0;        // the held L^p level
  double final_ric0_sup = 0.0;
  bool tail_monotone = false;   // max|Ric - omega| nonincreasing on the tail
};

ContinuationVerdict continuation_driver(const std::vector<SeriesRow>& series,
                                        const StabilityBudget& budget, double eps_n);

struct ConvergenceVerdict {
  enum class Kind { positive, degenerate, inconclusive };
  Kind kind = Kind::inconclusive;
  double rate = 0.0;  // positive decay rate of max|Ric - omega|
  double r2 = 0.0;
  double window_t0 = 0.0, window_t1 = 0.0;
  bool positive() const { return kind != Kind::inconclusive; }
};

ConvergenceVerdict convergence_detector(const std::vector<SeriesRow>& series,
                                        double rate_min = 0.05,
                                        double degenerate_tol = 1e-6);

}  // namespace krf
