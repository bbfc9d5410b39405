// Explicit constants and certificates: the dimensional constant
// epsilon_0(n), the (delta, Lambda) time and energy budgets, the Chern-number
// condition on CP^n, and the admissibility certificate for the stability
// hypothesis set.
#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "krf/profile.hpp"

namespace krf {

// sup_{N > 2} (N - 2) / (8 C(m) N^m) with m = 2n and C(m) = 2^{m-1}
// (Euclidean sphere-area ratio).  Closed-form maximizer N* = 2m/(m-1);
// epsilon0(1) = 1/128.
double epsilon0(int n);
double epsilon0_maximizer(int n);  // N*

struct StabilityBudget {
  int n = 1;
  double delta = 0.0;
  double Lambda = 0.0;
  double c_n = 8.0;      // the unpinned universal constant; configurable
  double eps0 = 0.0;     // epsilon_0(n)
  double T6_primary = 0.0;  // delta / ((delta + Lambda c_n) Lambda)
  double T6_alt = 0.0;      // Lambda^{-2n} delta eps0^2
  double T = 0.0;           // min(T6_primary, T6_alt) / 6
  double eps = 0.0;         // energy slack epsilon(delta, Lambda)
};

// Both window formulas; T = min/6.  Throws ConfigError on nonpositive input.
StabilityBudget time_budget(double delta, double Lambda, double c_n, int n);

// min(Lambda^{-2n} delta eps0^2, eps0^2/2 * T6_primary).
double epsilon_budget(double delta, double Lambda, int n, double c_n = 8.0);

StabilityBudget make_budget(int n, double delta, double Lambda, double c_n = 8.0);

// Exact rational arithmetic for the Chern pairing.
struct Rational {
  long long num = 0;
  long long den = 1;
  Rational() = default;
  Rational(long long n_, long long d_ = 1);
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool is_zero() const { return num == 0; }
  int sign() const { return num > 0 ? 1 : (num < 0 ? -1 : 0); }
  double value() const { return static_cast<double>(num) / den; }
  std::string str() const;
};

// (c_1^2 - (2(n+1)/n) c2_scale c_2) . [omega]^{n-2} on CP^n with
// [omega] = c_1 = (n+1) H, c_2 = (n(n+1)/2) H^2, H^n = 1.  Zero on CP^n for
// the unscaled pairing; the scale probes the sign behaviour.
Rational condition_star(int n, const Rational& c2_scale = Rational(1));

struct AdmissibilityCertificate {
  double ric_lower = 0.0;
  double ric_margin = 0.0;   // ric_lower - (-1 + delta)
  double riem_sup = 0.0;
  double riem_margin = 0.0;  // Lambda - riem_sup
  double E1 = 0.0;
  double E1_margin = 0.0;    // (E1_ref + eps) - E1
  bool pass_ricci = false;
  bool pass_riem = false;
  bool pass_energy = false;
  bool pass = false;
};

// Checks Ric > -1 + delta, |Riem| < Lambda, E1 <= E1_ref + eps.  E1 is
// measured against the FS reference on the profile's own grid (the KE point
// of the class, taken as the energy reference by convention).
AdmissibilityCertificate admissibility_certificate(const RadialProfile& P,
                                                   const StabilityBudget& budget,
                                                   double E1_ref = 0.0);

// Upper bound on the beta invariant from a flow run: the infimum over the
// series of the max-node |Ric - omega|.
double beta_invariant_estimate(std::span<const double> ric0_sup_series);

}  // namespace krf
