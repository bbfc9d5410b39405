#include "krf/stability.hpp"

#include <cmath>
#include <numeric>

#include "krf/curvature.hpp"
#include "krf/errors.hpp"
#include "krf/functionals.hpp"

namespace krf {

double epsilon0_maximizer(int n) {
  const double m = 2.0 * n;
  return 2.0 * m / (m - 1.0);
}

double epsilon0(int n) {
  if (n < 1) throw ConfigError("epsilon0 needs n >= 1");
  const int m = 2 * n;
  const double Nstar = epsilon0_maximizer(n);
  const double Cm = std::pow(2.0, m - 1);
  return (Nstar - 2.0) / (8.0 * Cm * std::pow(Nstar, m));
}

StabilityBudget time_budget(double delta, double Lambda, double c_n, int n) {
  if (!(delta > 0.0) || delta > 1.0) throw ConfigError("delta must lie in (0, 1]");
  if (!(Lambda > 0.0)) throw ConfigError("Lambda must be positive");
  if (!(c_n > 0.0)) throw ConfigError("c_n must be positive");
  StabilityBudget b;
  b.n = n;
  b.delta = delta;
  b.Lambda = Lambda;
  b.c_n = c_n;
  b.eps0 = epsilon0(n);
  b.T6_primary = delta / ((delta + Lambda * c_n) * Lambda);
  b.T6_alt = std::pow(1.0 / Lambda, 2 * n) * delta * b.eps0 * b.eps0;
  b.T = std::min(b.T6_primary, b.T6_alt) / 6.0;
  return b;
}

double epsilon_budget(double delta, double Lambda, int n, double c_n) {
  const auto b = time_budget(delta, Lambda, c_n, n);
  const double bound1 = std::pow(1.0 / Lambda, 2 * n) * delta * b.eps0 * b.eps0;
  const double bound2 = 0.5 * b.eps0 * b.eps0 * b.T6_primary;
  return std::min(bound1, bound2);
}

StabilityBudget make_budget(int n, double delta, double Lambda, double c_n) {
  auto b = time_budget(delta, Lambda, c_n, n);
  b.eps = epsilon_budget(delta, Lambda, n, c_n);
  return b;
}

Rational::Rational(long long n_, long long d_) : num(n_), den(d_) {
  if (den == 0) throw ConfigError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}
std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational condition_star(int n, const Rational& c2_scale) {
  if (n < 2) throw DomainError("condition (*) pairing needs n >= 2");
  const long long np1 = n + 1;
  // c_1^2 . [omega]^{n-2} = (n+1)^2 (n+1)^{n-2} H^n
  // (2(n+1)/n) c_2 . [omega]^{n-2} = (2(n+1)/n)(n(n+1)/2) (n+1)^{n-2} H^n
  Rational c1sq(np1 * np1);
  Rational coeff(2 * np1, n);
  Rational c2(static_cast<long long>(n) * np1, 2);
  Rational combo = c1sq - coeff * c2 * c2_scale;
  long long pairing = 1;
  for (int i = 0; i < n - 2; ++i) pairing *= np1;
  return combo * Rational(pairing);
}

AdmissibilityCertificate admissibility_certificate(const RadialProfile& P,
                                                   const StabilityBudget& budget,
                                                   double E1_ref) {
  AdmissibilityCertificate c;
  c.ric_lower = ricci_lower_bound(P);
  c.ric_margin = c.ric_lower - (-1.0 + budget.delta);
  c.pass_ricci = c.ric_margin > 0.0;
  c.riem_sup = riem_sup_norm(P);
  c.riem_margin = budget.Lambda - c.riem_sup;
  c.pass_riem = c.riem_margin > 0.0;
  auto ref = fubini_study_profile(P.n, P.scheme_ptr());
  c.E1 = ek_energy(P.psi(), ref, 1);
  c.E1_margin = (E1_ref + budget.eps) - c.E1;
  c.pass_energy = c.E1_margin >= 0.0;
  c.pass = c.pass_ricci && c.pass_riem && c.pass_energy;
  return c;
}

double beta_invariant_estimate(std::span<const double> ric0_sup_series) {
  if (ric0_sup_series.empty()) throw ConfigError("beta estimate needs a series");
  double inf = ric0_sup_series[0];
  for (double v : ric0_sup_series) inf = std::min(inf, v);
  return inf;
}

}  // namespace krf
