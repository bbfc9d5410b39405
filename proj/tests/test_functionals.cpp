#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "krf/curvature.hpp"
#include "krf/errors.hpp"
#include "krf/functionals.hpp"
#include "krf/grid.hpp"
#include "krf/quadrature.hpp"

using namespace krf;
using namespace krf::testing;

namespace {

std::vector<double> sample_phi(const RadialProfile& ref, double amp, double shift = 0.0) {
  std::vector<double> phi(ref.grid().size());
  for (size_t j = 0; j < phi.size(); ++j) phi[j] = sech_bump(ref.grid()[j] - shift, amp)[0];
  return phi;
}

// Flow velocity log(w_phi / w) + phi - h at the current state.
std::vector<double> flow_velocity(std::span<const double> phi, const RadialProfile& ref) {
  const auto h = h_potential(ref);
  const size_t N = ref.F.size();
  std::vector<double> F(ref.F);
  for (size_t j = 0; j < N; ++j) F[j] += phi[j];
  RadialProfile P(ref.n, ref.scheme_ptr(), std::move(F), ref.tol_bc);
  const auto& dp = P.node_derivatives();
  const auto& dr = ref.node_derivatives();
  std::vector<double> v(N);
  for (size_t j = 0; j < N; ++j)
    v[j] = std::log(dp[j][1] / dr[j][1]) + (ref.n - 1) * std::log(dp[j][0] / dr[j][0]) +
           phi[j] - h[j];
  return v;
}

}  // namespace

TEST_CASE("volume matches the class volume (n+1)^n / n") {
  for (int n : {1, 2, 3}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    auto m = radial_measure(ref);
    CHECK(m.volume == doctest::Approx(std::pow(n + 1.0, n) / n).epsilon(1e-7));
    // and for a perturbed metric in the same class
    auto P = perturbed_fs(n, 0.05).sample(12.0, 256);
    auto mp = radial_measure(P);
    CHECK(mp.volume == doctest::Approx(m.volume).epsilon(1e-7));
  }
}

TEST_CASE("h potential vanishes at the KE reference") {
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    auto h = h_potential(ref);
    for (double v : h) CHECK(std::abs(v) < 1e-8);
  }
}

TEST_CASE("h potential is normalized and matches Ric - omega") {
  auto prof = perturbed_fs(1, 0.05);
  auto ref = prof.sample(12.0, 256);
  auto h = h_potential(ref);
  // normalisation \int (e^h - 1) w ds = 0
  auto m = radial_measure(ref);
  std::vector<double> e(h.size());
  for (size_t j = 0; j < h.size(); ++j) e[j] = std::exp(h[j]) - 1.0;
  CHECK(std::abs(m.integrate(e)) / m.volume < 1e-10);
  // i ddbar h = Ric - omega radially: h'' = (ric_rad - 1) F''
  const auto& scheme = ref.scheme();
  std::vector<std::array<double, 4>> dth;
  scheme.theta_derivatives(h, 2, dth);
  auto T = compute_geometry(ref);
  for (int j = 0; j < scheme.size(); j += 11) {
    const auto ds = pullback_derivatives(scheme.theta()[j], dth[j]);
    const double expect = (T.frames[j].ric_rad - 1.0) * T.derivs[j][1];
    CHECK(ds[1] == doctest::Approx(expect).scale(1.0).epsilon(1e-6));
  }
}

TEST_CASE("E_k^0 vanishes at the reference and under constants") {
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 200));
    std::vector<double> zero(ref.grid().size(), 0.0), consts(ref.grid().size(), 0.37);
    for (int k = 0; k <= n; ++k) {
      CHECK(std::abs(ek0_energy(zero, ref, k)) < 1e-10);
      CHECK(ek0_energy(consts, ref, k) ==
            doctest::Approx(ek0_energy(zero, ref, k)).epsilon(1e-10));
    }
  }
}

TEST_CASE("E_1^0 against a refined independent-quadrature oracle") {
  // Oracle: analytic derivatives on a fine uniform theta grid, Simpson rule.
  const int n = 1;
  auto prof = perturbed_fs(n, 0.05);
  auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
  auto phi = sample_phi(ref, 0.05);

  // Integrate over (0, pi) out to s = +-28 so the metric tails beyond the
  // production grid's cut are included (they enter at the 1e-6 level).
  const int M = 16385;
  const double t0 = theta_of_s(-28.0), t1 = theta_of_s(28.0);
  const double ht = (t1 - t0) / (M - 1);
  FsPotential fs(n);
  std::vector<double> vals(M);
  for (int i = 0; i < M; ++i) {
    const double theta = t0 + i * ht;
    const double s = s_of_theta(theta);
    const auto d = prof.derivs(s);
    const auto dref = fs.derivatives(s);
    const double d1 = d[0], d2 = d[1], d3 = d[2], d4 = d[3];
    const double G2 = d4 / d2 - (d3 / d2) * (d3 / d2) +
                      (n - 1) * (d3 * d1 - d2 * d2) / (d1 * d1);
    const double logratio = std::log(d2 / dref[1]) + (n - 1) * std::log(d1 / dref[0]);
    // k = 1 density: (Ric + omega_ref) wedge omega_phi^{n-1} for n = 1
    const double density = -G2 + dref[1];
    vals[i] = logratio * density * (2.0 / std::sin(theta));  // ds/dtheta factor
  }
  double oracle = 0.0;
  for (int i = 0; i + 2 < M; i += 2)
    oracle += ht / 3.0 * (vals[i] + 4.0 * vals[i + 1] + vals[i + 2]);
  oracle /= std::pow(n + 1.0, n) / n;  // volume normalisation

  CHECK(ek0_energy(phi, ref, 1) == doctest::Approx(oracle).scale(1.0).epsilon(1e-6));
}

TEST_CASE("J_k path independence and endpoint oracle") {
  auto ref = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  auto phi = sample_phi(ref, 0.05);
  std::vector<double> zero(phi.size(), 0.0);
  CHECK(std::abs(jk_energy(zero, ref, 0)) < 1e-14);

  PathSpec linear;
  PathSpec quad{PathSpec::Kind::reparam, 2.0, 24};
  const double j_lin = jk_energy(phi, ref, 0, linear);
  const double j_rep = jk_energy(phi, ref, 0, quad);
  CHECK(j_lin == doctest::Approx(j_rep).epsilon(1e-8));

  // endpoint reduction at n = 1, k = 0: J_0 = (1/2V) \int phi'^2 ds with
  // V = 2, and \int sech^2 tanh^2 = 2/3 gives 1/2400 for amplitude 0.05.
  CHECK(j_lin == doctest::Approx(1.0 / 2400.0).epsilon(1e-6));
}

TEST_CASE("path independence across k and dimensions") {
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 200));
    for (uint64_t seed : {1u, 5u, 9u, 13u, 17u}) {
      auto prof = random_admissible(n, seed);
      std::vector<double> phi(ref.grid().size());
      for (size_t j = 0; j < phi.size(); ++j)
        phi[j] = prof.F(ref.grid()[j]) - FsPotential(n).value(ref.grid()[j]);
      for (int k = 0; k < n; ++k) {
        PathSpec quad{PathSpec::Kind::reparam, 2.0, 24};
        CHECK(jk_energy(phi, ref, k) ==
              doctest::Approx(jk_energy(phi, ref, k, quad)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("E_k invariant under constant shifts") {
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 200));
    auto phi = sample_phi(ref, 0.04, 0.7);
    auto shifted = phi;
    for (auto& v : shifted) v += 0.61;
    for (int k = 0; k <= n; ++k) {
      const double a = ek_energy(phi, ref, k);
      const double b = ek_energy(shifted, ref, k);
      CHECK(b == doctest::Approx(a).scale(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("E_1 of perturbed FS against refined-grid value") {
  const int n = 1;
  auto prof = perturbed_fs(n, 0.05);
  auto coarse_ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
  auto fine_ref = fubini_study_profile(n, fs_arclength_grid(12.0, 768));
  auto phic = sample_phi(coarse_ref, 0.05);
  auto phif = sample_phi(fine_ref, 0.05);
  CHECK(ek_energy(phic, coarse_ref, 1) ==
        doctest::Approx(ek_energy(phif, fine_ref, 1)).scale(1e-3).epsilon(1e-6));
}

TEST_CASE("quadrature convergence of E_1 is at least second order") {
  // A rough two-bump profile keeps truncation error visible at 24-96 nodes;
  // smooth fixtures are already at the noise floor by 32.
  const int n = 1;
  auto phi_of = [](const RadialProfile& ref) {
    std::vector<double> phi(ref.grid().size());
    for (size_t j = 0; j < phi.size(); ++j)
      phi[j] = sech_bump(ref.grid()[j] - 1.5, 0.2)[0] +
               sech_bump(ref.grid()[j] + 1.1, 0.15)[0];
    return phi;
  };
  auto reference = fubini_study_profile(n, fs_arclength_grid(12.0, 1024));
  const double e_ref = ek_energy(phi_of(reference), reference, 1);
  std::array<int, 3> sizes = {24, 48, 96};
  std::array<double, 3> err{};
  for (size_t i = 0; i < sizes.size(); ++i) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, sizes[i]));
    err[i] = std::abs(ek_energy(phi_of(ref), ref, 1) - e_ref);
  }
  CHECK(err[0] / err[1] >= 4.0);
  CHECK(err[1] / err[2] >= 4.0);
}

TEST_CASE("derivative formula at k = 0 reduces to the gradient integral") {
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    auto phi = sample_phi(ref, 0.05, -0.4);
    auto pd = flow_velocity(phi, ref);
    const auto split = dek_dt_formula(phi, pd, ref, 0);
    const double grad = e0_variation(phi, pd, ref);
    CHECK(split.total == doctest::Approx(grad).scale(1e-3).epsilon(1e-6));
    CHECK(grad <= 1e-12);
  }
}

TEST_CASE("k = 1 flow split adds up to the formula") {
  for (int n : {1, 2, 3}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    auto phi = sample_phi(ref, 0.04, 0.8);
    auto pd = flow_velocity(phi, ref);
    const auto split = dek_dt_formula(phi, pd, ref, 1);
    CHECK(split.total ==
          doctest::Approx(split.scalar_part + split.gradient_part).scale(1e-3).epsilon(2e-5));
    CHECK(split.total <= 1e-10);  // decreasing along the flow
  }
}

TEST_CASE("derivative formula at FS with k = 1") {
  // At the fixed point R = n makes the trace term a pure divergence and
  // Ric = omega kills the mixed term, so the formula vanishes for any
  // variation direction.
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    std::vector<double> zero(ref.grid().size(), 0.0), pd(ref.grid().size());
    for (size_t j = 0; j < pd.size(); ++j) pd[j] = sech_bump(ref.grid()[j], 0.3)[0];
    auto s = dek_dt_formula(zero, pd, ref, 1);
    CHECK(std::abs(s.scalar_part) < 1e-10);
    CHECK(std::abs(s.term_trace) < 1e-8);
    CHECK(std::abs(s.term_mixed) < 1e-8);
    CHECK(std::abs(s.total) < 1e-8);
  }
}

TEST_CASE("l2 pinching report") {
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    std::vector<double> zero(ref.grid().size(), 0.0);
    auto rep0 = l2_pinching_report(zero, ref);
    CHECK(rep0.l2_ric0 < 1e-10);
    CHECK(rep0.l2_scalar < 1e-10);
    CHECK(rep0.l2_Q0 < 1e-10);
    CHECK(rep0.identity_ok);

    auto phi = sample_phi(ref, 0.05);
    auto rep = l2_pinching_report(phi, ref);
    CHECK(rep.identity_ok);
    CHECK(rep.l2_ric0 == doctest::Approx(rep.l2_scalar).epsilon(1e-6));
    if (n == 1) CHECK(rep.l2_Q0 == doctest::Approx(rep.l2_ric0).epsilon(1e-8));
  }
}

TEST_CASE("canonical-class identity on random admissible profiles") {
  for (int n : {1, 2}) {
    auto ref = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    for (uint64_t seed = 1; seed <= 10; ++seed) {
      auto prof = random_admissible(n, seed);
      std::vector<double> phi(ref.grid().size());
      for (size_t j = 0; j < phi.size(); ++j)
        phi[j] = prof.F(ref.grid()[j]) - FsPotential(n).value(ref.grid()[j]);
      auto rep = l2_pinching_report(phi, ref);
      CHECK(rep.l2_ric0 == doctest::Approx(rep.l2_scalar).epsilon(1e-6));
    }
  }
}

TEST_CASE("positivity violations raise domain errors") {
  auto ref = fubini_study_profile(1, fs_arclength_grid(12.0, 128));
  std::vector<double> bad(ref.grid().size());
  for (size_t j = 0; j < bad.size(); ++j)
    bad[j] = -0.9 * std::exp(-ref.grid()[j] * ref.grid()[j]);
  CHECK_THROWS_AS(ek0_energy(bad, ref, 1), DomainError);
  CHECK_THROWS_AS(jk_energy(bad, ref, 0), DomainError);
  PathSpec tiny;
  tiny.quadrature_nodes = 2;
  std::vector<double> ok(ref.grid().size(), 0.0);
  CHECK_THROWS_AS(jk_energy(ok, ref, 0, tiny), ConfigError);
}
