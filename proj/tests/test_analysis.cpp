#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "krf/analysis.hpp"
#include "krf/curvature.hpp"
#include "krf/flow.hpp"
#include "krf/grid.hpp"

using namespace krf;
using namespace krf::testing;

TEST_CASE("FS diameter on CP^1 is pi") {
  auto P = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  auto D = diameter(P);
  CHECK(D.value == doctest::Approx(M_PI).epsilon(1e-6));
  CHECK(D.radial == doctest::Approx(M_PI).epsilon(1e-6));
}

TEST_CASE("FS diameter candidates coincide for n >= 2") {
  auto P = fubini_study_profile(2, fs_arclength_grid(12.0, 256));
  auto D = diameter(P);
  const double expect = M_PI * std::sqrt(1.5);
  CHECK(D.radial == doctest::Approx(expect).epsilon(1e-6));
  CHECK(D.divisor == doctest::Approx(expect).epsilon(1e-5));
  CHECK(D.circle_max == doctest::Approx(expect).epsilon(1e-5));
  CHECK(D.value == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("diameter scales like sqrt(c) under metric scaling") {
  // c g has potential c F, which leaves the anticanonical normalisation, so
  // the homothety is checked on the radial formula itself:
  // int sqrt(c F''/2) ds + tails = sqrt(c) (int sqrt(F''/2) ds + tails).
  auto base = perturbed_fs(1, 0.05).sample(12.0, 256);
  const auto& d = base.node_derivatives();
  const auto& scheme = base.scheme();
  auto radial_formula = [&](double c) {
    std::vector<double> integrand(d.size());
    for (size_t j = 0; j < d.size(); ++j) integrand[j] = std::sqrt(0.5 * c * d[j][1]);
    return scheme.integrate_s(integrand) + 2.0 * std::sqrt(0.5 * c * d.front()[1]) +
           2.0 * std::sqrt(0.5 * c * d.back()[1]);
  };
  CHECK(radial_formula(4.0) == doctest::Approx(2.0 * radial_formula(1.0)).epsilon(1e-10));
  CHECK(radial_formula(1.0) == doctest::Approx(diameter(base).radial).epsilon(1e-12));
}

TEST_CASE("diameter responds continuously to perturbations") {
  auto base = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  const double d0 = diameter(base).value;
  for (double amp : {0.01, 0.02, 0.05}) {
    auto P = perturbed_fs(1, amp).sample(12.0, 256);
    const double d = diameter(P).value;
    CHECK(std::abs(d - d0) <= 4.0 * amp);
    CHECK(std::abs(d - d0) > 0.0);
  }
}

TEST_CASE("lambda1 of FS CP^1 is 2 and matches a fine-grid solve") {
  auto P = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  auto sp = lambda1(P);
  CHECK(sp.lambda1 == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(sp.lambda1_invariant == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(sp.lambda1_k1 == doctest::Approx(2.0).epsilon(1e-3));
  // Li-Yau with D = pi: bound is 1/4, holds with slack.
  CHECK(sp.lambda1 >= M_PI * M_PI / (4.0 * M_PI * M_PI));
  auto Pf = fubini_study_profile(1, fs_arclength_grid(12.0, 512));
  CHECK(lambda1(Pf).lambda1 == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("lambda1 of FS is 2 in every dimension (invariant sector)") {
  for (int n : {2, 3}) {
    auto P = fubini_study_profile(n, fs_arclength_grid(12.0, 320));
    auto sp = lambda1(P);
    CHECK(sp.sector_bound_only);
    CHECK(sp.lambda1_invariant == doctest::Approx(2.0).epsilon(1e-3));
  }
}

TEST_CASE("lambda1 against doubled-resolution oracle on random profiles") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    auto prof = random_admissible(1, seed);
    auto coarse = prof.sample(12.0, 256);
    auto fine = prof.sample(12.0, 512);
    const double a = lambda1(coarse).lambda1;
    const double b = lambda1(fine).lambda1;
    CHECK(a == doctest::Approx(b).epsilon(1e-4));
  }
}

TEST_CASE("li-yau inequality holds for nonnegative ricci profiles") {
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    for (int n : {1, 2}) {
      auto P = random_admissible(n, seed).sample(12.0, 256);
      if (ricci_lower_bound(P) < 0.0) continue;
      auto g = geometry_digest(P, false);
      CHECK(g.liyau_applicable);
      CHECK(g.liyau_ok);
      CHECK(g.spectrum.lambda1 >=
            M_PI * M_PI / (4.0 * g.diameter.value * g.diameter.value));
    }
  }
}

TEST_CASE("sobolev proxy constant function value") {
  for (int n : {2, 3}) {
    auto P = fubini_study_profile(n, fs_arclength_grid(12.0, 200));
    auto m_vol = std::pow(n + 1.0, n) / n;
    // f = 1: lhs = V^{(n-1)/n}, rhs = V, so sigma >= V^{-1/n}.
    CHECK(sobolev_proxy(P) >= std::pow(m_vol, -1.0 / n) * (1.0 - 1e-10));
  }
}

TEST_CASE("sobolev proxy stable under refinement") {
  auto a = sobolev_proxy(fubini_study_profile(2, fs_arclength_grid(12.0, 128)));
  auto b = sobolev_proxy(fubini_study_profile(2, fs_arclength_grid(12.0, 256)));
  auto c = sobolev_proxy(fubini_study_profile(2, fs_arclength_grid(12.0, 512)));
  CHECK(std::abs(a - b) / b < 0.01);
  CHECK(std::abs(c - b) / b < 0.01);
}

TEST_CASE("sprouse criterion") {
  // FS: integrand (m-1) - Ric_- = 0, diameter pi < pi + delta.
  auto P = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  auto rep = sprouse_check(P, 0.3);
  CHECK(rep.hypothesis_met);
  CHECK(rep.integral < 1e-8);
  CHECK(rep.below_threshold);
  CHECK(rep.asserts_bound);
  CHECK(rep.diameter_ok);

  // small perturbation stays within budget
  auto Q = perturbed_fs(1, 0.002).sample(12.0, 256);
  auto rq = sprouse_check(Q, 0.3);
  CHECK(rq.asserts_bound);
  CHECK(rq.diameter_ok);

  // a profile violating Ric >= -1 must not assert anything: a short-wave
  // ripple dents the curvature hard while the metric stays positive
  auto base = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  bool found = false;
  for (double amp : {0.012, 0.017, 0.024, 0.03}) {
    std::vector<double> F(base.F);
    for (size_t j = 0; j < F.size(); ++j) {
      const double s = base.grid()[j];
      F[j] += amp * sech_bump(s, 1.0)[0] * std::cos(6.0 * theta_of_s(s));
    }
    RadialProfile bad(1, base.scheme_ptr(), std::move(F));
    if (!bad.is_valid()) continue;
    if (ricci_lower_bound(bad) < -1.0) {
      auto rb = sprouse_check(bad, 0.3);
      CHECK_FALSE(rb.hypothesis_met);
      CHECK_FALSE(rb.asserts_bound);
      found = true;
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("sobolev proxy stays bounded along a flow window") {
  FlowConfig cfg;
  cfg.n = 1;
  cfg.nodes = 192;
  cfg.t_end = 0.4;
  cfg.cadence = 0.1;
  cfg.initial = {"fs_plus_perturbation", 0.04, "sech", 2};
  FlowEngine engine(cfg);
  double lo = 1e300, hi = 0.0;
  for (double t : {0.0, 0.1, 0.2, 0.3, 0.4}) {
    while (engine.t() < t - 1e-13) engine.advance(t - engine.t());
    const double sigma = sobolev_proxy(engine.current_profile());
    lo = std::min(lo, sigma);
    hi = std::max(hi, sigma);
  }
  CHECK(hi / lo < 1.5);
}

TEST_CASE("geometry digest wiring") {
  auto P = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  auto g = geometry_digest(P);
  CHECK(g.poincare_proxy == doctest::Approx(1.0 / g.spectrum.lambda1));
  CHECK(g.sobolev_proxy > 0.0);
  CHECK(g.diameter.value > 0.0);
  CHECK(g.spectrum.lambda1 > 0.0);
}
