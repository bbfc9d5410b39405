#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "krf/curvature.hpp"
#include "krf/grid.hpp"
#include "oracles.hpp"

using namespace krf;
using namespace krf::testing;

TEST_CASE("fubini-study is the space form") {
  for (int n : {1, 2, 3}) {
    auto P = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    auto T = compute_geometry(P);
    for (const auto& f : T.frames) {
      CHECK(f.q0_norm < 1e-6);
      CHECK(f.ric_rad == doctest::Approx(1.0).epsilon(1e-6));
      if (n >= 2) CHECK(f.ric_trans == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(f.scalar == doctest::Approx(static_cast<double>(n)).epsilon(1e-6));
    }
  }
}

TEST_CASE("FS n=1 radial component equals g^2") {
  auto P = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  for (double s : {-3.0, 0.0, 1.7}) {
    auto f = curvature_at(P, s);
    const double coord_rrrr = f.expand(0, 0, 0, 0) * f.metric_rad * f.metric_rad;
    CHECK(coord_rrrr == doctest::Approx(f.metric_rad * f.metric_rad).epsilon(1e-9));
  }
}

TEST_CASE("curvature matches the ambient-coordinate oracle") {
  for (int n : {1, 2}) {
    auto prof = perturbed_fs(n, 0.05);
    auto P = prof.sample(12.0, 256);
    AmbientMetric oracle(prof);
    for (double s : {-1.2, 0.0, 0.8, 2.5}) {
      auto f = curvature_at(P, s);
      const double h = 0.008 * (1.0 + std::exp(0.5 * s));
      auto coord = [&](int i, int j, int k, int l) {
        double gi = (i == 0) ? f.metric_rad : f.metric_trans;
        double gj = (j == 0) ? f.metric_rad : f.metric_trans;
        double gk = (k == 0) ? f.metric_rad : f.metric_trans;
        double gl = (l == 0) ? f.metric_rad : f.metric_trans;
        return f.expand(i, j, k, l) * std::sqrt(gi * gj * gk * gl);
      };
      // radial-radial
      auto rrrr = oracle.curvature_component(s, 0, 0, 0, 0, h);
      CHECK(std::abs(rrrr.imag()) < 1e-7);
      CHECK(coord(0, 0, 0, 0) == doctest::Approx(rrrr.real()).scale(1.0).epsilon(2e-5));
      if (n >= 2) {
        auto rtta = oracle.curvature_component(s, 0, 0, 1, 1, h);
        CHECK(coord(0, 0, 1, 1) == doctest::Approx(rtta.real()).scale(1.0).epsilon(2e-5));
        auto tt = oracle.curvature_component(s, 1, 1, 1, 1, h);
        CHECK(coord(1, 1, 1, 1) == doctest::Approx(tt.real()).scale(1.0).epsilon(2e-5));
        auto mixed = oracle.curvature_component(s, 1, 0, 0, 1, h);
        CHECK(coord(1, 0, 0, 1) == doctest::Approx(mixed.real()).scale(1.0).epsilon(2e-5));
        // a component that must vanish by symmetry
        auto zero = oracle.curvature_component(s, 0, 1, 0, 0, h);
        CHECK(std::abs(zero) < 1e-6);
      }
    }
  }
  // cross-plane component needs n = 3
  {
    auto prof = perturbed_fs(3, 0.05);
    auto P = prof.sample(12.0, 200);
    AmbientMetric oracle(prof);
    auto f = curvature_at(P, 0.4);
    const double h = 0.02;
    auto cross = oracle.curvature_component(0.4, 1, 1, 2, 2, h);
    const double expect = f.r_tt_cross * f.metric_trans * f.metric_trans;
    CHECK(expect == doctest::Approx(cross.real()).scale(1.0).epsilon(2e-5));
    auto swap = oracle.curvature_component(0.4, 1, 2, 2, 1, h);
    CHECK(expect == doctest::Approx(swap.real()).scale(1.0).epsilon(2e-5));
  }
}

TEST_CASE("rank-4 trace agrees with the log-determinant route") {
  // At the exactly-representable KE point the agreement is far below 1e-8.
  // On generic double-stored profiles the fourth-derivative stencil sits at
  // its roundoff floor near 256 nodes, so the family-wide guard is 1e-5.
  for (int n : {1, 2, 3}) {
    auto FS = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    auto TF = compute_geometry(FS);
    for (const auto& f : TF.frames) {
      CHECK(f.ric_rad == doctest::Approx(f.ric_rad_potential).epsilon(1e-8));
      if (n >= 2)
        CHECK(f.ric_trans == doctest::Approx(f.ric_trans_potential).epsilon(1e-8));
    }
    for (uint64_t seed : {1u, 2u, 3u, 4u}) {
      auto P = random_admissible(n, seed).sample(12.0, 256);
      auto T = compute_geometry(P);
      for (const auto& f : T.frames) {
        CHECK(f.ric_rad == doctest::Approx(f.ric_rad_potential).epsilon(1e-5));
        if (n >= 2)
          CHECK(f.ric_trans == doctest::Approx(f.ric_trans_potential).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("kahler symmetries of the expanded tensor") {
  auto P = random_admissible(3, 11).sample(12.0, 128);
  auto f = curvature_at(P, 0.9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          CHECK(f.expand(i, j, k, l) == doctest::Approx(f.expand(k, j, i, l)).epsilon(1e-14));
          CHECK(f.expand(i, j, k, l) == doctest::Approx(f.expand(i, l, k, j)).epsilon(1e-14));
        }
}

TEST_CASE("riemann norm equals the brute-force frame sum") {
  for (int n : {1, 2, 3, 4}) {
    auto P = random_admissible(n, 5).sample(12.0, 128);
    auto f = curvature_at(P, -0.7);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double v = f.expand(i, j, k, l);
            acc += v * v;
          }
    CHECK(std::sqrt(acc) == doctest::Approx(f.riem_norm).epsilon(1e-12));
  }
}

TEST_CASE("FS riemann norm has the space-form value") {
  // With Q0 = 0 the tensor is (g g + g g)/(n+1); summing squared frame
  // components over all index tuples gives 2n/(n+1) for the norm squared.
  for (int n : {1, 2, 3}) {
    auto P = fubini_study_profile(n, fs_arclength_grid(12.0, 256));
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double v = ((i == j && k == l) ? 1.0 : 0.0) + ((i == l && k == j) ? 1.0 : 0.0);
            acc += v * v / ((n + 1.0) * (n + 1.0));
          }
    CHECK(riem_sup_norm(P) == doctest::Approx(std::sqrt(acc)).epsilon(1e-8));
    CHECK(acc == doctest::Approx(2.0 * n / (n + 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("riem sup norm insensitive to the truncation width") {
  auto P12 = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  auto P16 = fubini_study_profile(1, fs_arclength_grid(16.0, 256));
  CHECK(std::abs(riem_sup_norm(P12) - riem_sup_norm(P16)) < 1e-8);
}

TEST_CASE("trace bound |R| <= c_norm(n) |Riem|") {
  for (int n : {1, 2, 3}) {
    auto P = random_admissible(n, 21).sample(12.0, 160);
    auto T = compute_geometry(P);
    for (const auto& f : T.frames) CHECK(std::abs(f.scalar) <= c_norm(n) * f.riem_norm + 1e-12);
  }
}

TEST_CASE("ricci lower bound") {
  auto P = fubini_study_profile(1, fs_arclength_grid(12.0, 256));
  CHECK(ricci_lower_bound(P) == doctest::Approx(1.0).epsilon(1e-6));
  // dense-grid oracle for a perturbed profile
  auto prof = perturbed_fs(1, 0.05);
  auto coarse = prof.sample(12.0, 256);
  auto fine = prof.sample(12.0, 512);
  CHECK(ricci_lower_bound(coarse) ==
        doctest::Approx(ricci_lower_bound(fine)).epsilon(1e-4));
}

TEST_CASE("riem sup of perturbed profile against refined oracle") {
  auto prof = perturbed_fs(2, 0.05);
  auto coarse = prof.sample(12.0, 256);
  auto fine = prof.sample(12.0, 512);
  CHECK(riem_sup_norm(coarse) == doctest::Approx(riem_sup_norm(fine)).epsilon(1e-4));
}

TEST_CASE("n=1 pointwise identity |Q0| = |Ric0|") {
  for (uint64_t seed : {3u, 9u}) {
    auto P = random_admissible(1, seed).sample(12.0, 256);
    auto T = compute_geometry(P);
    for (const auto& f : T.frames) {
      const double q2 = f.q0_norm * f.q0_norm, r2 = f.ric0_norm * f.ric0_norm;
      CHECK(q2 == doctest::Approx(r2).epsilon(1e-10));
    }
  }
}

TEST_CASE("small Q0 forces nearly equal ricci eigenvalues") {
  for (int n : {2, 3}) {
    auto P = random_admissible(n, 13).sample(12.0, 160);
    auto T = compute_geometry(P);
    for (const auto& f : T.frames)
      CHECK(std::abs(f.ric_rad - f.ric_trans) <= (2.0 * n + 2.0) * f.q0_norm + 1e-12);
  }
}

TEST_CASE("einstein defect shrinks at least second order under refinement") {
  auto prof = perturbed_fs(1, 0.4);  // rough enough that stencil error is visible
  double prev = 0.0;
  for (int N : {32, 64, 128}) {
    auto P = prof.sample(12.0, N);
    auto T = compute_geometry(P);
    // engine error = deviation from the analytically sampled curvature
    double err = 0.0;
    for (size_t j = 0; j < T.frames.size(); ++j) {
      auto exact = curvature_from_derivatives(1, P.grid()[j], prof.derivs(P.grid()[j]));
      err = std::max(err, std::abs(T.frames[j].ric_rad - exact.ric_rad));
    }
    if (prev > 0.0) CHECK(prev / err > 4.0);
    prev = err;
  }
}
