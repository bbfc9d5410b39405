#include "krf/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "krf/curvature.hpp"
#include "krf/errors.hpp"
#include "krf/numerics.hpp"
#include "krf/parallel.hpp"
#include "krf/stencil.hpp"

namespace krf {

namespace {
constexpr int kFine = 4096;  // uniform-theta lookup resolution

double wrap_pi(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}
}  // namespace

RevolutionSurface::RevolutionSurface(const RadialProfile& P) : scheme_(&P.scheme()) {
  if (P.n != 1) throw ConfigError("geodesic shooting is implemented for CP^1 only");
  const int N = scheme_->size();
  const auto& d = P.node_derivatives();
  G_.resize(kFine);
  dl_.resize(kFine);
  tau_.resize(kFine);
  // Sample the accurate interpolant once onto a fine uniform-theta table;
  // the inner loops then use linear lookups.
  std::vector<double> Gn(N), dln(N), taun(N);
  for (int j = 0; j < N; ++j) {
    Gn[j] = 2.0 * d[j][1];
    dln[j] = std::sqrt(0.5 * d[j][1]) * 2.0 / std::sin(scheme_->theta()[j]);
    taun[j] = d[j][0];
  }
  const double t0 = scheme_->theta().front(), t1 = scheme_->theta().back();
  for (int i = 0; i < kFine; ++i) {
    const double th = t0 + (t1 - t0) * i / (kFine - 1);
    double g, dl, ta;
    scheme_->theta_derivatives_at(Gn, th, 0, &g, nullptr);
    scheme_->theta_derivatives_at(dln, th, 0, &dl, nullptr);
    scheme_->theta_derivatives_at(taun, th, 0, &ta, nullptr);
    G_[i] = std::max(g, 1e-300);
    dl_[i] = dl;
    tau_[i] = ta;
  }
  cumlen_.assign(kFine, 0.0);
  const double h = (t1 - t0) / (kFine - 1);
  for (int i = 1; i < kFine; ++i)
    cumlen_[i] = cumlen_[i - 1] + 0.5 * h * (dl_[i - 1] + dl_[i]);
  tail_south_ = std::sqrt(2.0 * d.front()[1]);
  tail_north_ = std::sqrt(2.0 * d.back()[1]);
  total_volume_ = 2.0 * M_PI * 2.0;  // 2 pi (n+1)
}

double RevolutionSurface::interp(const std::vector<double>& table, double theta) const {
  const double t0 = scheme_->theta().front(), t1 = scheme_->theta().back();
  double x = (theta - t0) / (t1 - t0) * (kFine - 1);
  x = std::clamp(x, 0.0, static_cast<double>(kFine - 1));
  const int i = std::min(static_cast<int>(x), kFine - 2);
  const double frac = x - i;
  return table[i] * (1.0 - frac) + table[i + 1] * frac;
}

double RevolutionSurface::distance_from_south(double s) const {
  return tail_south_ + interp(cumlen_, theta_of_s(s));
}

double RevolutionSurface::distance_from_north(double s) const {
  return tail_north_ + (cumlen_.back() - interp(cumlen_, theta_of_s(s)));
}

double RevolutionSurface::s_at_south_distance(double dist) const {
  const double target = dist - tail_south_;
  auto it = std::lower_bound(cumlen_.begin(), cumlen_.end(), target);
  const int i = std::clamp(static_cast<int>(it - cumlen_.begin()), 1, kFine - 1);
  const double frac = (target - cumlen_[i - 1]) /
                      std::max(cumlen_[i] - cumlen_[i - 1], 1e-300);
  const double t0 = scheme_->theta().front(), t1 = scheme_->theta().back();
  const double th = t0 + (t1 - t0) * (i - 1 + std::clamp(frac, 0.0, 1.0)) / (kFine - 1);
  return s_of_theta(th);
}

double RevolutionSurface::s_at_north_distance(double dist) const {
  const double target = cumlen_.back() - (dist - tail_north_);
  auto it = std::lower_bound(cumlen_.begin(), cumlen_.end(), target);
  const int i = std::clamp(static_cast<int>(it - cumlen_.begin()), 1, kFine - 1);
  const double frac = (target - cumlen_[i - 1]) /
                      std::max(cumlen_[i] - cumlen_[i - 1], 1e-300);
  const double t0 = scheme_->theta().front(), t1 = scheme_->theta().back();
  const double th = t0 + (t1 - t0) * (i - 1 + std::clamp(frac, 0.0, 1.0)) / (kFine - 1);
  return s_of_theta(th);
}

double RevolutionSurface::cap_volume_south(double r) const {
  return 2.0 * M_PI * interp(tau_, theta_of_s(s_at_south_distance(r)));
}

double RevolutionSurface::cap_volume_north(double r) const {
  return 2.0 * M_PI * (2.0 - interp(tau_, theta_of_s(s_at_north_distance(r))));
}

double RevolutionSurface::sweep_alpha(double th_a, double th_b, double c) const {
  // theta = th_a + (th_b - th_a)(1 - cos v)/2 regularises the turning-point
  // square root: near tangency 1 - c^2/G vanishes linearly in theta, and
  // dtheta ~ v dv absorbs the 1/sqrt.
  const int cells = 160;
  const double half = 0.5 * (th_b - th_a);
  const double hv = M_PI / cells;
  KahanSum acc;
  for (int k = 0; k < cells; ++k) {
    for (double xi : {-0.5773502691896257, 0.5773502691896257}) {
      const double v = hv * (k + 0.5 + 0.5 * xi);
      const double th = th_a + half * (1.0 - std::cos(v));
      const double g = interp(G_, th);
      const double root = 1.0 - c * c / g;
      if (root <= 0.0) return std::numeric_limits<double>::infinity();
      acc.add(0.5 * hv * half * std::sin(v) * (c / g) * interp(dl_, th) /
              std::sqrt(root));
    }
  }
  return acc.value();
}

void RevolutionSurface::arc_integrals(double th_a, double th_b, double c,
                                      std::span<const double> f_fine, double* length,
                                      double* f_integral) const {
  const int cells = 160;
  const double half = 0.5 * (th_b - th_a);
  const double hv = M_PI / cells;
  const double t0 = scheme_->theta().front(), t1 = scheme_->theta().back();
  KahanSum len, fint;
  for (int k = 0; k < cells; ++k) {
    for (double xi : {-0.5773502691896257, 0.5773502691896257}) {
      const double v = hv * (k + 0.5 + 0.5 * xi);
      const double th = th_a + half * (1.0 - std::cos(v));
      const double g = interp(G_, th);
      const double root = std::max(1.0 - c * c / g, 1e-14);
      const double dl =
          0.5 * hv * half * std::sin(v) * interp(dl_, th) / std::sqrt(root);
      len.add(dl);
      if (!f_fine.empty()) {
        double xx = std::clamp((th - t0) / (t1 - t0) * (kFine - 1), 0.0,
                               static_cast<double>(kFine - 1));
        const int i = std::min(static_cast<int>(xx), kFine - 2);
        const double frac = xx - i;
        fint.add(dl * (f_fine[i] * (1.0 - frac) + f_fine[i + 1] * frac));
      }
    }
  }
  if (length) *length += len.value();
  if (f_integral) *f_integral += fint.value();
}

double RevolutionSurface::meridian_f(double th_a, double th_b, std::span<const double> f_fine) const {
  if (f_fine.empty()) return 0.0;
  double acc = 0.0, dummy = 0.0;
  arc_integrals(th_a, th_b, 0.0, f_fine, &dummy, &acc);
  return acc;
}

// Turning point below th (south side) or above (north): theta with G = c^2.
double RevolutionSurface::turning_theta(double c, bool south) const {
  const double t0 = scheme_->theta().front(), t1 = scheme_->theta().back();
  double lo = south ? t0 : M_PI / 2.0;
  double hi = south ? M_PI / 2.0 : t1;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const bool below = interp(G_, mid) < c * c;
    if (south == below)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

bool RevolutionSurface::connect(const SurfacePoint& x, const SurfacePoint& y,
                                double* length, double* f_integral,
                                std::span<const double> f_fine) const {
  SurfacePoint a = x, b = y;
  if (a.s > b.s) std::swap(a, b);
  const double th_a = theta_of_s(a.s), th_b = theta_of_s(b.s);
  const double target = std::abs(wrap_pi(b.alpha - a.alpha));
  const double t0 = scheme_->theta().front(), t1 = scheme_->theta().back();

  if (length) *length = 0.0;
  if (f_integral) *f_integral = 0.0;

  const double g_end = std::min(interp(G_, th_a), interp(G_, th_b));
  const double c_max = std::sqrt(g_end) * (1.0 - 1e-12);

  if (sweep_alpha(th_a, th_b, c_max) >= target) {
    // theta-monotone branch
    double lo = 0.0, hi = c_max;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sweep_alpha(th_a, th_b, mid) < target)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-12 * (1.0 + c_max)) break;
    }
    arc_integrals(th_a, th_b, 0.5 * (lo + hi), f_fine, length, f_integral);
    return true;
  }

  // Turning branch: the geodesic overshoots toward one pole, turns where
  // G = c^2, and comes back.  Swing grows as c decreases; in the c -> 0
  // limit the path runs through the pole itself.
  struct Candidate {
    bool ok = false;
    double len = 0.0, fint = 0.0;
  };
  auto solve_side = [&](bool south) {
    Candidate cand;
    const double edge = south ? t0 : t1;
    const double g_edge = interp(G_, south ? t0 + 1e-9 : t1 - 1e-9);
    const double c_near = std::min(std::sqrt(g_edge) * 1.02, c_max);
    auto swing = [&](double c) {
      const double tt = turning_theta(c, south);
      return sweep_alpha(std::min(tt, th_a), std::max(tt, th_a), c) +
             sweep_alpha(std::min(tt, th_b), std::max(tt, th_b), c);
    };
    if (swing(c_near) < target) {
      // pole passage: two meridian legs through the pole cap
      cand.ok = true;
      if (south) {
        cand.len = tail_south_ * 2.0 + interp(cumlen_, th_a) + interp(cumlen_, th_b);
        cand.fint = meridian_f(edge, th_a, f_fine) + meridian_f(edge, th_b, f_fine);
      } else {
        cand.len = tail_north_ * 2.0 + (cumlen_.back() - interp(cumlen_, th_a)) +
                   (cumlen_.back() - interp(cumlen_, th_b));
        cand.fint = meridian_f(th_a, edge, f_fine) + meridian_f(th_b, edge, f_fine);
      }
      if (!f_fine.empty()) {
        const int i = south ? 0 : kFine - 1;
        cand.fint += 2.0 * (south ? tail_south_ : tail_north_) * f_fine[i];
      }
      return cand;
    }
    double lo = c_near, hi = c_max;  // swing decreasing in c
    if (swing(hi) > target) hi = c_max;  // monotone bracket
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (swing(mid) > target)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-12 * (1.0 + c_max)) break;
    }
    const double c = 0.5 * (lo + hi);
    const double tt = turning_theta(c, south);
    cand.ok = true;
    arc_integrals(std::min(tt, th_a), std::max(tt, th_a), c, f_fine, &cand.len,
                  &cand.fint);
    arc_integrals(std::min(tt, th_b), std::max(tt, th_b), c, f_fine, &cand.len,
                  &cand.fint);
    return cand;
  };

  const Candidate cs = solve_side(true);
  const Candidate cn = solve_side(false);
  if (!cs.ok && !cn.ok) return false;
  const Candidate& best = (!cn.ok || (cs.ok && cs.len <= cn.len)) ? cs : cn;
  if (length) *length = best.len;
  if (f_integral) *f_integral = best.fint;
  return true;
}

SegmentInequalityReport segment_inequality_check(const RadialProfile& P,
                                                 double cap_radius, int pairs,
                                                 uint64_t seed) {
  if (P.n != 1) throw ConfigError("segment inequality check needs n = 1");
  if (!(cap_radius > 0.0)) throw ConfigError("cap radius must be positive");
  if (pairs < 1) throw ConfigError("need at least one pair");
  RevolutionSurface surf(P);

  // f = sum over real Ricci eigenvalues of |eig - 1| = 2 |ric - 1| on CP^1.
  const auto T = compute_geometry(P);
  const int N = P.scheme().size();
  std::vector<double> f_nodes(N);
  for (int j = 0; j < N; ++j) f_nodes[j] = 2.0 * std::abs(T.frames[j].ric_rad - 1.0);
  std::vector<double> f_fine(4096);
  {
    const double t0 = P.scheme().theta().front(), t1 = P.scheme().theta().back();
    for (size_t i = 0; i < f_fine.size(); ++i) {
      double v;
      P.scheme().theta_derivatives_at(f_nodes, t0 + (t1 - t0) * i / (f_fine.size() - 1), 0,
                                      &v, nullptr);
      f_fine[i] = std::max(v, 0.0);
    }
  }

  const double s_bs = surf.s_at_south_distance(cap_radius);
  const double s_bn = surf.s_at_north_distance(cap_radius);
  const double tau_bs = P.derivatives_at(s_bs)[0];
  const double tau_bn = P.derivatives_at(s_bn)[0];
  const double vol1 = 2.0 * M_PI * tau_bs;
  const double vol2 = 2.0 * M_PI * (2.0 - tau_bn);

  SegmentInequalityReport rep;
  rep.pairs_requested = pairs;

  std::vector<double> f_int(pairs, 0.0);
  std::vector<char> ok(pairs, 0);
  parallel_for(static_cast<size_t>(pairs), [&](size_t i) {
    CounterRng rng(seed, i);
    // area-uniform sampling: cumulative area in the cap is proportional to tau
    const double tau_x = rng.next01() * tau_bs;
    const double tau_y = 2.0 - rng.next01() * (2.0 - tau_bn);
    auto s_of_tau = [&](double tau_target, bool south) {
      double lo = P.scheme().s_min(), hi = P.scheme().s_max();
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (P.derivatives_at(mid)[0] < tau_target)
          lo = mid;
        else
          hi = mid;
      }
      (void)south;
      return 0.5 * (lo + hi);
    };
    SurfacePoint x{s_of_tau(std::max(tau_x, 1e-9), true), 2.0 * M_PI * rng.next01()};
    SurfacePoint y{s_of_tau(std::min(tau_y, 2.0 - 1e-9), false), 2.0 * M_PI * rng.next01()};
    double len = 0.0, fi = 0.0;
    if (surf.connect(x, y, &len, &fi, f_fine)) {
      ok[i] = 1;
      f_int[i] = fi;
    }
  });

  KahanSum mean;
  for (int i = 0; i < pairs; ++i) {
    if (ok[i]) {
      mean.add(f_int[i]);
      ++rep.pairs_used;
    } else {
      ++rep.pairs_skipped;
    }
  }
  rep.skip_flag = rep.pairs_skipped > pairs / 20;
  if (rep.pairs_used == 0) {
    rep.holds = false;
    return rep;
  }
  rep.lhs = vol1 * vol2 * mean.value() / rep.pairs_used;

  // \int_M f dvol = 2 pi (\int f F'' ds + end tails)
  std::vector<double> fw(N);
  const auto& d = P.node_derivatives();
  for (int j = 0; j < N; ++j) fw[j] = f_nodes[j] * d[j][1];
  const double int_f =
      2.0 * M_PI * (P.scheme().integrate_s(fw) + fw.front() + fw.back());
  rep.rhs = rep.constant * (2.0 * cap_radius * vol1 + 2.0 * cap_radius * vol2) * int_f;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? 1e308 : 0.0);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 1e-300;
  return rep;
}

}  // namespace krf
