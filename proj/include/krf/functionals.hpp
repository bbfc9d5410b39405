// Energy functionals of the canonical class, reduced to 1-D quadrature.
//
// Every integrand is a rotation-invariant wedge of diagonal (1,1)-forms; a
// form with potential u contributes the eigenvalue pair (u'', u') and a
// wedge of n of them has radial density (1/n) sum_i A_i prod_{j != i} B_j
// against ds, normalized so that all-omega gives F'' F'^{n-1}.
#pragma once

#include <span>
#include <vector>

#include "krf/curvature.hpp"
#include "krf/profile.hpp"
#include "krf/quadrature.hpp"

namespace krf {

struct PathSpec {
  enum class Kind { linear, reparam };
  Kind kind = Kind::linear;
  double power = 2.0;  // reparametrisation t -> t^power
  int quadrature_nodes = 16;
};

struct EnergyReport {
  double E0 = 0.0;
  double E1 = 0.0;
  std::vector<double> Ek;  // k = 0..n when requested
  std::vector<double> Jk;
  double dE1_dt_formula = 0.0;
  double l2_ric0 = 0.0;    // (1/V) int |Ric - omega|^2
  double l2_scalar = 0.0;  // (1/V) int (R - n)^2
  double l2_Q0 = 0.0;      // (1/V) int |Q0|^2
  double identity_rel_error = 0.0;  // |l2_ric0 - l2_scalar| / max(l2, floor)
  bool identity_ok = true;
};

// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights);

// Ricci potential of the reference: i ddbar h = Ric(omega) - omega with
// \int (e^h - 1) omega^n = 0.  Returns h at the grid nodes.
std::vector<double> h_potential(const RadialProfile& ref);

// E_k^0, J_k, E_k = E_k^0 - J_k for phi given on the reference grid.
double ek0_energy(std::span<const double> phi, const RadialProfile& ref, int k);
double jk_energy(std::span<const double> phi, const RadialProfile& ref, int k,
                 const PathSpec& path = {});
double ek_energy(std::span<const double> phi, const RadialProfile& ref, int k,
                 const PathSpec& path = {});

struct DerivativeSplit {
  double total = 0.0;       // value of the derivative formula
  double term_trace = 0.0;  // ((k+1)/V) int Lap(phidot) Ric^k w_phi^{n-k}
  double term_mixed = 0.0;  // -((n-k)/V) int phidot (Ric^{k+1}-w_phi^{k+1}) w_phi^{n-k-1}
  // k = 1 split along the flow: total = scalar_part + gradient_part.
  double scalar_part = 0.0;    // -(2/(nV)) int (n-R)^2 w_phi^n
  double gradient_part = 0.0;  // -((n-1)/V) int i dpd ^ dbar pd ^ (Ric + w) w^{n-2}
};

DerivativeSplit dek_dt_formula(std::span<const double> phi, std::span<const double> phidot,
                               const RadialProfile& ref, int k);

// -(n/V) \int i d(phidot) ^ dbar(phidot) ^ w_phi^{n-1}; the E_0 variation.
double e0_variation(std::span<const double> phi, std::span<const double> phidot,
                    const RadialProfile& ref);

// Fills the L^2 pinching block (and the canonical-class identity check).
EnergyReport l2_pinching_report(std::span<const double> phi, const RadialProfile& ref);

// Everything the flow series needs at one state.
EnergyReport energy_report(std::span<const double> phi, std::span<const double> phidot,
                           const RadialProfile& ref, bool full_ek_table = false);

}  // namespace krf
