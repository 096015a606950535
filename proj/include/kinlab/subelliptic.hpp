#pragma once

#include <cstdint>
#include <vector>

#include "kinlab/common.hpp"
#include "kinlab/field.hpp"
#include "kinlab/kolmogorov.hpp"

namespace kinlab {

// Hypoelliptic symbol and multiplier
// ----------------------------------
// For a spatial mode k in Z^3 and velocity frequency eta in R^3 define
//
//   lambda_k(eta) = -(k . eta) / <k>^A * chi(|eta| / <k>^B),
//       A = (2+2s)/(1+2s),  B = 1/(1+2s),  <k>^2 = 1 + |k|^2,
//
// with chi smooth, chi = 1 on [0,1], supported in [0,2], monotone on the
// transition.  The multiplier M = 1 + c0 lambda_k(D_v) trades a bounded
// perturbation of the L^2_v norm for the subelliptic gain <k>^{2s/(1+2s)}:
// the directional derivative
//
//   D(k, eta) = -sum_j k_j d_{eta_j} lambda_k(eta)
//             = |k|^2 chi(u) / <k>^A + (k.eta)^2 chi'(u) / (<k>^{A+B} |eta|)
//
// (u = |eta|/<k>^B) obeys  D >= <k>^{2s/(1+2s)} - C <eta>^{2s}  with C
// controlled by ||chi'||_inf.  On the plateau u <= 1 the closed form is
// exactly |k|^2 / <k>^A >= <k>^{2s/(1+2s)} - 1.
//
// Note the orientation: D is the quantity with the coercive lower bound.
// On the plateau  sum_j k_j d_{eta_j} lambda = -|k|^2/<k>^A  is negative,
// so it is -sum k_j d_j lambda (which appears when the transport pairing
// Re(i v.k h, lambda h) is integrated by parts) that dominates the gain.

// Smooth cutoff.  chi = 1 on [0,1], supp chi in [0, 1+width], monotone
// decreasing across the transition, built by integrating the standard bump
// rho(x) = exp(-1/(x(1-x))) (cumulative Gauss-Legendre table, closed-form
// derivatives).  Any smooth chi with an exact plateau overshoots the bound
// u*chi(u) <= 1:  (u chi)' = 1 at u = 1+, so delta0 = max u chi(u) - 1 is
// strictly positive.  A narrow transition keeps delta0 ~ 0.3 * width, and
// |lambda_k| <= 1 is then exact on the lattice ball |k|_2 <= k_sup where
// (1 + delta0) |k| / <k> <= 1.
struct ChiSpec {
  double width = 1.0 / 128.0;

  double chi(double u) const;    // u >= 0
  double dchi(double u) const;   // closed form d/du chi
  double d2chi(double u) const;  // closed form d^2/du^2 chi

  double delta0() const;         // max_u u*chi(u) - 1  (dense measurement)
  double dchi_max() const;       // sup |chi'| = rho(1/2) / (N * width)

  void validate() const;
};

struct SymbolSpec {
  double s = 0.5;    // fractional dissipation order, 0 < s < 1
  double c0 = 0.25;  // multiplier weight, 0 <= c0 < 1
  ChiSpec chi{};

  void validate() const;

  double exponent_a() const { return (2.0 + 2.0 * s) / (1.0 + 2.0 * s); }
  double exponent_b() const { return 1.0 / (1.0 + 2.0 * s); }
  double gain() const { return 2.0 * s / (1.0 + 2.0 * s); }

  // Largest integer lattice radius with (1 + delta0) |k| / <k> <= 1, i.e.
  // the certified |lambda_k| <= 1 range of this chi.
  int k_sup() const;
};

// The symbol, its closed-form eta-derivatives, and the coercive quantity.
double lambda_symbol(const IVec3& k, const Vec3& eta, const SymbolSpec& sp);
Vec3 lambda_grad_eta(const IVec3& k, const Vec3& eta, const SymbolSpec& sp);
// D(k, eta) = -sum_j k_j d_{eta_j} lambda_k(eta).
double lambda_transport_derivative(const IVec3& k, const Vec3& eta,
                                   const SymbolSpec& sp);
// max_{i,j} |d^2 lambda / d eta_i d eta_j| at (k, eta), closed form.
double lambda_hessian_max(const IVec3& k, const Vec3& eta, const SymbolSpec& sp);

// sup_eta |lambda_k(eta)| along the extremal ray eta || k (dense in u).
double lambda_sup_on_ray(const IVec3& k, const SymbolSpec& sp);

// Pointwise verification of  D >= <k>^{2s/(1+2s)} - C <eta>^{2s}  over the
// lattice ball |k|_2 <= k_radius and structured eta samples per k: the
// plateau, a dense sweep of the transition shell u in [1, 1+width] (which
// contains the extremisers), and the exterior.  Directions always include
// +-k/|k| (the worst case), the axes, and seeded random unit vectors.
struct SymbolScanSpec {
  int k_radius = 14;       // clamped to SymbolSpec::k_sup()
  int n_dirs = 12;         // random directions per k, on top of 6 fixed ones
  int n_u_transition = 65; // u-samples across the transition shell
  int n_u_plateau = 9;     // u-samples in [0, 1]
  int n_u_outside = 7;     // u-samples in (1+width, 3]
  std::uint64_t seed = 20260814ULL;

  void validate() const;
};

struct SymbolRow {
  IVec3 k{0, 0, 0};
  double c_min = 0.0;          // smallest admissible C at this k
  double plateau_margin = 0.0; // min over plateau of D - (<k>^gain - 1)
  double lambda_max = 0.0;     // max |lambda_k| over the eta samples
};

struct SymbolScanReport {
  double s = 0.0;
  double c_min = 0.0;        // smallest admissible C over the whole scan
  double c_theory = 0.0;     // proved envelope 2 ||chi'||_inf + 2
  double lambda_max = 0.0;   // max |lambda| (must be <= 1)
  double grad_max = 0.0;     // max |grad_eta lambda|
  double hess_max = 0.0;     // max |d^2 lambda| entry
  double delta0 = 0.0;       // chi overshoot used for the k_sup certificate
  double plateau_margin_min = 0.0;
  long n_points = 0;
  long violations = 0;       // points with D < <k>^gain - c_theory <eta>^{2s}
  std::vector<SymbolRow> rows;  // one per lattice k (k != 0)
};

SymbolScanReport symbol_bound_scan(const SymbolSpec& sp, const SymbolScanSpec& scan);

// Multiplier M = 1 + c0 lambda_k(D_v): velocity-spectral multiplication by
// 1 + c0 lambda_k(eta) on every spatial column.  Requires every lattice mode
// of the grid to lie in the certified |lambda| <= 1 ball, so the operator
// norm on L^2_v is <= 1 + c0 per column.
PhaseSpectrum apply_M(const PhaseSpectrum& f, const SymbolSpec& sp);
KvField apply_M(const KvField& h, const SymbolSpec& sp);

// Energy bookkeeping on an exact evolution column
// -----------------------------------------------
// Fix a 1-d spatial mode k and evolve F(t, eta) = e^{-I(t,k,eta)} F0(eta+tk),
// the Fourier-side solution of  d_t F - k d_eta F + |eta|^{2s} F = 0.  Two
// integrated identities must hold to quadrature accuracy:
//
//   (energy)    ||F(t1)||^2 - ||F(t2)||^2 = 2 int_t int_eta |eta|^{2s} |F|^2,
//   (pairing)   (F,lF)(t2) - (F,lF)(t1)
//                 = int_t [ int_eta D |F|^2 - 2 int_eta |eta|^{2s} l |F|^2 ],
//
// with l = lambda_k.  Their c0-weighted combination with the symbol bound
// D >= <k>^gain - C <eta>^{2s}, |l| <= 1, and |(F,lF)| <= ||F||^2 yields the
// subelliptic gain estimate, assembled here term by term:
//
//   (c0/2) <k>^gain int_t ||F||^2
//     <= [E(t2) - E(t1)] + int_t int_eta [ (1+c0)|eta|^{2s}
//                                          + (c0 C/2) <eta>^{2s} ] |F|^2,
//   E = (1/2)||F||^2 + (c0/2)(F, lF).
//
// The |eta|^{2s} cusp at eta = 0 is handled by subtracting
// q(0) e^{-eta^2} |eta|^{2s} from the integrand and adding back the moment
// Gamma(s + 1/2) q(0); odd parts cancel exactly on the symmetric grid.
struct EnergyLedger {
  double b6_drop = 0.0;   // ||F(t1)||^2 - ||F(t2)||^2
  double b6_diss = 0.0;   // 2 int int |eta|^{2s} |F|^2
  double b5_drop = 0.0;   // (F,lF)(t2) - (F,lF)(t1)
  double b5_flux = 0.0;   // int [ int D|F|^2 - 2 int |eta|^{2s} l |F|^2 ]
  double comb_lhs = 0.0;  // (c0/2) int int D |F|^2
  double comb_rhs = 0.0;  // [E(t2)-E(t1)] + int int (1 + c0 l) |eta|^{2s}|F|^2
  double gain_lhs = 0.0;  // (c0/2) <k>^gain int ||F||^2
  double assembled_rhs = 0.0;
  double err_b6 = 0.0;    // relative equality defects
  double err_b5 = 0.0;
  double err_comb = 0.0;
  long n_eta = 0;
  int n_t = 0;
  bool inequality_ok = false;  // gain_lhs <= assembled_rhs

  double margin() const { return assembled_rhs - gain_lhs; }
};

// init is evaluated at k = (k1, 0, 0), eta = (eta, 0, 0); C_emp is the
// admissible constant to assemble with (e.g. SymbolScanReport::c_min).
EnergyLedger subelliptic_energy_check(const SpectrumFn& init, int k1,
                                      const SymbolSpec& sp, double c_emp,
                                      double t1, double t2, double eta_lim,
                                      long n_eta, int n_t);

}  // namespace kinlab
