#pragma once

#include <string>
#include <vector>

#include "kinlab/norms.hpp"

namespace kinlab {

// One checked instance of an inequality lhs <= rhs.  slack = lhs/rhs, so the
// inequality holds iff slack <= 1 (rhs = 0 with lhs > 0 counts as violation).
struct IneqRow {
  std::string point;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct IneqReport {
  std::string name;
  long n_checked = 0;
  long n_violation = 0;
  IneqRow worst;              // maximal slack over all checked points
  std::vector<IneqRow> rows;  // coarse per-group rows kept for CSV output

  bool ok() const { return n_checked > 0 && n_violation == 0; }
  void record(const std::string& point, double lhs, double rhs);
  void keep_row(const std::string& point, double lhs, double rhs);
};

// <k>^m <= 2 sum_{j=0..m} C(m,j) <k-l>^j <l>^{m-j} over the integer lattice
// [-range, range]^3, m = 1..m_max.  The right-hand side is evaluated as the
// literal binomial sum.
IneqReport check_binomial_lattice(int m_max, int range);

// Fourier-side interpolation inequalities between velocity Sobolev weights,
// checked pointwise on a log lattice of (eps, <eta>):
//   low:  1        <= eps <eta>^{2s} + eps^{-(1-s)/s}  <eta>^{2(s-1)}   (0<s<1)
//   neg (s <= 1/2): <eta>^{-2s} <= eps <eta>^{2s}     + eps^{-(1-2s)/(2s)} <eta>^{2(s-1)}
//   neg (s >  1/2): <eta>^{-2s} <= eps <eta>^{2(s-1)} + eps^{-(1-s)/(2s-1)} <eta>^{-2}
// Each family also gets its minimiser located numerically and compared with
// the closed form eps* = (beta B^{gamma-alpha})^{1/(beta+1)} for
// rhs = eps B^alpha + eps^{-beta} B^gamma.
struct InterpolationReport {
  IneqReport low;
  IneqReport negative;
  double worst_minimiser_reldiff = 0.0;
  bool ok() const { return low.ok() && negative.ok(); }
};
InterpolationReport check_interpolation(double s, int pts_per_decade = 64);

// First-order Fourier symbol phi(t, k, eta) = ck t^{ak} k_1 + ce t^{ae} eta_1
// with power-law time coefficients; A h has x-v spectrum phi * F h.
struct PowerLawSymbol {
  double ck = 0.0, ak = 0.0;
  double ce = 0.0, ae = 0.0;

  double coeff_k(double t) const;
  double coeff_e(double t) const;
  double phi(double t, const IVec3& k, const Vec3& eta) const;
};

// Multiply the phase-space spectrum by phi(t, k, eta)^m.
PhaseSpectrum apply_symbol_power(const PhaseSpectrum& h, const PowerLawSymbol& A,
                                 double t, int m);

// Splitting estimates for powers of A1 + A2 on a trajectory h(t) = h with
// time-dependent symbols, t on a uniform grid of n_t points in [t1, t2]:
//   sum_k sup_t ||((phi1+phi2)^m h)(k)||_{L2_v}
//     <= 2^m sum_j sum_k sup_t ||(phi_j^m h)(k)||_{L2_v}
// plus the same with L2_t in place of sup_t, and the mixed-power bound
//   ||phi1^m phi2^n h(k)||_{H^r_v} <= ||phi1^{m+n} h(k)||_{H^r_v}
//                                   + ||phi2^{m+n} h(k)||_{H^r_v}
// per (t, k) for every r in sobolev_orders and 1 <= m+n <= m_max.
IneqReport check_split_lemma(const PhaseSpectrum& h, const PowerLawSymbol& A1,
                             const PowerLawSymbol& A2, int m_max, double t1, double t2,
                             int n_t, const std::vector<double>& sobolev_orders);

// Minkowski/Young rearrangement for convolution-in-k trajectories:
//   sum_k [ int_T ( sum_l sum_j F_j(t,k-l) G_j(t,l) )^2 dt ]^{1/2}
//     <= sum_j ( sum_k sup_t F_j(t,k) ) ( sum_l [ int_T G_j(t,l)^2 dt ]^{1/2} )
// with nonnegative random F_j, G_j on [-range,range]^3 and trapezoid time
// weights; k runs over the full support [-2 range, 2 range]^3 of the
// convolution.
IneqReport check_minkowski_fubini(int n_samples, int range, int n_terms, int n_t,
                                  unsigned long long seed);

}  // namespace kinlab
