//============================================================================
// macro_micro.hpp -- macro-micro decomposition machinery (d_v = 3)
//
// The linearized collision operator annihilates the five collision
// invariants {1, v_1, v_2, v_3, |v|^2} mu^{1/2}; the orthogonal projection
// of a velocity function onto their span is
//
//   P f = { a + b . v + c (|v|^2 - 3) } mu^{1/2},
//   a = <mu^{1/2}, f>,  b_j = <v_j mu^{1/2}, f>,
//   c = (1/6) <(|v|^2 - 3) mu^{1/2}, f>,
//
// with mu = (2 pi)^{-3/2} e^{-|v|^2/2} and plain (unconjugated) pairings, so
// the coefficients are linear in f and commute with the Fourier transform
// in x.  Higher moments are carried by
//
//   Theta_jl(f) = <(v_j v_l - 1) mu^{1/2}, f>         (symmetric 3 x 3),
//   Lambda_j(f) = (1/10) <(|v|^2 - 5) v_j mu^{1/2}, f>.
//
// For ANY trajectory of  d_t f + v . grad_x f = G  (G the full right-hand
// side: collision model plus external source), taking those moments per
// spatial Fourier mode k yields the closed fluid-type system
//
//   (1) d_t a + div b                                    = <mu^{1/2}, G>
//   (2) d_t b_j + d_j (a + 2 c) + sum_l d_l Theta_jl(w)  = <v_j mu^{1/2}, G>
//   (3) d_t c + (1/3) div b + (5/3) div Lambda(w)        = (1/6)<(|v|^2-3)mu^{1/2}, G>
//   (4) d_t [Theta_jl(w) + 2 c delta_jl + (delta_jl - 1) a]
//         + d_j b_l + d_l b_j                            = Theta_jl(R + G)
//   (5) d_t Lambda_j(w) + d_j c                          = Lambda_j(R + G)
//
// where w = {I - P} f is the microscopic part and R = -v . grad_x w.  The
// (delta_jl - 1) a term in the bracket of (4) is forced by the moment
// identity Theta_jl(P f) = (delta_jl - 1) a + 2 delta_jl c: the constant -1
// in the Theta weight pairs with the a mu^{1/2} component off the diagonal,
// so d_t Theta_jl(f) picks up -d_t a there.  Dropping it (as a plain
// "Theta + 2 c delta" bracket) leaves an O(1) residual -d_t a in every
// off-diagonal equation; fluid_residual implements the corrected bracket
// and the unit tests pin the uncorrected form as a negative control.
//
// The interaction functional at one Fourier mode (rho0 >= 1 a free weight):
//
//   K(fhat) = 1/(1+|k|^2) [ sum_jl ( i k_j bhat_l + i k_l bhat_j | Theta_jl(what) + 2 delta_jl chat )
//           + rho0 sum_j ( Lambda_j(what) | i k_j chat )
//           + sum_j ( bhat_j | i k_j ahat ) ],        (z1 | z2) = z1 conj(z2).
//
// Every term carries a factor k_j, so K vanishes identically at k = 0, and
// Cauchy-Schwarz with the exact Gaussian moment norms
//   ||mu^{1/2}|| = ||v_j mu^{1/2}|| = 1,  ||(1/6)(|v|^2-3) mu^{1/2}|| = 1/sqrt(6),
//   ||(v_j v_l - 1) mu^{1/2}|| = sqrt(2), ||(1/10)(|v|^2-5) v_j mu^{1/2}|| = 1/sqrt(10)
// gives |K| <= k_bound_constant(rho0) ||fhat||^2_{L^2_v}; the evaluation
// asserts that bound at runtime.
//
// Quadrature: moments of gridded columns are h^3-weighted Riemann sums
// (spectrally accurate; the box-truncation floor is ~ e^{-V^2/4} times the
// integrand's own decay).  Moments of analytic states are tensorized
// Gauss-Hermite of order 24 in each term's completed-square variable, exact
// for polynomial factors of degree <= 47; higher degrees throw.
//============================================================================
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "kinlab/analytic_state.hpp"
#include "kinlab/field.hpp"

namespace kinlab {

inline constexpr int kMacroQuadOrder = 24;  // Gauss-Hermite order, exact <= 47

// Macroscopic coefficients of one velocity function (one k column).
struct MacroColumn {
  cplx a{0.0, 0.0};
  std::array<cplx, 3> b{};
  cplx c{0.0, 0.0};
};

// Theta (symmetric 3 x 3) and Lambda (3-vector) moments of one function.
struct MomentTensors {
  std::array<std::array<cplx, 3>, 3> theta{};
  std::array<cplx, 3> lambda{};
};

// Per-k coefficient tables for a whole field, k-major like KvField.
struct MacroCoefficients {
  std::vector<cplx> a;
  std::vector<std::array<cplx, 3>> b;
  std::vector<cplx> c;
};

// --- moments of a single column --------------------------------------------
// Grid path: h^3 Riemann sums over the velocity grid (d_v = 3 required).
MacroColumn macro_column(const KvField& f, std::size_t kf);
MomentTensors moment_tensors_column(const KvField& f, std::size_t kf);
// Analytic path: Gauss-Hermite order kMacroQuadOrder per term, exact for
// polynomial degree <= 2*order - 1; throws on higher degree.
MacroColumn macro_column(const AnalyticState& f, const IVec3& k);
MomentTensors moment_tensors_column(const AnalyticState& f, const IVec3& k);

MacroCoefficients macro_coefficients(const KvField& f);

// --- projection -------------------------------------------------------------
// P f ({I - P} f = f - project_p(f)); the analytic overload is exact term
// algebra and returns one Maxwellian-rooted term per wavenumber.
KvField project_p(const KvField& f);
AnalyticState project_p(const AnalyticState& f);

// --- interaction functional -------------------------------------------------
// K at wavenumber k assembled from precomputed pieces: mc holds (a, b, c) of
// the column, micro the Theta/Lambda moments of its microscopic part.
cplx interaction_k(const MacroColumn& mc, const MomentTensors& micro,
                   const IVec3& k, double rho0);
// Convenience: from a field column directly (projects internally).  Asserts
// |K| <= k_bound_constant(rho0) * ||column||^2_{L^2_v} and throws otherwise.
cplx interaction_k(const KvField& f, std::size_t kf, double rho0);
// The Cauchy-Schwarz constant of the |K| bound.
double k_bound_constant(double rho0);

// --- fluid-type system residual ---------------------------------------------
// Snapshots on a UNIFORM time grid of a trajectory of
// d_t f + v . grad_x f = G; `source` returns G on the same grid (an empty
// function means G = 0).  Time derivatives are centered differences: 4th
// order when >= 5 snapshots are given, else 2nd order (recorded in fd_order);
// x-derivatives are exact (multiplication by i k).  Residuals of the five
// moment equations are aggregated over interior times, wavenumbers, and
// tensor components in the discrete L^2_t l^2 norm; `scale` aggregates the
// magnitudes of each equation's constituent terms the same way, so
// residual[i]/scale[i] is a dimensionless consistency measure.
struct FluidTrajectory {
  std::vector<double> times;
  std::vector<KvField> snaps;
};
using SourceFn = std::function<KvField(double)>;

struct FluidResidual {
  int fd_order = 2;
  double dt = 0.0;
  std::array<double, 5> residual{};
  std::array<double, 5> scale{};
  double max_rel() const;
};

FluidResidual fluid_residual(const FluidTrajectory& traj,
                             const SourceFn& source);

}  // namespace kinlab
