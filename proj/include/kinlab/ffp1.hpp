//============================================================================
// ffp1.hpp -- spectral time stepper for the kinetic model
//
//     d_t g + v . d_x g + <v>^gamma (-Delta_v)^s g = 0,
//     <v> = (1 + |v|^2)^{1/2},  0 < s < 1,  0 <= gamma <= 1,
//
// on T^d_x x [-V, V)^d_v (d = dx = dv), discretised as in grid.hpp: Fourier
// modes k in [-K, K]^d in x, uniform velocity grid with discrete dual eta_m.
//
// Scheme.  Strang splitting per step,
//     g <- T(dt/2) D(dt) T(dt/2) g,
// where T is the transport flow and D the diffusion flow.
//   * T(dt): multiplication by e^{-i (k.v) dt} per (k, v) grid point -- the
//     exact flow of d_t g = -v . d_x g in this representation (unimodular, so
//     every v-weighted L^2 norm is preserved).
//   * D(dt), gamma = 0: the exact multiplier e^{-dt |eta|^{2s}} on the
//     velocity transform (constant-coefficient flow, unconditionally stable).
//   * D(dt), gamma > 0: the generator A = <v>^gamma (-Delta_v)^s couples two
//     factors that are diagonal in conjugate representations, so no exact
//     one-representation flow exists.  The substep works on the weighted
//     state u = <v>^{-gamma/2} g, whose generator is the symmetric
//     nonnegative operator M = <v>^{gamma/2} (-Delta_v)^s <v>^{gamma/2};
//     M u is evaluated exactly (pointwise half-weight, multiplier
//     |eta|^{2s} on the transform, half-weight again) followed by the
//     2/3-rule band projection P, and u is advanced with the two-stage
//     second-order method (Heun / explicit trapezoid),
//         u <- u - (dt/2) [S u + S (u - dt S u)],   S = P M restricted to
//     the band.  S is symmetric PSD there, so ||u|| is non-increasing
//     whenever dt sigma_max(S) <= 2; enforced via the coarser bound
//     dt <v>_max^gamma eta_max^{2s} <= c_stab.  (Projecting the unweighted
//     product <v>^gamma Lambda g instead would *not* be accretive in the
//     weighted inner product -- the projector does not commute with the
//     weight -- and shows real transient growth; hence this form.)
//
// Dissipativity.  ||u|| = || <v>^{-gamma/2} g ||_{L^2} is the monitored
// Lyapunov norm: exact for the continuous flow (accretivity of M) and, by
// the symmetry of S, a per-step theorem for the scheme within its stability
// bound; transport phases are unimodular and the band trim only removes
// mass.  The plain L^2 norm is NOT a Lyapunov function when gamma > 0: the
// symmetrised plain form (1/2)(W Lambda + Lambda W) has small negative
// spectrum, and k = 0 columns genuinely raise the plain norm while relaxing
// towards the constant state c = <g0, <v>^{-gamma}> / <1, <v>^{-gamma}>.
// Runs record the largest per-step rise of both norms; only the weighted
// monitor is an invariant.
//============================================================================
#pragma once

#include <vector>

#include "kinlab/field.hpp"
#include "kinlab/kolmogorov.hpp"

namespace kinlab {

struct Ffp1Params {
  GridSpec grid{};       // requires dx == dv
  double s = 0.5;        // fractional order, 0 < s < 1
  double gamma = 0.0;    // weight exponent, 0 <= gamma <= 1
  double dt = 1e-3;      // step; the final step is shortened to land on t_max
  double t_max = 1.0;
  double snap_min = 1e-2;  // first snapshot target of the log-spaced schedule
  int n_snapshots = 17;    // log-spaced targets in [snap_min, t_max]
  int m_max = 8;           // weighted derivative norms for m = 0..m_max
  double c_stab = 0.9;     // stability constant for the gamma > 0 substep

  void validate() const;
  // Largest grid symbol of the diffusion generator: <v>_max^gamma eta_max^{2s}
  // with <v>_max = (1 + dv V^2)^{1/2} and eta_max the corner |eta|.
  double generator_bound() const;
  // Dimensionless step dt * generator_bound(); the gamma > 0 substep refuses
  // to run when this exceeds c_stab.
  double cfl_number() const;
};

struct StepStats {
  long n_steps = 0;
  double max_cfl_ratio = 0.0;     // max over steps of cfl_number / c_stab
  double dealias_loss = 0.0;      // cumulative ||.||^2 mass the 2/3 projector
                                  // removed from the weighted state u (the
                                  // initial trim plus, per step, the slight
                                  // spectral spread of the transport phases)
  double max_rise_plain = 0.0;    // max per-step relative rise of ||g||_{L^2}
  double max_rise_monitor = 0.0;  // same for the <v>^{-gamma/2}-weighted norm
};

struct SolverState {
  KvField field;
  double t = 0.0;
  double gamma = 0.0;  // weight used by the dissipativity monitor
  StepStats stats{};

  explicit SolverState(const KvField& f, double gamma_ = 0.0)
      : field(f), gamma(gamma_) {}

  // (2 pi)^{dx} h^{dv} sum <v>^{-gamma} |g|^2, the monitored Lyapunov norm;
  // equals KvField::norm_l2 when gamma = 0.
  double monitor_norm() const;
};

// Exact transport substep: multiply c_k(v_j) by e^{-i (k . v_j) dt}.
// Requires dx == dv.  Norm-preserving; no stats besides n-count are touched.
void step_transport(SolverState& st, double dt);

// Diffusion substep d_t g = -<v>^gamma (-Delta_v)^s g (see banner).  For
// gamma > 0 throws if dt exceeds c_stab / generator bound, and accumulates
// the 2/3-rule dealiasing loss into st.stats.
void step_diffusion(SolverState& st, double dt, double s, double gamma,
                    double c_stab = 0.9);

// One full Strang step T(dt/2) D(dt) T(dt/2) with the per-step monitor
// update; throws on non-finite norms or a monitor rise above 1e-8 relative.
void strang_step(SolverState& st, double dt, const Ffp1Params& p);

struct WeightedNormRow {
  double t = 0.0;
  int m = 0;
  char dir = 'x';        // 'x': d_x^m along axis 1;  'v': d_v^m along axis 1
  double raw = 0.0;      // l^1_k L^2_v norm of the m-th derivative
  double weighted = 0.0; // t^{(1+2s)/(2s) m} raw ('x') or t^{m/(2s)} raw ('v')
};

// Rows m = 0..m_max for both directions from one field (one transform pass).
std::vector<WeightedNormRow> weighted_norm_rows(const KvField& f, double t,
                                                double s, int m_max);

struct Ffp1Snapshot {
  double t = 0.0;
  KvField field;
};

struct Ffp1Trajectory {
  Ffp1Params params;
  std::vector<Ffp1Snapshot> snaps;       // log-spaced, last one at t_max
  std::vector<WeightedNormRow> norms;    // all snapshots, schedule order
  StepStats stats{};
};

Ffp1Trajectory run_ffp1(const Ffp1Params& p, const KvField& init);
Ffp1Trajectory run_ffp1(const Ffp1Params& p, const AnalyticState& init);

// dt-halving study at gamma = 0: runs with dt = p.dt / 2^i, i = 0..n_halvings,
// all gaps measured at t_max as relative L^2 distances between velocity
// transforms.  err_self (gap to a reference run at dts.back()/8, same grid)
// isolates the splitting error and carries the temporal order; err_exact
// (gap to the closed-form solution) saturates at `floor`, the dt-independent
// velocity-domain truncation error ~ V^{-(1+2s)}: for k != 0 the evolved
// profiles have algebraic tails |v|^{-(2+2s)} that the finite box wraps.
struct OrderStudy {
  std::vector<double> dts;
  std::vector<double> err_exact;
  std::vector<double> err_self;
  double slope = 0.0;  // least-squares slope of log err_self vs log dt (~2)
  double floor = 0.0;  // err_exact of the reference run
};
OrderStudy strang_order_study(const Ffp1Params& p, const AnalyticState& init,
                              int n_halvings);

// Empirical stability threshold of the gamma > 0 substep: bisection on the
// dimensionless step z = dt * generator_bound() with a seeded random
// band-limited weighted state, n_probe_steps per trial; returns the largest
// stable z (monitor norm non-increasing throughout).  By the symmetry of the
// substep this equals 2 generator_bound() / sigma_max(S|band) > 2, which
// certifies the default margin c_stab = 0.9.
double diffusion_stability_threshold(const GridSpec& g, double s, double gamma,
                                     int n_probe_steps = 256,
                                     std::uint64_t seed = 20260814ULL);

}  // namespace kinlab
