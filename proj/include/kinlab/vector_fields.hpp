//============================================================================
// vector_fields.hpp -- time-weighted first-order operators
//
//   Phi = xi(t) d_x1 + theta(t) d_v1,   applied as exact Fourier multipliers
//   or as closed-form term algebra on analytic states.
//
// The concrete coefficient pairs:
//   P1:      xi = (2s/(1+2s)) t^{(1+2s)/(2s)},  theta = t^{1/(2s)}
//   P2:      xi = 0,                            theta = t^{1/(2s)}
//   H:       xi = t,                            theta = 1
//   Hdelta:  xi = t^{delta+1}/(delta+1),        theta = t^delta
//   Dx, Dv:  plain d_x1, d_v1
//
// For every such pair with xi' computable in closed form, the commutator
// with the free transport operator T = d_t + v . grad_x satisfies
//
//   [Phi^m, T] = m ((theta - xi') d_x1 - theta' d_v1) Phi^{m-1},
//
// since Phi and [Phi, T] lie in the commutative algebra of constant-
// direction derivatives with scalar time coefficients.  P1, H, Hdelta all
// have xi' = theta, so their d_x1 part drops out; P2 keeps both terms.
// commutator_residual verifies the identity on trajectories that carry an
// exact time-derivative oracle.
//============================================================================
#pragma once

#include <functional>

#include "kinlab/analytic_state.hpp"
#include "kinlab/field.hpp"

namespace kinlab {

enum class OpKind { P1, P2, H, Hdelta, Dx, Dv };

struct FieldOp {
  OpKind kind = OpKind::H;
  double s = 0.5;      // kinetic exponent (P1, P2)
  double delta = 1.0;  // Hdelta exponent, delta > 0
  int m = 1;           // power

  double xi(double t) const;      // coefficient of d_x1
  double theta(double t) const;   // coefficient of d_v1
  double dxi(double t) const;     // d/dt of xi
  double dtheta(double t) const;  // d/dt of theta

  static FieldOp p1(double s, int m = 1);
  static FieldOp p2(double s, int m = 1);
  static FieldOp h(int m = 1);
  static FieldOp h_delta(double delta, int m = 1);
  static FieldOp dx(int m = 1);
  static FieldOp dv(int m = 1);
};

// (xi(t) i k1 + theta(t) i eta1)^m as a pointwise multiplier.
PhaseSpectrum apply_op(const FieldOp& op, const PhaseSpectrum& f, double t);
// Velocity-spectral route: forward transform, multiplier, inverse.
KvField apply_op(const FieldOp& op, const KvField& f, double t);
// Closed-form term algebra; exact.
AnalyticState apply_op(const FieldOp& op, const AnalyticState& f, double t);

// Trajectory t -> F(t) with exact d_t F(t).
struct TimeOracle {
  std::function<AnalyticState(double)> state;
  std::function<AnalyticState(double)> dstate;
};

struct CommutatorCheck {
  double absolute = 0.0;  // || [Phi^m, T]F - closed-form RHS ||_{L^2}
  double scale = 0.0;     // || Phi^m(TF) || + || T(Phi^m F) ||
  double relative() const { return scale > 0.0 ? absolute / scale : absolute; }
};

// Evaluates [op.m-th power, d_t + v.grad_x] F(t) minus the closed-form
// right-hand side, all in exact term algebra.
CommutatorCheck commutator_residual(const FieldOp& op, const TimeOracle& traj,
                                    double t);

}  // namespace kinlab
