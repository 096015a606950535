//============================================================================
// vector_fields.cpp -- the operators P1, P2, H, Hdelta as multipliers and
// exact term algebra, plus commutator verification against transport.
//============================================================================
#include "kinlab/vector_fields.hpp"

#include <cmath>

namespace kinlab {

namespace {

void check_op(const FieldOp& op, double t) {
  require(t >= 0.0, "FieldOp: t >= 0 required");
  require(op.m >= 0 && op.m <= 24, "FieldOp: power m in 0..24");
  if (op.kind == OpKind::P1 || op.kind == OpKind::P2)
    require(op.s > 0.0 && op.s <= 1.0, "FieldOp: s in (0,1]");
  if (op.kind == OpKind::Hdelta)
    require(op.delta > 0.0, "FieldOp: delta > 0");
}

// x^n with the n = 0 edge pinned to 1 even at x = 0.
double pw(double x, double n) { return n == 0.0 ? 1.0 : std::pow(x, n); }

// One application of xi d_x1 + theta d_v1 in term algebra.
AnalyticState apply_once(const AnalyticState& f, double xi, double theta) {
  AnalyticState out(f.dx(), f.dv());
  if (xi != 0.0) out = out + f.derivative_x(0) * cplx{xi, 0.0};
  if (theta != 0.0) out = out + f.derivative_v(0) * cplx{theta, 0.0};
  return out;
}

AnalyticState apply_pow(const AnalyticState& f, double xi, double theta, int m) {
  AnalyticState out = f;
  for (int i = 0; i < m; ++i) out = apply_once(out, xi, theta);
  return out;
}

// d_x1^j d_v1^l f.
AnalyticState dxv(const AnalyticState& f, int j, int l) {
  AnalyticState out = f;
  for (int i = 0; i < j; ++i) out = out.derivative_x(0);
  for (int i = 0; i < l; ++i) out = out.derivative_v(0);
  return out;
}

}  // namespace

double FieldOp::xi(double t) const {
  switch (kind) {
    case OpKind::P1:
      return 2.0 * s / (1.0 + 2.0 * s) * pw(t, (1.0 + 2.0 * s) / (2.0 * s));
    case OpKind::P2:
      return 0.0;
    case OpKind::H:
      return t;
    case OpKind::Hdelta:
      return pw(t, delta + 1.0) / (delta + 1.0);
    case OpKind::Dx:
      return 1.0;
    case OpKind::Dv:
      return 0.0;
  }
  return 0.0;
}

double FieldOp::theta(double t) const {
  switch (kind) {
    case OpKind::P1:
    case OpKind::P2:
      return pw(t, 1.0 / (2.0 * s));
    case OpKind::H:
      return 1.0;
    case OpKind::Hdelta:
      return pw(t, delta);
    case OpKind::Dx:
      return 0.0;
    case OpKind::Dv:
      return 1.0;
  }
  return 0.0;
}

double FieldOp::dxi(double t) const {
  switch (kind) {
    case OpKind::P1:
      return pw(t, 1.0 / (2.0 * s));  // the exponent collapses to theta
    case OpKind::P2:
      return 0.0;
    case OpKind::H:
      return 1.0;
    case OpKind::Hdelta:
      return pw(t, delta);
    case OpKind::Dx:
    case OpKind::Dv:
      return 0.0;
  }
  return 0.0;
}

double FieldOp::dtheta(double t) const {
  switch (kind) {
    case OpKind::P1:
    case OpKind::P2:
      return 1.0 / (2.0 * s) * pw(t, 1.0 / (2.0 * s) - 1.0);
    case OpKind::H:
      return 0.0;
    case OpKind::Hdelta:
      return delta * pw(t, delta - 1.0);
    case OpKind::Dx:
    case OpKind::Dv:
      return 0.0;
  }
  return 0.0;
}

FieldOp FieldOp::p1(double s, int m) { return FieldOp{OpKind::P1, s, 1.0, m}; }
FieldOp FieldOp::p2(double s, int m) { return FieldOp{OpKind::P2, s, 1.0, m}; }
FieldOp FieldOp::h(int m) { return FieldOp{OpKind::H, 0.5, 1.0, m}; }
FieldOp FieldOp::h_delta(double delta, int m) {
  return FieldOp{OpKind::Hdelta, 0.5, delta, m};
}
FieldOp FieldOp::dx(int m) { return FieldOp{OpKind::Dx, 0.5, 1.0, m}; }
FieldOp FieldOp::dv(int m) { return FieldOp{OpKind::Dv, 0.5, 1.0, m}; }

PhaseSpectrum apply_op(const FieldOp& op, const PhaseSpectrum& f, double t) {
  check_op(op, t);
  const GridSpec& g = f.grid;
  const double xi = op.xi(t), th = op.theta(t);
  PhaseSpectrum out(g);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
    const IVec3 k = g.k_of(kf);
    for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
      const Vec3 eta = g.eta_of(mf);
      const cplx z{0.0, xi * double(k[0]) + th * eta[0]};
      out.at(kf, mf) = pow_int(z, op.m) * f.at(kf, mf);
    }
  }
  return out;
}

KvField apply_op(const FieldOp& op, const KvField& f, double t) {
  PhaseSpectrum s = velocity_fourier(f);
  return inverse_velocity_fourier(apply_op(op, s, t));
}

AnalyticState apply_op(const FieldOp& op, const AnalyticState& f, double t) {
  check_op(op, t);
  return apply_pow(f, op.xi(t), op.theta(t), op.m);
}

CommutatorCheck commutator_residual(const FieldOp& op, const TimeOracle& traj,
                                    double t) {
  require(bool(traj.state) && bool(traj.dstate),
          "commutator_residual: missing time-derivative oracle");
  check_op(op, t);
  require(op.m >= 1, "commutator_residual: power m >= 1");
  const int m = op.m;
  const double xi = op.xi(t), th = op.theta(t);
  const double dxi = op.dxi(t), dth = op.dtheta(t);

  const AnalyticState F = traj.state(t);
  const AnalyticState dF = traj.dstate(t);
  const AnalyticState TF = dF + F.transport_x();

  // Phi^m (T F).
  const AnalyticState A = apply_pow(TF, xi, th, m);

  // T (Phi^m F) expanded through Phi^m = sum_j C(m,j) xi^j th^{m-j} Dx^j Dv^{m-j}:
  // the coefficient time-derivatives act on F, the untouched coefficients act
  // on dF, and transport acts on the assembled state.
  AnalyticState sum_cF(F.dx(), F.dv());
  AnalyticState sum_dcF(F.dx(), F.dv());
  AnalyticState sum_cdF(F.dx(), F.dv());
  for (int j = 0; j <= m; ++j) {
    const int l = m - j;
    const double cj = binomial(m, j) * pw(xi, j) * pw(th, l);
    const double dcj =
        binomial(m, j) * (j > 0 ? double(j) * dxi * pw(xi, j - 1) * pw(th, l) : 0.0) +
        binomial(m, j) * (l > 0 ? double(l) * dth * pw(xi, j) * pw(th, l - 1) : 0.0);
    if (cj != 0.0) {
      const AnalyticState DjF = dxv(F, j, l);
      sum_cF = sum_cF + DjF * cplx{cj, 0.0};
      sum_cdF = sum_cdF + dxv(dF, j, l) * cplx{cj, 0.0};
      if (dcj != 0.0) sum_dcF = sum_dcF + DjF * cplx{dcj, 0.0};
    } else if (dcj != 0.0) {
      sum_dcF = sum_dcF + dxv(F, j, l) * cplx{dcj, 0.0};
    }
  }
  const AnalyticState B = sum_dcF + sum_cdF + sum_cF.transport_x();

  // Closed form: [Phi^m, T] = m ((theta - xi') d_x1 - theta' d_v1) Phi^{m-1}.
  const AnalyticState Pm1F = apply_pow(F, xi, th, m - 1);
  AnalyticState rhs(F.dx(), F.dv());
  if (th - dxi != 0.0)
    rhs = rhs + Pm1F.derivative_x(0) * cplx{double(m) * (th - dxi), 0.0};
  if (dth != 0.0)
    rhs = rhs - Pm1F.derivative_v(0) * cplx{double(m) * dth, 0.0};

  const AnalyticState resid = ((A - B) - rhs).combined();
  CommutatorCheck out;
  out.absolute = resid.l2_norm();
  out.scale = A.l2_norm() + B.l2_norm();
  return out;
}

}  // namespace kinlab
