//============================================================================
// analytic_state.hpp -- closed-form phase-space states
//
//   f(x, v) = sum_j coef_j e^{i k_j . x} p_j(v) exp(-|v - v0_j|^2 / (2 w2_j))
//
// The family is closed under d/dx, d/dv, multiplication by polynomials in v
// and by centred Gaussians, so operator identities (commutators, projections,
// moment systems) can be verified without discretisation error.  Velocity
// Fourier transforms and L^2 pairings have closed forms (Gauss--Hermite
// quadrature of matching order is exact for the polynomial factors).
//============================================================================
#pragma once

#include <vector>

#include "kinlab/poly.hpp"

namespace kinlab {

struct GaussTerm {
  cplx coef{1.0, 0.0};
  IVec3 kx{0, 0, 0};
  PolyV p = PolyV::constant(1.0);
  Vec3 v0{0.0, 0.0, 0.0};
  double w2 = 1.0;  // exp(-|v-v0|^2 / (2 w2)), w2 > 0
};

class AnalyticState {
 public:
  AnalyticState(int dx, int dv) : dx_(dx), dv_(dv) {
    require(dx >= 1 && dx <= 3 && dv >= 1 && dv <= 3, "AnalyticState: dims in 1..3");
  }

  int dx() const { return dx_; }
  int dv() const { return dv_; }
  const std::vector<GaussTerm>& terms() const { return terms_; }
  bool velocity_only() const;

  void add_term(GaussTerm t);

  // mu = (2 pi)^{-dv/2} e^{-|v|^2/2} and its square root, as k = 0 states.
  static AnalyticState maxwellian(int dx, int dv);
  static AnalyticState maxwellian_sqrt(int dx, int dv);

  AnalyticState operator+(const AnalyticState& o) const;
  AnalyticState operator-(const AnalyticState& o) const;
  AnalyticState operator*(cplx c) const;

  AnalyticState derivative_x(int axis) const;  // multiplies each term by i k_axis
  AnalyticState derivative_v(int axis) const;
  AnalyticState mul_poly(const PolyV& q) const;
  AnalyticState mul_v(int axis) const;
  // Multiply by coef * exp(-|v - c|^2 / (2 w2g)); Gaussian widths combine.
  AnalyticState mul_gaussian(double w2g, cplx coef, const Vec3& c = {0, 0, 0}) const;
  AnalyticState mul_sqrt_mu() const;  // multiply by mu^{1/2}

  // v . grad_x f  (pairs v_j with x_j for j < dx).
  AnalyticState transport_x() const;

  // Merge terms sharing (kx, v0, w2) by adding their polynomials, folding the
  // scalar coef in.  Cancellation between algebraically equal terms then
  // happens coefficient-wise, so norms of near-zero combinations are computed
  // without quadratic-form roundoff.
  AnalyticState combined() const;

  // Coefficient of e^{i k . x}, evaluated at velocity v.
  cplx eval_coeff(const IVec3& k, const Vec3& v) const;
  // Velocity-only evaluation (requires all terms at k = 0).
  cplx eval_v(const Vec3& v) const;

  // Velocity Fourier transform of the k-coefficient:
  //   F_v c_k(eta) = integral e^{-i eta . v} c_k(v) dv   (closed form).
  cplx spectrum(const IVec3& k, const Vec3& eta) const;

  // L^2_v pairing of k-coefficients: integral c_k(f) conj(c_k(g)) dv (exact).
  cplx l2v_inner(const IVec3& k, const AnalyticState& g) const;
  // Full phase-space inner product <f, g> = (2 pi)^{dx} sum_k <c_k, c_k>_v.
  cplx inner(const AnalyticState& g) const;
  double l2_norm() const;

  std::vector<IVec3> wavenumbers() const;

 private:
  int dx_, dv_;
  std::vector<GaussTerm> terms_;
};

// Exact integral of p(v) exp(-|v-v0|^2/(2 w2)) over R^dv.
cplx gauss_poly_integral(const PolyV& p, const Vec3& v0, double w2, int dv);

}  // namespace kinlab
