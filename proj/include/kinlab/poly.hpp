//============================================================================
// poly.hpp -- sparse multivariate polynomials over C in up to three
// velocity variables.  Used by the Gaussian-packet analytic states, where
// derivatives and moment integrals must stay exact.
//============================================================================
#pragma once

#include <map>

#include "kinlab/common.hpp"

namespace kinlab {

class PolyV {
 public:
  using Terms = std::map<IVec3, cplx>;

  PolyV() = default;
  static PolyV constant(cplx c);
  static PolyV monomial(const IVec3& exps, cplx c);
  static PolyV variable(int axis);  // v_axis

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int degree() const;

  PolyV& operator+=(const PolyV& o);
  PolyV& operator-=(const PolyV& o);
  PolyV operator+(const PolyV& o) const;
  PolyV operator-(const PolyV& o) const;
  PolyV operator*(const PolyV& o) const;
  PolyV operator*(cplx c) const;

  PolyV derivative(int axis) const;
  PolyV mul_variable(int axis) const;  // v_axis * p
  PolyV conjugated() const;            // conjugate coefficients

  // p(c + w u) as a polynomial in u.
  PolyV shift_scale(const Vec3& c, double w) const;

  cplx eval(const Vec3& v) const;

 private:
  void prune();
  Terms terms_;
};

}  // namespace kinlab
