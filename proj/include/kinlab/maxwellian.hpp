#pragma once

#include "kinlab/common.hpp"
#include "kinlab/hermite.hpp"

namespace kinlab {

// mu(v) = (2 pi)^{-dv/2} e^{-|v|^2/2}.
inline double maxwellian(const Vec3& v, int dv = 3) {
  return std::pow(2.0 * PI, -0.5 * dv) * std::exp(-0.5 * dot(v, v, dv));
}

inline double maxwellian_sqrt(const Vec3& v, int dv = 3) {
  return std::pow(2.0 * PI, -0.25 * dv) * std::exp(-0.25 * dot(v, v, dv));
}

// d^p/dv1^p mu^{1/2}(v) = 2^{-p/2} (-1)^p He_p(v1/sqrt2) mu^{1/2}(v), from
// d^p/dx^p e^{-x^2/4} = 2^{-p/2} (-1)^p He_p(x/sqrt2) e^{-x^2/4}.
inline double dv1_sqrt_mu(int p, const Vec3& v, int dv = 3) {
  double sgn = (p % 2 == 0) ? 1.0 : -1.0;
  return sgn * std::pow(2.0, -0.5 * p) * hermite_he(p, v[0] / std::sqrt(2.0)) *
         maxwellian_sqrt(v, dv);
}

}  // namespace kinlab
