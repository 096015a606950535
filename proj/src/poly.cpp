#include "kinlab/poly.hpp"

namespace kinlab {

static bool negligible(cplx c) { return std::abs(c) == 0.0; }

PolyV PolyV::constant(cplx c) {
  PolyV p;
  if (!negligible(c)) p.terms_[{0, 0, 0}] = c;
  return p;
}

PolyV PolyV::monomial(const IVec3& exps, cplx c) {
  PolyV p;
  if (!negligible(c)) p.terms_[exps] = c;
  return p;
}

PolyV PolyV::variable(int axis) {
  IVec3 e{0, 0, 0};
  e[std::size_t(axis)] = 1;
  return monomial(e, 1.0);
}

int PolyV::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

void PolyV::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (negligible(it->second))
      it = terms_.erase(it);
    else
      ++it;
  }
}

PolyV& PolyV::operator+=(const PolyV& o) {
  for (const auto& [e, c] : o.terms_) terms_[e] += c;
  prune();
  return *this;
}

PolyV& PolyV::operator-=(const PolyV& o) {
  for (const auto& [e, c] : o.terms_) terms_[e] -= c;
  prune();
  return *this;
}

PolyV PolyV::operator+(const PolyV& o) const {
  PolyV r = *this;
  r += o;
  return r;
}

PolyV PolyV::operator-(const PolyV& o) const {
  PolyV r = *this;
  r -= o;
  return r;
}

PolyV PolyV::operator*(const PolyV& o) const {
  PolyV r;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      IVec3 e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]};
      r.terms_[e] += c1 * c2;
    }
  r.prune();
  return r;
}

PolyV PolyV::operator*(cplx c) const {
  PolyV r;
  if (negligible(c)) return r;
  for (const auto& [e, a] : terms_) r.terms_[e] = a * c;
  return r;
}

PolyV PolyV::derivative(int axis) const {
  PolyV r;
  auto ax = std::size_t(axis);
  for (const auto& [e, c] : terms_) {
    if (e[ax] == 0) continue;
    IVec3 d = e;
    d[ax] -= 1;
    r.terms_[d] += c * double(e[ax]);
  }
  r.prune();
  return r;
}

PolyV PolyV::mul_variable(int axis) const {
  PolyV r;
  auto ax = std::size_t(axis);
  for (const auto& [e, c] : terms_) {
    IVec3 d = e;
    d[ax] += 1;
    r.terms_[d] = c;
  }
  return r;
}

PolyV PolyV::conjugated() const {
  PolyV r;
  for (const auto& [e, c] : terms_) r.terms_[e] = std::conj(c);
  return r;
}

PolyV PolyV::shift_scale(const Vec3& c, double w) const {
  PolyV out;
  for (const auto& [e, coef] : terms_) {
    // Expand prod_a (c_a + w u_a)^{e_a} by per-axis binomials.
    PolyV term = PolyV::constant(coef);
    for (int a = 0; a < 3; ++a) {
      int n = e[std::size_t(a)];
      if (n == 0) continue;
      PolyV axis_poly;
      for (int j = 0; j <= n; ++j) {
        IVec3 m{0, 0, 0};
        m[std::size_t(a)] = j;
        axis_poly += PolyV::monomial(
            m, binomial(n, j) * pow_int(w, j) * pow_int(c[std::size_t(a)], n - j));
      }
      term = term * axis_poly;
    }
    out += term;
  }
  return out;
}

cplx PolyV::eval(const Vec3& v) const {
  cplx s = 0.0;
  for (const auto& [e, c] : terms_)
    s += c * pow_int(v[0], e[0]) * pow_int(v[1], e[1]) * pow_int(v[2], e[2]);
  return s;
}

}  // namespace kinlab
