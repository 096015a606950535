#include "kinlab/analytic_state.hpp"

#include <array>
#include <map>
#include <set>

#include "kinlab/hermite.hpp"

namespace kinlab {

bool AnalyticState::velocity_only() const {
  for (const auto& t : terms_)
    if (t.kx != IVec3{0, 0, 0}) return false;
  return true;
}

void AnalyticState::add_term(GaussTerm t) {
  require(t.w2 > 0.0, "AnalyticState: Gaussian width^2 must be positive");
  for (int a = dx_; a < 3; ++a) require(t.kx[std::size_t(a)] == 0, "kx beyond dx");
  if (std::abs(t.coef) == 0.0 || t.p.empty()) return;
  terms_.push_back(std::move(t));
}

AnalyticState AnalyticState::maxwellian(int dx, int dv) {
  AnalyticState s(dx, dv);
  GaussTerm t;
  t.coef = std::pow(2.0 * PI, -0.5 * dv);
  t.w2 = 1.0;
  s.add_term(t);
  return s;
}

AnalyticState AnalyticState::maxwellian_sqrt(int dx, int dv) {
  AnalyticState s(dx, dv);
  GaussTerm t;
  t.coef = std::pow(2.0 * PI, -0.25 * dv);
  t.w2 = 2.0;
  s.add_term(t);
  return s;
}

AnalyticState AnalyticState::operator+(const AnalyticState& o) const {
  require(dx_ == o.dx_ && dv_ == o.dv_, "AnalyticState: dimension mismatch");
  AnalyticState r = *this;
  for (const auto& t : o.terms_) r.terms_.push_back(t);
  return r;
}

AnalyticState AnalyticState::operator-(const AnalyticState& o) const {
  return *this + o * cplx{-1.0, 0.0};
}

AnalyticState AnalyticState::operator*(cplx c) const {
  AnalyticState r(dx_, dv_);
  if (std::abs(c) == 0.0) return r;
  for (auto t : terms_) {
    t.coef *= c;
    r.terms_.push_back(std::move(t));
  }
  return r;
}

AnalyticState AnalyticState::derivative_x(int axis) const {
  require(axis >= 0 && axis < dx_, "derivative_x: axis out of range");
  AnalyticState r(dx_, dv_);
  for (auto t : terms_) {
    t.coef *= I_UNIT * double(t.kx[std::size_t(axis)]);
    if (std::abs(t.coef) != 0.0) r.terms_.push_back(std::move(t));
  }
  return r;
}

AnalyticState AnalyticState::derivative_v(int axis) const {
  require(axis >= 0 && axis < dv_, "derivative_v: axis out of range");
  AnalyticState r(dx_, dv_);
  for (const auto& t : terms_) {
    // d/dv [p e^{-|v-v0|^2/(2w2)}] = [p' - p (v_a - v0_a)/w2] e^{...}
    GaussTerm d = t;
    PolyV shift = PolyV::variable(axis) - PolyV::constant(t.v0[std::size_t(axis)]);
    d.p = t.p.derivative(axis) - t.p * shift * cplx{1.0 / t.w2, 0.0};
    if (!d.p.empty()) r.terms_.push_back(std::move(d));
  }
  return r;
}

AnalyticState AnalyticState::mul_poly(const PolyV& q) const {
  AnalyticState r(dx_, dv_);
  for (auto t : terms_) {
    t.p = t.p * q;
    if (!t.p.empty()) r.terms_.push_back(std::move(t));
  }
  return r;
}

AnalyticState AnalyticState::mul_v(int axis) const {
  return mul_poly(PolyV::variable(axis));
}

AnalyticState AnalyticState::mul_gaussian(double w2g, cplx coef, const Vec3& c) const {
  require(w2g > 0.0, "mul_gaussian: width^2 must be positive");
  AnalyticState r(dx_, dv_);
  for (auto t : terms_) {
    const double w2f = t.w2;
    const double W2 = w2f * w2g / (w2f + w2g);
    Vec3 centre{0, 0, 0};
    double d2 = 0.0;
    for (int a = 0; a < dv_; ++a) {
      auto ua = std::size_t(a);
      centre[ua] = W2 * (t.v0[ua] / w2f + c[ua] / w2g);
      d2 += sq(t.v0[ua] - c[ua]);
    }
    t.coef *= coef * std::exp(-d2 / (2.0 * (w2f + w2g)));
    t.v0 = centre;
    t.w2 = W2;
    if (std::abs(t.coef) != 0.0) r.terms_.push_back(std::move(t));
  }
  return r;
}

AnalyticState AnalyticState::mul_sqrt_mu() const {
  return mul_gaussian(2.0, std::pow(2.0 * PI, -0.25 * dv_));
}

AnalyticState AnalyticState::transport_x() const {
  AnalyticState r(dx_, dv_);
  const int n = std::min(dx_, dv_);
  for (int j = 0; j < n; ++j) {
    AnalyticState term = derivative_x(j).mul_v(j);
    for (auto& t : term.terms_) r.terms_.push_back(std::move(t));
  }
  return r;
}

AnalyticState AnalyticState::combined() const {
  using Key = std::array<double, 8>;
  std::map<Key, PolyV> groups;
  for (const auto& t : terms_) {
    Key key{double(t.kx[0]), double(t.kx[1]), double(t.kx[2]),
            t.v0[0],         t.v0[1],         t.v0[2],
            t.w2,            0.0};
    auto [it, fresh] = groups.emplace(key, PolyV{});
    it->second += t.p * t.coef;
    (void)fresh;
  }
  AnalyticState r(dx_, dv_);
  for (const auto& [key, p] : groups) {
    if (p.empty()) continue;
    GaussTerm t;
    t.coef = cplx{1.0, 0.0};
    t.kx = IVec3{int(key[0]), int(key[1]), int(key[2])};
    t.v0 = Vec3{key[3], key[4], key[5]};
    t.w2 = key[6];
    t.p = p;
    r.terms_.push_back(std::move(t));
  }
  return r;
}

cplx AnalyticState::eval_coeff(const IVec3& k, const Vec3& v) const {
  cplx s = 0.0;
  for (const auto& t : terms_) {
    if (t.kx != k) continue;
    double d2 = 0.0;
    for (int a = 0; a < dv_; ++a) d2 += sq(v[std::size_t(a)] - t.v0[std::size_t(a)]);
    s += t.coef * t.p.eval(v) * std::exp(-d2 / (2.0 * t.w2));
  }
  return s;
}

cplx AnalyticState::eval_v(const Vec3& v) const {
  require(velocity_only(), "eval_v: state has non-zero spatial modes");
  return eval_coeff({0, 0, 0}, v);
}

cplx AnalyticState::spectrum(const IVec3& k, const Vec3& eta) const {
  cplx s = 0.0;
  for (const auto& t : terms_) {
    if (t.kx != k) continue;
    const double w = std::sqrt(t.w2);
    // F_v[p e^{-|v-v0|^2/(2w^2)}](eta)
    //   = w^dv (2 pi)^{dv/2} e^{-i eta.v0} e^{-w^2|eta|^2/2} *
    //     sum_monomials q_e prod_a (-i)^{e_a} He_{e_a}(w eta_a),
    // with q the shifted polynomial p(v0 + w u).
    PolyV q = t.p.shift_scale(t.v0, w);
    cplx poly = 0.0;
    for (const auto& [e, c] : q.terms()) {
      cplx m = c;
      for (int a = 0; a < dv_; ++a) {
        int n = e[std::size_t(a)];
        if (n == 0) continue;
        m *= pow_int(cplx{0.0, -1.0}, n) * hermite_he(n, w * eta[std::size_t(a)]);
      }
      poly += m;
    }
    double phase = -dot(eta, t.v0, dv_);
    double eta2 = dot(eta, eta, dv_);
    s += t.coef * pow_int(w, dv_) * std::pow(2.0 * PI, 0.5 * dv_) *
         std::exp(-0.5 * t.w2 * eta2) * cplx{std::cos(phase), std::sin(phase)} * poly;
  }
  return s;
}

cplx gauss_poly_integral(const PolyV& p, const Vec3& v0, double w2, int dv) {
  if (p.empty()) return 0.0;
  const double w = std::sqrt(w2);
  // v = v0 + sqrt(2) w y reduces to the e^{-y^2} weight.
  PolyV q = p.shift_scale(v0, std::sqrt(2.0) * w);
  const int order = q.degree() / 2 + 1;
  Quad1D gh = gauss_hermite(std::max(order, 1));
  // Separable: integral prod_a y_a^{e_a} e^{-y_a^2} dy_a.
  std::vector<double> mom(std::size_t(q.degree()) + 1, 0.0);
  for (int n = 0; n <= q.degree(); ++n) {
    KahanSum acc;
    for (std::size_t i = 0; i < gh.x.size(); ++i) acc.add(gh.w[i] * pow_int(gh.x[i], n));
    mom[std::size_t(n)] = acc.value();
  }
  cplx s = 0.0;
  for (const auto& [e, c] : q.terms()) {
    cplx m = c;
    for (int a = 0; a < 3; ++a) {
      if (a < dv)
        m *= mom[std::size_t(e[std::size_t(a)])];
      else if (e[std::size_t(a)] != 0)
        m = 0.0;
    }
    s += m;
  }
  return s * pow_int(std::sqrt(2.0) * w, dv);
}

cplx AnalyticState::l2v_inner(const IVec3& k, const AnalyticState& g) const {
  require(dv_ == g.dv_, "l2v_inner: dv mismatch");
  cplx s = 0.0;
  for (const auto& tf : terms_) {
    if (tf.kx != k) continue;
    for (const auto& tg : g.terms_) {
      if (tg.kx != k) continue;
      const double w2f = tf.w2, w2g = tg.w2;
      const double W2 = w2f * w2g / (w2f + w2g);
      Vec3 centre{0, 0, 0};
      double d2 = 0.0;
      for (int a = 0; a < dv_; ++a) {
        auto ua = std::size_t(a);
        centre[ua] = W2 * (tf.v0[ua] / w2f + tg.v0[ua] / w2g);
        d2 += sq(tf.v0[ua] - tg.v0[ua]);
      }
      PolyV prod = tf.p * tg.p.conjugated();
      cplx val = gauss_poly_integral(prod, centre, W2, dv_);
      s += tf.coef * std::conj(tg.coef) * std::exp(-d2 / (2.0 * (w2f + w2g))) * val;
    }
  }
  return s;
}

std::vector<IVec3> AnalyticState::wavenumbers() const {
  std::set<IVec3> ks;
  for (const auto& t : terms_) ks.insert(t.kx);
  return {ks.begin(), ks.end()};
}

cplx AnalyticState::inner(const AnalyticState& g) const {
  require(dx_ == g.dx_ && dv_ == g.dv_, "inner: dimension mismatch");
  cplx s = 0.0;
  for (const auto& k : wavenumbers()) s += l2v_inner(k, g);
  return s * std::pow(2.0 * PI, dx_);
}

double AnalyticState::l2_norm() const { return std::sqrt(std::abs(inner(*this).real())); }

}  // namespace kinlab
