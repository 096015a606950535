#pragma once

#include "kinlab/common.hpp"

namespace kinlab {

// Discretisation of (x, v) in [0, 2pi)^dx x [-V, V)^dv.
//
// Spatial dependence is carried as Fourier coefficients c_k(v) with
// k in [-K, K]^dx (2K+1 modes per axis, index k+K).  Velocity space is a
// uniform grid v_j = -V + j h, h = 2V/N_v, whose discrete Fourier dual is
// eta_m = (pi/V) m with m in [-N_v/2, N_v/2) stored in centred order
// (index m + N_v/2).
struct GridSpec {
  int dx = 1;
  int dv = 1;
  int K = 16;
  int N_v = 64;
  double V = 8.0;

  void validate() const {
    require(dx >= 1 && dx <= 3, "GridSpec: dx must be in 1..3");
    require(dv >= 1 && dv <= 3, "GridSpec: dv must be in 1..3");
    require(K >= 0, "GridSpec: K must be >= 0");
    require(N_v >= 2 && N_v % 2 == 0, "GridSpec: N_v must be even and >= 2");
    require(V > 0.0, "GridSpec: V must be positive");
  }

  int nx() const { return 2 * K + 1; }
  std::size_t n_k() const {
    std::size_t n = 1;
    for (int a = 0; a < dx; ++a) n *= std::size_t(nx());
    return n;
  }
  std::size_t n_v() const {
    std::size_t n = 1;
    for (int a = 0; a < dv; ++a) n *= std::size_t(N_v);
    return n;
  }
  double h() const { return 2.0 * V / N_v; }
  double deta() const { return PI / V; }
  double eta_max() const { return deta() * (N_v / 2); }

  std::size_t k_index(const IVec3& k) const {
    std::size_t f = 0;
    for (int a = 0; a < dx; ++a) {
      int ka = k[std::size_t(a)];
      require(ka >= -K && ka <= K, "GridSpec: wavenumber outside [-K, K]");
      f = f * std::size_t(nx()) + std::size_t(ka + K);
    }
    return f;
  }
  IVec3 k_of(std::size_t f) const {
    IVec3 k{0, 0, 0};
    for (int a = dx - 1; a >= 0; --a) {
      k[std::size_t(a)] = int(f % std::size_t(nx())) - K;
      f /= std::size_t(nx());
    }
    return k;
  }

  std::size_t v_index(const IVec3& j) const {
    std::size_t f = 0;
    for (int a = 0; a < dv; ++a) {
      int ja = j[std::size_t(a)];
      require(ja >= 0 && ja < N_v, "GridSpec: velocity index out of range");
      f = f * std::size_t(N_v) + std::size_t(ja);
    }
    return f;
  }
  IVec3 j_of(std::size_t f) const {
    IVec3 j{0, 0, 0};
    for (int a = dv - 1; a >= 0; --a) {
      j[std::size_t(a)] = int(f % std::size_t(N_v));
      f /= std::size_t(N_v);
    }
    return j;
  }
  Vec3 v_of(std::size_t f) const {
    IVec3 j = j_of(f);
    Vec3 v{0, 0, 0};
    for (int a = 0; a < dv; ++a) v[std::size_t(a)] = -V + h() * j[std::size_t(a)];
    return v;
  }

  std::size_t m_index(const IVec3& m) const {
    std::size_t f = 0;
    for (int a = 0; a < dv; ++a) {
      int ma = m[std::size_t(a)];
      require(ma >= -N_v / 2 && ma < N_v / 2, "GridSpec: eta index out of range");
      f = f * std::size_t(N_v) + std::size_t(ma + N_v / 2);
    }
    return f;
  }
  IVec3 m_of(std::size_t f) const {
    IVec3 m{0, 0, 0};
    for (int a = dv - 1; a >= 0; --a) {
      m[std::size_t(a)] = int(f % std::size_t(N_v)) - N_v / 2;
      f /= std::size_t(N_v);
    }
    return m;
  }
  Vec3 eta_of(std::size_t f) const {
    IVec3 m = m_of(f);
    Vec3 eta{0, 0, 0};
    for (int a = 0; a < dv; ++a) eta[std::size_t(a)] = deta() * m[std::size_t(a)];
    return eta;
  }

  bool same(const GridSpec& o) const {
    return dx == o.dx && dv == o.dv && K == o.K && N_v == o.N_v && V == o.V;
  }
};

}  // namespace kinlab
