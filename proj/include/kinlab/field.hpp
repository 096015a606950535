#pragma once

#include <vector>

#include "kinlab/analytic_state.hpp"
#include "kinlab/grid.hpp"

namespace kinlab {

// Fourier coefficients c_k(v_j) on the velocity grid; k-major, v-minor.
class KvField {
 public:
  explicit KvField(const GridSpec& g) : grid(g) {
    g.validate();
    data.assign(g.n_k() * g.n_v(), cplx{0.0, 0.0});
  }

  GridSpec grid;
  std::vector<cplx> data;

  cplx* slice(std::size_t kf) { return data.data() + kf * grid.n_v(); }
  const cplx* slice(std::size_t kf) const { return data.data() + kf * grid.n_v(); }
  cplx& at(std::size_t kf, std::size_t vf) { return data[kf * grid.n_v() + vf]; }
  const cplx& at(std::size_t kf, std::size_t vf) const { return data[kf * grid.n_v() + vf]; }

  // ||f||_{L^2_x L^2_v} with the (2pi)^dx factor from x-orthogonality and the
  // Riemann velocity measure h^dv.
  double norm_l2() const;
  // Grid L^2_v norm of a single coefficient.
  double norm_l2_k(std::size_t kf) const;
  // || c_{-k} - conj(c_k) || / || c_k ||, aggregated over all modes; zero for
  // fields sampled from real-valued data.  Returns the absolute numerator when
  // the field is identically zero.
  double reality_defect() const;
};

// hat{c}_k(eta_m), centred eta order; k-major, eta-minor.
class PhaseSpectrum {
 public:
  explicit PhaseSpectrum(const GridSpec& g) : grid(g) {
    g.validate();
    data.assign(g.n_k() * g.n_v(), cplx{0.0, 0.0});
  }

  GridSpec grid;
  std::vector<cplx> data;

  cplx* slice(std::size_t kf) { return data.data() + kf * grid.n_v(); }
  const cplx* slice(std::size_t kf) const { return data.data() + kf * grid.n_v(); }
  cplx& at(std::size_t kf, std::size_t mf) { return data[kf * grid.n_v() + mf]; }
  const cplx& at(std::size_t kf, std::size_t mf) const { return data[kf * grid.n_v() + mf]; }

  // Same physical norm as KvField::norm_l2 (Plancherel: weight (2V)^{-dv}).
  double norm_l2() const;
  double norm_l2_k(std::size_t kf) const;
};

// Physical-space samples f(x_i, v_j) on the uniform x grid x_i = 2 pi i / Nx
// (Nx = 2K+1 per axis, so modes -K..K are alias-free); x-major, v-minor.
class XvField {
 public:
  explicit XvField(const GridSpec& g) : grid(g) {
    g.validate();
    data.assign(g.n_k() * g.n_v(), cplx{0.0, 0.0});
  }

  GridSpec grid;
  std::vector<cplx> data;

  cplx* slice(std::size_t xf) { return data.data() + xf * grid.n_v(); }
  const cplx* slice(std::size_t xf) const { return data.data() + xf * grid.n_v(); }

  double norm_l2() const;  // (2 pi)^dx grid mean over x, h^dv over v
};

// c_k(v) = Nx^{-dx} sum_i f(x_i, v) e^{-i k . x_i}, and the evaluation
// f(x_i, v) = sum_k c_k(v) e^{i k . x_i}; exact round trip on this grid.
KvField transform_x(const XvField& f);
XvField inverse_transform_x(const KvField& f);

// Evaluate the coefficients of an analytic state on the grid.  Fails if the
// state carries a wavenumber outside [-K, K]^dx or if dimensions mismatch.
KvField sample_analytic(const AnalyticState& f, const GridSpec& g);

// Closed-form velocity Fourier transform of an analytic state at the grid's
// (k, eta_m) points.
PhaseSpectrum spectrum_analytic(const AnalyticState& f, const GridSpec& g);

// hat{c}_k(eta_m) = h^dv sum_j e^{-i eta_m . v_j} c_k(v_j), and its inverse
// c_k(v_j) = (2V)^{-dv} sum_m e^{+i eta_m . v_j} hat{c}_k(eta_m).
PhaseSpectrum velocity_fourier(const KvField& f);
KvField inverse_velocity_fourier(const PhaseSpectrum& s);

}  // namespace kinlab
