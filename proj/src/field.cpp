#include "kinlab/field.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace kinlab {

namespace {

struct FftPlans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t n = 0;
};

FftPlans& plans_for(int dv, int N) {
  static std::map<std::pair<int, int>, FftPlans> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find({dv, N});
  if (it != cache.end()) return it->second;
  FftPlans p;
  p.n = 1;
  for (int a = 0; a < dv; ++a) p.n *= std::size_t(N);
  p.buf = fftw_alloc_complex(p.n);
  require(p.buf != nullptr, "fftw_alloc_complex failed");
  int dims[3] = {N, N, N};
  p.fwd = fftw_plan_dft(dv, dims, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft(dv, dims, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  require(p.fwd && p.bwd, "fftw plan creation failed");
  return cache.emplace(std::make_pair(dv, N), p).first->second;
}

// Centred index -> standard FFT flat index, and parity of sum_a m_a.  Because
// N is even, m_a and its FFT bin share parity, but mapping from the centred
// multi-index is the readable route.
void centred_maps(const GridSpec& g, std::vector<std::size_t>& fft_flat,
                  std::vector<double>& sign) {
  const std::size_t n = g.n_v();
  fft_flat.resize(n);
  sign.resize(n);
  for (std::size_t mf = 0; mf < n; ++mf) {
    IVec3 m = g.m_of(mf);
    std::size_t f = 0;
    int par = 0;
    for (int a = 0; a < g.dv; ++a) {
      int ma = m[std::size_t(a)];
      f = f * std::size_t(g.N_v) + std::size_t((ma + g.N_v) % g.N_v);
      par += std::abs(ma) % 2;
    }
    fft_flat[mf] = f;
    sign[mf] = (par % 2 == 0) ? 1.0 : -1.0;
  }
}

double sum_abs2(const std::vector<cplx>& v) {
  KahanSum s;
  for (const cplx& z : v) s.add(std::norm(z));
  return s.value();
}

}  // namespace

double KvField::norm_l2() const {
  double w = std::pow(2.0 * PI, grid.dx) * pow_int(grid.h(), grid.dv);
  return std::sqrt(w * sum_abs2(data));
}

double KvField::norm_l2_k(std::size_t kf) const {
  KahanSum s;
  const cplx* c = slice(kf);
  for (std::size_t j = 0; j < grid.n_v(); ++j) s.add(std::norm(c[j]));
  return std::sqrt(pow_int(grid.h(), grid.dv) * s.value());
}

double KvField::reality_defect() const {
  KahanSum num, den;
  for (std::size_t kf = 0; kf < grid.n_k(); ++kf) {
    IVec3 k = grid.k_of(kf);
    IVec3 mk{-k[0], -k[1], -k[2]};
    const cplx* c = slice(kf);
    const cplx* cm = slice(grid.k_index(mk));
    for (std::size_t j = 0; j < grid.n_v(); ++j) {
      num.add(std::norm(cm[j] - std::conj(c[j])));
      den.add(std::norm(c[j]));
    }
  }
  double d = std::sqrt(den.value());
  return d > 0.0 ? std::sqrt(num.value()) / d : std::sqrt(num.value());
}

double PhaseSpectrum::norm_l2() const {
  double w = std::pow(2.0 * PI, grid.dx) * pow_int(1.0 / (2.0 * grid.V), grid.dv);
  return std::sqrt(w * sum_abs2(data));
}

double PhaseSpectrum::norm_l2_k(std::size_t kf) const {
  KahanSum s;
  const cplx* c = slice(kf);
  for (std::size_t m = 0; m < grid.n_v(); ++m) s.add(std::norm(c[m]));
  return std::sqrt(pow_int(1.0 / (2.0 * grid.V), grid.dv) * s.value());
}

double XvField::norm_l2() const {
  double w = std::pow(2.0 * PI / grid.nx(), grid.dx) * pow_int(grid.h(), grid.dv);
  return std::sqrt(w * sum_abs2(data));
}

namespace {

// digits of an x-flat index, base Nx, axis 0 slowest (mirrors GridSpec::k_of)
IVec3 x_digits(const GridSpec& g, std::size_t f) {
  IVec3 ix{0, 0, 0};
  for (int a = g.dx - 1; a >= 0; --a) {
    ix[std::size_t(a)] = int(f % std::size_t(g.nx()));
    f /= std::size_t(g.nx());
  }
  return ix;
}

}  // namespace

KvField transform_x(const XvField& f) {
  const GridSpec& g = f.grid;
  KvField out(g);
  const int Nx = g.nx();
  std::vector<cplx> W(std::size_t(Nx) * std::size_t(Nx));
  for (int kc = 0; kc < Nx; ++kc)
    for (int i = 0; i < Nx; ++i)
      W[std::size_t(kc) * Nx + i] = std::polar(1.0, -2.0 * PI * double(kc - g.K) * i / Nx);
  const double scale = pow_int(1.0 / double(Nx), g.dx);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
    IVec3 k = g.k_of(kf);
    cplx* o = out.slice(kf);
    for (std::size_t xf = 0; xf < g.n_k(); ++xf) {
      IVec3 ix = x_digits(g, xf);
      cplx w = scale;
      for (int a = 0; a < g.dx; ++a)
        w *= W[std::size_t(k[std::size_t(a)] + g.K) * Nx + ix[std::size_t(a)]];
      const cplx* in = f.slice(xf);
      for (std::size_t j = 0; j < g.n_v(); ++j) o[j] += w * in[j];
    }
  }
  return out;
}

XvField inverse_transform_x(const KvField& f) {
  const GridSpec& g = f.grid;
  XvField out(g);
  const int Nx = g.nx();
  std::vector<cplx> W(std::size_t(Nx) * std::size_t(Nx));
  for (int kc = 0; kc < Nx; ++kc)
    for (int i = 0; i < Nx; ++i)
      W[std::size_t(kc) * Nx + i] = std::polar(1.0, 2.0 * PI * double(kc - g.K) * i / Nx);
  for (std::size_t xf = 0; xf < g.n_k(); ++xf) {
    IVec3 ix = x_digits(g, xf);
    cplx* o = out.slice(xf);
    for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
      IVec3 k = g.k_of(kf);
      cplx w{1.0, 0.0};
      for (int a = 0; a < g.dx; ++a)
        w *= W[std::size_t(k[std::size_t(a)] + g.K) * Nx + ix[std::size_t(a)]];
      const cplx* in = f.slice(kf);
      for (std::size_t j = 0; j < g.n_v(); ++j) o[j] += w * in[j];
    }
  }
  return out;
}

KvField sample_analytic(const AnalyticState& f, const GridSpec& g) {
  require(f.dx() == g.dx && f.dv() == g.dv, "sample_analytic: dimension mismatch");
  KvField out(g);
  for (const auto& t : f.terms()) {
    for (int a = 0; a < g.dx; ++a)
      require(std::abs(t.kx[std::size_t(a)]) <= g.K,
              "sample_analytic: analytic wavenumber exceeds grid cutoff K");
    cplx* c = out.slice(g.k_index(t.kx));
    for (std::size_t vf = 0; vf < g.n_v(); ++vf) {
      Vec3 v = g.v_of(vf);
      double d2 = 0.0;
      for (int a = 0; a < g.dv; ++a) d2 += sq(v[std::size_t(a)] - t.v0[std::size_t(a)]);
      c[vf] += t.coef * t.p.eval(v) * std::exp(-d2 / (2.0 * t.w2));
    }
  }
  return out;
}

PhaseSpectrum spectrum_analytic(const AnalyticState& f, const GridSpec& g) {
  require(f.dx() == g.dx && f.dv() == g.dv, "spectrum_analytic: dimension mismatch");
  PhaseSpectrum out(g);
  for (const IVec3& k : f.wavenumbers()) {
    for (int a = 0; a < g.dx; ++a)
      require(std::abs(k[std::size_t(a)]) <= g.K,
              "spectrum_analytic: analytic wavenumber exceeds grid cutoff K");
    cplx* c = out.slice(g.k_index(k));
    for (std::size_t mf = 0; mf < g.n_v(); ++mf) c[mf] += f.spectrum(k, g.eta_of(mf));
  }
  return out;
}

PhaseSpectrum velocity_fourier(const KvField& f) {
  const GridSpec& g = f.grid;
  PhaseSpectrum out(g);
  FftPlans& pl = plans_for(g.dv, g.N_v);
  std::vector<std::size_t> fft_flat;
  std::vector<double> sign;
  centred_maps(g, fft_flat, sign);
  const double hv = pow_int(g.h(), g.dv);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
    const cplx* in = f.slice(kf);
    for (std::size_t j = 0; j < pl.n; ++j) {
      pl.buf[j][0] = in[j].real();
      pl.buf[j][1] = in[j].imag();
    }
    fftw_execute(pl.fwd);
    cplx* o = out.slice(kf);
    for (std::size_t mf = 0; mf < pl.n; ++mf) {
      const fftw_complex& z = pl.buf[fft_flat[mf]];
      o[mf] = hv * sign[mf] * cplx{z[0], z[1]};
    }
  }
  return out;
}

KvField inverse_velocity_fourier(const PhaseSpectrum& s) {
  const GridSpec& g = s.grid;
  KvField out(g);
  FftPlans& pl = plans_for(g.dv, g.N_v);
  std::vector<std::size_t> fft_flat;
  std::vector<double> sign;
  centred_maps(g, fft_flat, sign);
  const double scale = pow_int(1.0 / (2.0 * g.V), g.dv);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
    const cplx* in = s.slice(kf);
    for (std::size_t j = 0; j < pl.n; ++j) pl.buf[j][0] = pl.buf[j][1] = 0.0;
    for (std::size_t mf = 0; mf < pl.n; ++mf) {
      cplx z = sign[mf] * in[mf];
      pl.buf[fft_flat[mf]][0] = z.real();
      pl.buf[fft_flat[mf]][1] = z.imag();
    }
    fftw_execute(pl.bwd);
    cplx* o = out.slice(kf);
    for (std::size_t j = 0; j < pl.n; ++j) o[j] = scale * cplx{pl.buf[j][0], pl.buf[j][1]};
  }
  return out;
}

}  // namespace kinlab
