#include "kinlab/macro_micro.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kinlab/hermite.hpp"
#include "kinlab/maxwellian.hpp"

namespace kinlab {

namespace {

// The fourteen moment weights (polynomial factors in front of mu^{1/2}):
//   0        : 1                      -> a
//   1 .. 3   : v_j                    -> b_j
//   4        : (1/6) (|v|^2 - 3)      -> c
//   5 .. 10  : v_j v_l - 1            -> Theta_jl, upper-tri order
//   11 .. 13 : (1/10) (|v|^2 - 5) v_j -> Lambda_j
constexpr int kNF = 14;
constexpr int kThetaIdx[3][3] = {{5, 6, 7}, {6, 8, 9}, {7, 9, 10}};

// Upper-tri linear index of (j, l), j <= l.
constexpr int kUt[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};

double weight_value(int which, const Vec3& v) {
  switch (which) {
    case 0:
      return 1.0;
    case 1:
    case 2:
    case 3:
      return v[std::size_t(which - 1)];
    case 4:
      return (dot(v, v) - 3.0) / 6.0;
    case 5:
      return v[0] * v[0] - 1.0;
    case 6:
      return v[0] * v[1] - 1.0;
    case 7:
      return v[0] * v[2] - 1.0;
    case 8:
      return v[1] * v[1] - 1.0;
    case 9:
      return v[1] * v[2] - 1.0;
    case 10:
      return v[2] * v[2] - 1.0;
    default:
      return 0.1 * (dot(v, v) - 5.0) * v[std::size_t(which - 11)];
  }
}

PolyV weight_poly(int which) {
  auto var = [](int a) { return PolyV::variable(a); };
  const PolyV v2 = var(0) * var(0) + var(1) * var(1) + var(2) * var(2);
  switch (which) {
    case 0:
      return PolyV::constant(1.0);
    case 1:
    case 2:
    case 3:
      return var(which - 1);
    case 4:
      return (v2 - PolyV::constant(3.0)) * cplx{1.0 / 6.0, 0.0};
    case 5:
      return var(0) * var(0) - PolyV::constant(1.0);
    case 6:
      return var(0) * var(1) - PolyV::constant(1.0);
    case 7:
      return var(0) * var(2) - PolyV::constant(1.0);
    case 8:
      return var(1) * var(1) - PolyV::constant(1.0);
    case 9:
      return var(1) * var(2) - PolyV::constant(1.0);
    case 10:
      return var(2) * var(2) - PolyV::constant(1.0);
    default:
      return (v2 - PolyV::constant(5.0)) * var(which - 11) * cplx{0.1, 0.0};
  }
}

const std::array<PolyV, kNF>& weight_polys() {
  static const std::array<PolyV, kNF> polys = [] {
    std::array<PolyV, kNF> p;
    for (int i = 0; i < kNF; ++i) p[std::size_t(i)] = weight_poly(i);
    return p;
  }();
  return polys;
}

// Per-grid tables weight_value(which, v_j) * mu^{1/2}(v_j).
struct MomentTables {
  std::array<std::vector<double>, kNF> w;
};

MomentTables build_tables(const GridSpec& g) {
  MomentTables t;
  for (auto& col : t.w) col.resize(g.n_v());
  for (std::size_t vf = 0; vf < g.n_v(); ++vf) {
    const Vec3 v = g.v_of(vf);
    const double mh = maxwellian_sqrt(v, 3);
    for (int which = 0; which < kNF; ++which)
      t.w[std::size_t(which)][vf] = weight_value(which, v) * mh;
  }
  return t;
}

std::array<cplx, kNF> moments_all(const cplx* col, const MomentTables& t,
                                  const GridSpec& g) {
  std::array<KahanSumC, kNF> acc;
  for (std::size_t vf = 0; vf < g.n_v(); ++vf) {
    const cplx cv = col[vf];
    for (int which = 0; which < kNF; ++which)
      acc[std::size_t(which)].add(t.w[std::size_t(which)][vf] * cv);
  }
  const double h3 = pow_int(g.h(), 3);
  std::array<cplx, kNF> out;
  for (int which = 0; which < kNF; ++which)
    out[std::size_t(which)] = h3 * acc[std::size_t(which)].value();
  return out;
}

const Quad1D& gh_rule() {
  static const Quad1D q = gauss_hermite(kMacroQuadOrder);
  return q;
}

// integral q(v) e^{-|v|^2/4} e^{-|v - v0|^2 / (2 w2)} dv over R^3, by
// Gauss-Hermite in the completed-square variable: the combined Gaussian is
// e^{-A |v - c|^2 - B} with A = 1/4 + 1/(2 w2), c = v0 / (2 A w2), and
// B = |v0|^2/(2 w2) - A |c|^2; exact for deg q <= 2 * order - 1.
cplx gh_moment_term(const PolyV& q, const Vec3& v0, double w2) {
  const double A = 0.25 + 0.5 / w2;
  const double ra = 1.0 / std::sqrt(A);
  Vec3 c{0.0, 0.0, 0.0};
  for (int a = 0; a < 3; ++a) c[std::size_t(a)] = v0[std::size_t(a)] / (2.0 * A * w2);
  const double pref =
      std::exp(A * dot(c, c) - dot(v0, v0) / (2.0 * w2)) * ra * ra * ra;
  const Quad1D& gq = gh_rule();
  const std::size_t n = gq.x.size();
  KahanSumC acc;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const Vec3 v{c[0] + ra * gq.x[i], c[1] + ra * gq.x[j],
                     c[2] + ra * gq.x[l]};
        acc.add(gq.w[i] * gq.w[j] * gq.w[l] * q.eval(v));
      }
  return pref * acc.value();
}

cplx analytic_moment(const AnalyticState& f, const IVec3& k, int which) {
  KahanSumC acc;
  const PolyV& wp = weight_polys()[std::size_t(which)];
  const double mu_const = std::pow(2.0 * PI, -0.75);
  for (const GaussTerm& t : f.terms()) {
    if (!(t.kx == k)) continue;
    const PolyV q = wp * t.p;
    if (q.degree() > 2 * kMacroQuadOrder - 1) {
      std::ostringstream msg;
      msg << "macro moments: polynomial degree " << q.degree()
          << " exceeds the Gauss-Hermite exactness window (<= "
          << 2 * kMacroQuadOrder - 1 << ")";
      fail(msg.str());
    }
    acc.add(t.coef * mu_const * gh_moment_term(q, t.v0, t.w2));
  }
  return acc.value();
}

MacroColumn macro_from(const std::array<cplx, kNF>& m) {
  MacroColumn mc;
  mc.a = m[0];
  for (int j = 0; j < 3; ++j) mc.b[std::size_t(j)] = m[std::size_t(1 + j)];
  mc.c = m[4];
  return mc;
}

MomentTensors tensors_from(const std::array<cplx, kNF>& m) {
  MomentTensors mt;
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l)
      mt.theta[std::size_t(j)][std::size_t(l)] =
          m[std::size_t(kThetaIdx[j][l])];
    mt.lambda[std::size_t(j)] = m[std::size_t(11 + j)];
  }
  return mt;
}

// Theta_jl(P f) = (delta_jl - 1) a + 2 delta_jl c; Lambda(P f) = 0.
cplx theta_of_macro(const MacroColumn& mc, int j, int l) {
  return j == l ? 2.0 * mc.c : -mc.a;
}

void require_dv3(const GridSpec& g, const char* who) {
  require(g.dv == 3, std::string(who) + ": velocity dimension must be 3");
}

}  // namespace

MacroColumn macro_column(const KvField& f, std::size_t kf) {
  require_dv3(f.grid, "macro_column");
  const MomentTables t = build_tables(f.grid);
  return macro_from(moments_all(f.slice(kf), t, f.grid));
}

MomentTensors moment_tensors_column(const KvField& f, std::size_t kf) {
  require_dv3(f.grid, "moment_tensors_column");
  const MomentTables t = build_tables(f.grid);
  return tensors_from(moments_all(f.slice(kf), t, f.grid));
}

MacroColumn macro_column(const AnalyticState& f, const IVec3& k) {
  require(f.dv() == 3, "macro_column: velocity dimension must be 3");
  MacroColumn mc;
  mc.a = analytic_moment(f, k, 0);
  for (int j = 0; j < 3; ++j)
    mc.b[std::size_t(j)] = analytic_moment(f, k, 1 + j);
  mc.c = analytic_moment(f, k, 4);
  return mc;
}

MomentTensors moment_tensors_column(const AnalyticState& f, const IVec3& k) {
  require(f.dv() == 3, "moment_tensors_column: velocity dimension must be 3");
  std::array<cplx, kNF> m{};
  for (int which = 5; which < kNF; ++which)
    m[std::size_t(which)] = analytic_moment(f, k, which);
  return tensors_from(m);
}

MacroCoefficients macro_coefficients(const KvField& f) {
  require_dv3(f.grid, "macro_coefficients");
  const MomentTables t = build_tables(f.grid);
  MacroCoefficients out;
  out.a.resize(f.grid.n_k());
  out.b.resize(f.grid.n_k());
  out.c.resize(f.grid.n_k());
  for (std::size_t kf = 0; kf < f.grid.n_k(); ++kf) {
    const MacroColumn mc = macro_from(moments_all(f.slice(kf), t, f.grid));
    out.a[kf] = mc.a;
    out.b[kf] = mc.b;
    out.c[kf] = mc.c;
  }
  return out;
}

KvField project_p(const KvField& f) {
  require_dv3(f.grid, "project_p");
  const GridSpec& g = f.grid;
  const MomentTables t = build_tables(g);
  KvField out(g);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
    const MacroColumn mc = macro_from(moments_all(f.slice(kf), t, g));
    cplx* o = out.slice(kf);
    for (std::size_t vf = 0; vf < g.n_v(); ++vf) {
      // {a + b . v + c (|v|^2 - 3)} mu^{1/2}, assembled from the same weight
      // tables (table 4 carries the 1/6).
      cplx val = mc.a * t.w[0][vf] + 6.0 * mc.c * t.w[4][vf];
      for (int j = 0; j < 3; ++j)
        val += mc.b[std::size_t(j)] * t.w[std::size_t(1 + j)][vf];
      o[vf] = val;
    }
  }
  return out;
}

AnalyticState project_p(const AnalyticState& f) {
  require(f.dv() == 3, "project_p: velocity dimension must be 3");
  AnalyticState out(f.dx(), 3);
  const PolyV v2m3 = PolyV::variable(0) * PolyV::variable(0) +
                     PolyV::variable(1) * PolyV::variable(1) +
                     PolyV::variable(2) * PolyV::variable(2) -
                     PolyV::constant(3.0);
  for (const IVec3& k : f.wavenumbers()) {
    const MacroColumn mc = macro_column(f, k);
    PolyV p = PolyV::constant(mc.a) + v2m3 * mc.c;
    for (int j = 0; j < 3; ++j)
      p += PolyV::variable(j) * mc.b[std::size_t(j)];
    if (p.empty()) continue;
    GaussTerm t;
    t.coef = cplx{std::pow(2.0 * PI, -0.75), 0.0};
    t.kx = k;
    t.p = p;
    t.v0 = Vec3{0.0, 0.0, 0.0};
    t.w2 = 2.0;
    out.add_term(t);
  }
  return out;
}

cplx interaction_k(const MacroColumn& mc, const MomentTensors& micro,
                   const IVec3& k, double rho0) {
  require(rho0 >= 1.0, "interaction_k: rho0 must be >= 1");
  const double k2 =
      double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
  KahanSumC sum;
  for (int j = 0; j < 3; ++j) {
    for (int l = 0; l < 3; ++l) {
      const cplx z1 = I_UNIT * (double(k[std::size_t(j)]) * mc.b[std::size_t(l)] +
                                double(k[std::size_t(l)]) * mc.b[std::size_t(j)]);
      cplx z2 = micro.theta[std::size_t(j)][std::size_t(l)];
      if (j == l) z2 += 2.0 * mc.c;
      sum.add(z1 * std::conj(z2));
    }
    sum.add(rho0 * micro.lambda[std::size_t(j)] *
            std::conj(I_UNIT * double(k[std::size_t(j)]) * mc.c));
    sum.add(mc.b[std::size_t(j)] *
            std::conj(I_UNIT * double(k[std::size_t(j)]) * mc.a));
  }
  return sum.value() / (1.0 + k2);
}

cplx interaction_k(const KvField& f, std::size_t kf, double rho0) {
  require_dv3(f.grid, "interaction_k");
  const MomentTables t = build_tables(f.grid);
  const std::array<cplx, kNF> m = moments_all(f.slice(kf), t, f.grid);
  const MacroColumn mc = macro_from(m);
  MomentTensors micro = tensors_from(m);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      micro.theta[std::size_t(j)][std::size_t(l)] -= theta_of_macro(mc, j, l);
  const cplx K = interaction_k(mc, micro, f.grid.k_of(kf), rho0);
  const double n = f.norm_l2_k(kf);
  const double bound = k_bound_constant(rho0) * n * n;
  if (std::abs(K) > bound * (1.0 + 1e-9) + 1e-300) {
    std::ostringstream msg;
    msg << "interaction_k: |K| = " << std::abs(K)
        << " violates the Cauchy-Schwarz bound " << bound
        << " at |k| = " << lat_norm(f.grid.k_of(kf));
    fail(msg.str());
  }
  return K;
}

double k_bound_constant(double rho0) {
  require(rho0 >= 1.0, "k_bound_constant: rho0 must be >= 1");
  const double s3 = std::sqrt(3.0);
  // Term by term: sum_jl (|k_j| + |k_l|) ||f|| (sqrt2 + 2 delta_jl / sqrt6)
  // + rho0 sum_j |k_j| ||f||^2 / sqrt60 + sum_j |k_j| ||f||^2, with
  // |k|_1 <= sqrt3 |k| and |k| / (1 + |k|^2) <= 1/2.
  return 0.5 * s3 * (6.0 * std::sqrt(2.0) + 4.0 / std::sqrt(6.0) + 1.0) +
         rho0 * s3 / (2.0 * std::sqrt(60.0));
}

double FluidResidual::max_rel() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (scale[i] > 0.0)
      worst = std::max(worst, residual[i] / scale[i]);
    else if (residual[i] > 0.0)
      worst = std::numeric_limits<double>::infinity();
  }
  return worst;
}

FluidResidual fluid_residual(const FluidTrajectory& traj,
                             const SourceFn& source) {
  const std::size_t n = traj.snaps.size();
  require(traj.times.size() == n,
          "fluid_residual: times/snapshot count mismatch");
  require(n >= 3, "fluid_residual: need at least 3 snapshots");
  const GridSpec& g = traj.snaps[0].grid;
  require_dv3(g, "fluid_residual");
  for (const KvField& s : traj.snaps)
    require(s.grid.same(g), "fluid_residual: snapshot grids differ");
  const double dt = traj.times[1] - traj.times[0];
  require(dt > 0.0, "fluid_residual: times must be increasing");
  for (std::size_t i = 0; i + 1 < n; ++i)
    require(std::abs(traj.times[i + 1] - traj.times[i] - dt) <= 1e-8 * dt,
            "fluid_residual: non-uniform snapshot grid");

  const int fd = n >= 5 ? 4 : 2;
  const MomentTables tab = build_tables(g);
  const std::size_t nk = g.n_k();

  // Per snapshot and column: the differentiated state quantities and the
  // algebraic right-hand sides.
  struct ColData {
    cplx a{};
    std::array<cplx, 3> b{};
    cplx c{};
    std::array<cplx, 6> brk{};    // Theta_jl(w) + 2 c delta + (delta - 1) a
    std::array<cplx, 3> lam{};    // Lambda(w)
    std::array<cplx, 6> thrg{};   // Theta(R + G)
    std::array<cplx, 3> lamrg{};  // Lambda(R + G)
    cplx sa{};
    std::array<cplx, 3> sb{};
    cplx sc{};
  };
  std::vector<std::vector<ColData>> d(n, std::vector<ColData>(nk));

  std::vector<cplx> rg(g.n_v());
  for (std::size_t sn = 0; sn < n; ++sn) {
    const KvField& F = traj.snaps[sn];
    KvField G(g);
    if (source) {
      G = source(traj.times[sn]);
      require(G.grid.same(g), "fluid_residual: source grid differs");
    }
    for (std::size_t kf = 0; kf < nk; ++kf) {
      ColData& cd = d[sn][kf];
      const std::array<cplx, kNF> m = moments_all(F.slice(kf), tab, g);
      const MacroColumn mc = macro_from(m);
      cd.a = mc.a;
      cd.b = mc.b;
      cd.c = mc.c;
      for (int j = 0; j < 3; ++j) {
        for (int l = j; l < 3; ++l)
          cd.brk[std::size_t(kUt[j][l])] =
              m[std::size_t(kThetaIdx[j][l])] - theta_of_macro(mc, j, l) +
              (j == l ? 2.0 * mc.c : -mc.a);
        cd.lam[std::size_t(j)] = m[std::size_t(11 + j)];
      }
      // R + G column: R = -i (k . v) {I - P} f.
      const IVec3 k = g.k_of(kf);
      const cplx* col = F.slice(kf);
      const cplx* gc = G.slice(kf);
      for (std::size_t vf = 0; vf < g.n_v(); ++vf) {
        cplx pval = mc.a * tab.w[0][vf] + 6.0 * mc.c * tab.w[4][vf];
        for (int j = 0; j < 3; ++j)
          pval += mc.b[std::size_t(j)] * tab.w[std::size_t(1 + j)][vf];
        const Vec3 v = g.v_of(vf);
        double kv = 0.0;
        for (int a = 0; a < 3; ++a) kv += double(k[std::size_t(a)]) * v[std::size_t(a)];
        rg[vf] = -I_UNIT * kv * (col[vf] - pval) + gc[vf];
      }
      const std::array<cplx, kNF> mr = moments_all(rg.data(), tab, g);
      for (int j = 0; j < 3; ++j) {
        for (int l = j; l < 3; ++l)
          cd.thrg[std::size_t(kUt[j][l])] = mr[std::size_t(kThetaIdx[j][l])];
        cd.lamrg[std::size_t(j)] = mr[std::size_t(11 + j)];
      }
      const std::array<cplx, kNF> ms = moments_all(gc, tab, g);
      const MacroColumn sm = macro_from(ms);
      cd.sa = sm.a;
      cd.sb = sm.b;
      cd.sc = sm.c;
    }
  }

  const std::size_t lo = fd == 4 ? 2 : 1;
  std::array<KahanSum, 5> res2, sc2;
  auto add_eq = [&](int eq, cplx r, std::initializer_list<cplx> terms,
                    double mult) {
    res2[std::size_t(eq)].add(mult * std::norm(r));
    for (const cplx& t : terms) sc2[std::size_t(eq)].add(mult * std::norm(t));
  };

  for (std::size_t sn = lo; sn + lo < n; ++sn) {
    for (std::size_t kf = 0; kf < nk; ++kf) {
      auto ddt = [&](auto&& get) -> cplx {
        if (fd == 2)
          return (get(d[sn + 1][kf]) - get(d[sn - 1][kf])) / (2.0 * dt);
        return (-get(d[sn + 2][kf]) + 8.0 * get(d[sn + 1][kf]) -
                8.0 * get(d[sn - 1][kf]) + get(d[sn - 2][kf])) /
               (12.0 * dt);
      };
      const ColData& cd = d[sn][kf];
      const IVec3 ki = g.k_of(kf);
      Vec3 k{double(ki[0]), double(ki[1]), double(ki[2])};

      cplx divb{0.0, 0.0};
      for (int j = 0; j < 3; ++j)
        divb += I_UNIT * k[std::size_t(j)] * cd.b[std::size_t(j)];

      // (1) d_t a + div b = <mu^{1/2}, G>
      const cplx da = ddt([](const ColData& x) { return x.a; });
      add_eq(0, da + divb - cd.sa, {da, divb, cd.sa}, 1.0);

      // (2) d_t b_j + d_j (a + 2c) + sum_l d_l Theta_jl(w) = <v_j mu^{1/2}, G>
      for (int j = 0; j < 3; ++j) {
        const cplx db = ddt([j](const ColData& x) { return x.b[std::size_t(j)]; });
        const cplx grad = I_UNIT * k[std::size_t(j)] * (cd.a + 2.0 * cd.c);
        cplx divth{0.0, 0.0};
        for (int l = 0; l < 3; ++l) {
          const cplx thw = cd.brk[std::size_t(kUt[j][l])] -
                           (j == l ? 2.0 * cd.c : -cd.a);
          divth += I_UNIT * k[std::size_t(l)] * thw;
        }
        add_eq(1, db + grad + divth - cd.sb[std::size_t(j)],
               {db, grad, divth, cd.sb[std::size_t(j)]}, 1.0);
      }

      // (3) d_t c + (1/3) div b + (5/3) div Lambda(w) = (1/6)<(|v|^2-3)mu^{1/2}, G>
      const cplx dc = ddt([](const ColData& x) { return x.c; });
      cplx divlam{0.0, 0.0};
      for (int j = 0; j < 3; ++j)
        divlam += I_UNIT * k[std::size_t(j)] * cd.lam[std::size_t(j)];
      add_eq(2, dc + divb / 3.0 + (5.0 / 3.0) * divlam - cd.sc,
             {dc, divb / 3.0, (5.0 / 3.0) * divlam, cd.sc}, 1.0);

      // (4) d_t [Theta_jl(w) + 2 c delta + (delta - 1) a] + d_j b_l + d_l b_j
      //     = Theta_jl(R + G), aggregated with multiplicity 2 off-diagonal.
      for (int j = 0; j < 3; ++j) {
        for (int l = j; l < 3; ++l) {
          const int ut = kUt[j][l];
          const cplx dbrk =
              ddt([ut](const ColData& x) { return x.brk[std::size_t(ut)]; });
          const cplx grad =
              I_UNIT * (k[std::size_t(j)] * cd.b[std::size_t(l)] +
                        k[std::size_t(l)] * cd.b[std::size_t(j)]);
          add_eq(3, dbrk + grad - cd.thrg[std::size_t(ut)],
                 {dbrk, grad, cd.thrg[std::size_t(ut)]}, j == l ? 1.0 : 2.0);
        }
      }

      // (5) d_t Lambda_j(w) + d_j c = Lambda_j(R + G)
      for (int j = 0; j < 3; ++j) {
        const cplx dlam =
            ddt([j](const ColData& x) { return x.lam[std::size_t(j)]; });
        const cplx grad = I_UNIT * k[std::size_t(j)] * cd.c;
        add_eq(4, dlam + grad - cd.lamrg[std::size_t(j)],
               {dlam, grad, cd.lamrg[std::size_t(j)]}, 1.0);
      }
    }
  }

  FluidResidual out;
  out.fd_order = fd;
  out.dt = dt;
  for (int eq = 0; eq < 5; ++eq) {
    out.residual[std::size_t(eq)] = std::sqrt(dt * res2[std::size_t(eq)].value());
    out.scale[std::size_t(eq)] = std::sqrt(dt * sc2[std::size_t(eq)].value());
  }
  return out;
}

}  // namespace kinlab
