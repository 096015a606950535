#include "kinlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace kinlab {

void IneqReport::record(const std::string& point, double lhs, double rhs) {
  ++n_checked;
  const double slack = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? EXP_INF : 0.0);
  if (!(slack <= 1.0 + 1e-12)) ++n_violation;
  if (slack > worst.slack || n_checked == 1) worst = {point, lhs, rhs, slack};
}

void IneqReport::keep_row(const std::string& point, double lhs, double rhs) {
  const double slack = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? EXP_INF : 0.0);
  rows.push_back({point, lhs, rhs, slack});
}

IneqReport check_binomial_lattice(int m_max, int range) {
  require(m_max >= 1 && range >= 1, "check_binomial_lattice: bad arguments");
  IneqReport rep;
  rep.name = "binomial_lattice";
  const int n = 2 * range + 1;
  std::vector<double> worst_m(std::size_t(m_max) + 1, 0.0);
  std::vector<IneqRow> worst_row(std::size_t(m_max) + 1);
  std::vector<double> pa(std::size_t(m_max) + 1), pb(std::size_t(m_max) + 1);
  for (long kk = 0; kk < long(n) * n * n; ++kk) {
    IVec3 k{int(kk % n) - range, int((kk / n) % n) - range, int(kk / (long(n) * n)) - range};
    const double bk = bracket(k);
    for (long ll = 0; ll < long(n) * n * n; ++ll) {
      IVec3 l{int(ll % n) - range, int((ll / n) % n) - range,
              int(ll / (long(n) * n)) - range};
      IVec3 d{k[0] - l[0], k[1] - l[1], k[2] - l[2]};
      const double a = bracket(d), b = bracket(l);
      pa[0] = pb[0] = 1.0;
      for (int j = 1; j <= m_max; ++j) {
        pa[std::size_t(j)] = pa[std::size_t(j) - 1] * a;
        pb[std::size_t(j)] = pb[std::size_t(j) - 1] * b;
      }
      double lkm = 1.0;
      for (int m = 1; m <= m_max; ++m) {
        lkm *= bk;
        KahanSum s;
        for (int j = 0; j <= m; ++j)
          s.add(binomial(m, j) * pa[std::size_t(j)] * pb[std::size_t(m - j)]);
        const double rhs = 2.0 * s.value();
        const double slack = lkm / rhs;
        ++rep.n_checked;
        if (!(slack <= 1.0 + 1e-12)) ++rep.n_violation;
        if (slack > worst_m[std::size_t(m)]) {
          worst_m[std::size_t(m)] = slack;
          std::ostringstream os;
          os << "m=" << m << " k=(" << k[0] << "," << k[1] << "," << k[2] << ") l=("
             << l[0] << "," << l[1] << "," << l[2] << ")";
          worst_row[std::size_t(m)] = {os.str(), lkm, rhs, slack};
        }
      }
    }
  }
  for (int m = 1; m <= m_max; ++m) {
    rep.rows.push_back(worst_row[std::size_t(m)]);
    if (worst_row[std::size_t(m)].slack > rep.worst.slack)
      rep.worst = worst_row[std::size_t(m)];
  }
  return rep;
}

namespace {

struct TwoTermRhs {
  double alpha, beta, gamma;  // rhs(eps) = eps B^alpha + eps^{-beta} B^gamma
  double eval(double eps, double B) const {
    return eps * std::pow(B, alpha) + std::pow(eps, -beta) * std::pow(B, gamma);
  }
  double minimiser(double B) const {
    return std::pow(beta * std::pow(B, gamma - alpha), 1.0 / (beta + 1.0));
  }
};

// Ternary search for the minimiser of a function convex in log eps.
double argmin_log(const TwoTermRhs& f, double B, double lo, double hi) {
  double a = std::log(lo), b = std::log(hi);
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (f.eval(std::exp(m1), B) < f.eval(std::exp(m2), B))
      b = m2;
    else
      a = m1;
  }
  return std::exp(0.5 * (a + b));
}

void sweep_family(IneqReport& rep, const TwoTermRhs& f,
                  const std::function<double(double)>& lhs_of_B,
                  const std::vector<double>& eps_grid, const std::vector<double>& B_grid,
                  const std::string& tag) {
  for (double B : B_grid) {
    const double lhs = lhs_of_B(B);
    double worst_here = 0.0, wl = 0.0, wr = 0.0, weps = 0.0;
    for (double eps : eps_grid) {
      const double rhs = f.eval(eps, B);
      ++rep.n_checked;
      const double slack = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? EXP_INF : 0.0);
      if (!(slack <= 1.0 + 1e-12)) ++rep.n_violation;
      if (slack > worst_here) {
        worst_here = slack;
        wl = lhs;
        wr = rhs;
        weps = eps;
      }
    }
    // Sharpest point for this B: the analytic minimiser of the rhs.
    const double es = f.minimiser(B);
    const double rhs_min = f.eval(es, B);
    ++rep.n_checked;
    double slack_min = rhs_min > 0.0 ? lhs / rhs_min : (lhs > 0.0 ? EXP_INF : 0.0);
    if (!(slack_min <= 1.0 + 1e-12)) ++rep.n_violation;
    if (slack_min > worst_here) {
      worst_here = slack_min;
      wl = lhs;
      wr = rhs_min;
      weps = es;
    }
    if (worst_here > rep.worst.slack) {
      std::ostringstream os;
      os << tag << " B=" << B << " eps=" << weps;
      rep.worst = {os.str(), wl, wr, worst_here};
    }
  }
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const double decades = std::log10(hi / lo);
  const int n = std::max(2, int(std::lround(decades * per_decade)) + 1);
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, double(i) / double(n - 1)));
  return g;
}

}  // namespace

InterpolationReport check_interpolation(double s, int pts_per_decade) {
  require(s > 0.0 && s < 1.0, "check_interpolation: s must lie in (0,1)");
  InterpolationReport out;
  out.low.name = "interp_low";
  out.negative.name = "interp_negative";

  std::vector<double> eps_grid = log_grid(1e-6, 1e6, pts_per_decade);
  std::vector<double> B_grid;   // B = <eta>
  B_grid.push_back(1.0);        // eta = 0
  for (double e : log_grid(1e-3, 1e4, pts_per_decade)) B_grid.push_back(bracket(Vec3{e, 0, 0}, 1));

  const TwoTermRhs low{2.0 * s, (1.0 - s) / s, 2.0 * (s - 1.0)};
  sweep_family(out.low, low, [](double) { return 1.0; }, eps_grid, B_grid, "low");

  TwoTermRhs neg{};
  if (s <= 0.5)
    neg = {2.0 * s, (1.0 - 2.0 * s) / (2.0 * s), 2.0 * (s - 1.0)};
  else
    neg = {2.0 * (s - 1.0), (1.0 - s) / (2.0 * s - 1.0), -2.0};
  sweep_family(
      out.negative, neg, [s](double B) { return std::pow(B, -2.0 * s); }, eps_grid,
      B_grid, "negative");

  // Numerical minimiser must match the closed form.
  for (const TwoTermRhs& f : {low, neg}) {
    if (f.beta == 0.0) continue;  // s = 1/2 negative family: rhs monotone in eps
    for (double B : log_grid(1e-2, 1e3, 6)) {
      const double e_num = argmin_log(f, B, 1e-12, 1e12);
      const double e_ref = f.minimiser(B);
      out.worst_minimiser_reldiff = std::max(
          out.worst_minimiser_reldiff, std::abs(e_num - e_ref) / std::abs(e_ref));
    }
  }
  return out;
}

double PowerLawSymbol::coeff_k(double t) const {
  return ck == 0.0 ? 0.0 : ck * std::pow(t, ak);
}
double PowerLawSymbol::coeff_e(double t) const {
  return ce == 0.0 ? 0.0 : ce * std::pow(t, ae);
}
double PowerLawSymbol::phi(double t, const IVec3& k, const Vec3& eta) const {
  return coeff_k(t) * double(k[0]) + coeff_e(t) * eta[0];
}

PhaseSpectrum apply_symbol_power(const PhaseSpectrum& h, const PowerLawSymbol& A,
                                 double t, int m) {
  require(m >= 0, "apply_symbol_power: m must be >= 0");
  const GridSpec& g = h.grid;
  PhaseSpectrum out(g);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
    const IVec3 k = g.k_of(kf);
    for (std::size_t mf = 0; mf < g.n_v(); ++mf)
      out.at(kf, mf) = pow_int(A.phi(t, k, g.eta_of(mf)), m) * h.at(kf, mf);
  }
  return out;
}

namespace {

// ||phi^w h(k)||_{H^r_v} on one k-slice at fixed time.
double slice_symbol_norm(const PhaseSpectrum& h, std::size_t kf, const PowerLawSymbol& A,
                         double t, int w, double r) {
  const GridSpec& g = h.grid;
  const IVec3 k = g.k_of(kf);
  KahanSum acc;
  for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
    const Vec3 eta = g.eta_of(mf);
    const double br = r == 0.0 ? 1.0 : std::pow(bracket(eta, g.dv), 2.0 * r);
    acc.add(br * sq(pow_int(A.phi(t, k, eta), w)) * std::norm(h.at(kf, mf)));
  }
  return std::sqrt(acc.value() * pow_int(1.0 / (2.0 * g.V), g.dv));
}

double slice_sum_norm(const PhaseSpectrum& h, std::size_t kf, const PowerLawSymbol& A1,
                      const PowerLawSymbol& A2, double t, int m) {
  const GridSpec& g = h.grid;
  const IVec3 k = g.k_of(kf);
  KahanSum acc;
  for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
    const Vec3 eta = g.eta_of(mf);
    acc.add(sq(pow_int(A1.phi(t, k, eta) + A2.phi(t, k, eta), m)) *
            std::norm(h.at(kf, mf)));
  }
  return std::sqrt(acc.value() * pow_int(1.0 / (2.0 * g.V), g.dv));
}

double slice_mixed_norm(const PhaseSpectrum& h, std::size_t kf, const PowerLawSymbol& A1,
                        const PowerLawSymbol& A2, double t, int m, int n, double r) {
  const GridSpec& g = h.grid;
  const IVec3 k = g.k_of(kf);
  KahanSum acc;
  for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
    const Vec3 eta = g.eta_of(mf);
    const double br = r == 0.0 ? 1.0 : std::pow(bracket(eta, g.dv), 2.0 * r);
    acc.add(br *
            sq(pow_int(A1.phi(t, k, eta), m) * pow_int(A2.phi(t, k, eta), n)) *
            std::norm(h.at(kf, mf)));
  }
  return std::sqrt(acc.value() * pow_int(1.0 / (2.0 * g.V), g.dv));
}

double lq_time(const std::vector<double>& t, const std::vector<double>& v, bool sup) {
  if (sup) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  const double dt = t[1] - t[0];
  KahanSum acc;
  for (std::size_t i = 0; i < v.size(); ++i)
    acc.add(((i == 0 || i + 1 == v.size()) ? 0.5 * dt : dt) * sq(v[i]));
  return std::sqrt(acc.value());
}

}  // namespace

IneqReport check_split_lemma(const PhaseSpectrum& h, const PowerLawSymbol& A1,
                             const PowerLawSymbol& A2, int m_max, double t1, double t2,
                             int n_t, const std::vector<double>& sobolev_orders) {
  require(m_max >= 1 && n_t >= 2 && t2 > t1 && t1 >= 0.0,
          "check_split_lemma: bad arguments");
  IneqReport rep;
  rep.name = "split_lemma";
  const GridSpec& g = h.grid;
  std::vector<double> ts(static_cast<std::size_t>(n_t));
  for (int i = 0; i < n_t; ++i)
    ts[std::size_t(i)] = t1 + (t2 - t1) * double(i) / double(n_t - 1);

  for (int m = 1; m <= m_max; ++m) {
    // l1_k sup_t and l1_k L2_t versions of the 2^m splitting bound.
    for (bool sup : {true, false}) {
      KahanSum lhs_k, rhs1_k, rhs2_k;
      std::vector<double> vs(ts.size()), v1(ts.size()), v2(ts.size());
      for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
          vs[i] = slice_sum_norm(h, kf, A1, A2, ts[i], m);
          v1[i] = slice_symbol_norm(h, kf, A1, ts[i], m, 0.0);
          v2[i] = slice_symbol_norm(h, kf, A2, ts[i], m, 0.0);
        }
        lhs_k.add(lq_time(ts, vs, sup));
        rhs1_k.add(lq_time(ts, v1, sup));
        rhs2_k.add(lq_time(ts, v2, sup));
      }
      const double lhs = lhs_k.value();
      const double rhs = pow_int(2.0, m) * (rhs1_k.value() + rhs2_k.value());
      std::ostringstream os;
      os << "split_m=" << m << (sup ? "_supT" : "_L2T");
      rep.record(os.str(), lhs, rhs);
      rep.keep_row(os.str(), lhs, rhs);
    }
    // Mixed powers phi1^j phi2^{m-j} per (t, k) in each requested H^r_v.
    for (int j = 0; j <= m; ++j) {
      for (double r : sobolev_orders) {
        double worst_l = 0.0, worst_r = 1.0, worst_s = -1.0;
        std::string worst_pt;
        for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
          for (double t : ts) {
            const double lhs = slice_mixed_norm(h, kf, A1, A2, t, j, m - j, r);
            const double rhs = slice_symbol_norm(h, kf, A1, t, m, r) +
                               slice_symbol_norm(h, kf, A2, t, m, r);
            ++rep.n_checked;
            const double slack = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? EXP_INF : 0.0);
            if (!(slack <= 1.0 + 1e-12)) ++rep.n_violation;
            if (slack > worst_s) {
              worst_s = slack;
              worst_l = lhs;
              worst_r = rhs;
              std::ostringstream os;
              os << "mixed_m=" << j << "_n=" << (m - j) << "_r=" << r << "_t=" << t
                 << "_kf=" << kf;
              worst_pt = os.str();
            }
          }
        }
        if (worst_s > rep.worst.slack) rep.worst = {worst_pt, worst_l, worst_r, worst_s};
      }
    }
  }
  return rep;
}

IneqReport check_minkowski_fubini(int n_samples, int range, int n_terms, int n_t,
                                  unsigned long long seed) {
  require(n_samples >= 1 && range >= 1 && n_terms >= 1 && n_t >= 2,
          "check_minkowski_fubini: bad arguments");
  IneqReport rep;
  rep.name = "minkowski_fubini";
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const int n = 2 * range + 1;          // support side of F, G
  const int nc = 4 * range + 1;         // support side of the convolution
  const long n3 = long(n) * n * n;
  const long nc3 = long(nc) * nc * nc;
  std::vector<double> ts(static_cast<std::size_t>(n_t));
  for (int i = 0; i < n_t; ++i) ts[std::size_t(i)] = double(i) / double(n_t - 1);
  const double dt = ts[1] - ts[0];
  auto tw = [&](std::size_t i) {
    return (i == 0 || i + 1 == ts.size()) ? 0.5 * dt : dt;
  };

  auto idx3 = [n](const IVec3& v) {
    return (long(v[2]) + long(v[1]) * n + long(v[0]) * n * n);
  };

  for (int sample = 0; sample < n_samples; ++sample) {
    // F[j][t][cell], G[j][t][cell], nonneg with random sparsity.
    std::vector<std::vector<std::vector<double>>> F(static_cast<std::size_t>(n_terms));
    std::vector<std::vector<std::vector<double>>> G(static_cast<std::size_t>(n_terms));
    for (int j = 0; j < n_terms; ++j) {
      F[std::size_t(j)].assign(ts.size(), std::vector<double>(std::size_t(n3)));
      G[std::size_t(j)].assign(ts.size(), std::vector<double>(std::size_t(n3)));
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (long c = 0; c < n3; ++c) {
          F[std::size_t(j)][i][std::size_t(c)] = unif(rng) < 0.3 ? 0.0 : unif(rng);
          G[std::size_t(j)][i][std::size_t(c)] = unif(rng) < 0.3 ? 0.0 : unif(rng);
        }
    }
    // LHS: sum over k in the convolution support.
    KahanSum lhs;
    for (long kc = 0; kc < nc3; ++kc) {
      IVec3 k{int(kc % nc) - 2 * range, int((kc / nc) % nc) - 2 * range,
              int(kc / (long(nc) * nc)) - 2 * range};
      KahanSum tint;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        KahanSum conv;
        for (long lc = 0; lc < n3; ++lc) {
          IVec3 l{int(lc % n) - range, int((lc / n) % n) - range,
                  int(lc / (long(n) * n)) - range};
          IVec3 d{k[0] - l[0], k[1] - l[1], k[2] - l[2]};
          if (d[0] < -range || d[0] > range || d[1] < -range || d[1] > range ||
              d[2] < -range || d[2] > range)
            continue;
          // stored order is (v0, v1, v2) row-major with v2 fastest
          IVec3 ls{l[0] + range, l[1] + range, l[2] + range};
          IVec3 dsv{d[0] + range, d[1] + range, d[2] + range};
          for (int j = 0; j < n_terms; ++j)
            conv.add(F[std::size_t(j)][i][std::size_t(idx3(dsv))] *
                     G[std::size_t(j)][i][std::size_t(idx3(ls))]);
        }
        tint.add(tw(i) * sq(conv.value()));
      }
      lhs.add(std::sqrt(tint.value()));
    }
    // RHS: sum_j (l1_k sup_t F_j) (l1_k L2_t G_j).
    KahanSum rhs;
    for (int j = 0; j < n_terms; ++j) {
      KahanSum fk, gk;
      for (long c = 0; c < n3; ++c) {
        double supf = 0.0;
        KahanSum g2;
        for (std::size_t i = 0; i < ts.size(); ++i) {
          supf = std::max(supf, F[std::size_t(j)][i][std::size_t(c)]);
          g2.add(tw(i) * sq(G[std::size_t(j)][i][std::size_t(c)]));
        }
        fk.add(supf);
        gk.add(std::sqrt(g2.value()));
      }
      rhs.add(fk.value() * gk.value());
    }
    std::ostringstream os;
    os << "sample=" << sample;
    rep.record(os.str(), lhs.value(), rhs.value());
    if (sample < 8) rep.keep_row(os.str(), lhs.value(), rhs.value());
  }
  return rep;
}

}  // namespace kinlab
