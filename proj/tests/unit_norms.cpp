#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kinlab/inequalities.hpp"
#include "kinlab/norms.hpp"

using namespace kinlab;

namespace {

GridSpec small_grid() {
  GridSpec g;
  g.dx = 1;
  g.dv = 1;
  g.K = 2;
  g.N_v = 8;
  g.V = 4.0;
  return g;
}

// Set one k-slice to a constant whose bare L2_v norm equals `target`.
void set_mode_norm(KvField& f, int k, double target) {
  const GridSpec& g = f.grid;
  const double a = target / std::sqrt(pow_int(g.h(), g.dv) * double(g.n_v()));
  const std::size_t kf = g.k_index(IVec3{k, 0, 0});
  for (std::size_t j = 0; j < g.n_v(); ++j) f.at(kf, j) = a;
}

KvField random_field(const GridSpec& g, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  KvField f(g);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf)
    for (std::size_t j = 0; j < g.n_v(); ++j) f.at(kf, j) = cplx{u(rng), u(rng)};
  return f;
}

}  // namespace

TEST_CASE("mixed norm: single-snapshot mode sums") {
  GridSpec g = small_grid();
  KvField f(g);
  set_mode_norm(f, 1, 3.0);

  NormSpec l1{1.0, EXP_INF, 2.0, 0.0, 0.0};
  CHECK(mixed_norm(f, l1) == doctest::Approx(3.0).epsilon(1e-12));

  set_mode_norm(f, -2, 4.0);
  CHECK(mixed_norm(f, l1) == doctest::Approx(7.0).epsilon(1e-12));
  NormSpec l2 = l1;
  l2.p = 2.0;
  CHECK(mixed_norm(f, l2) == doctest::Approx(5.0).epsilon(1e-12));
  NormSpec linf = l1;
  linf.p = EXP_INF;
  CHECK(mixed_norm(f, linf) == doctest::Approx(4.0).epsilon(1e-12));

  NormSpec wk = l1;
  wk.weight_k = 1.0;
  CHECK(mixed_norm(f, wk) ==
        doctest::Approx(std::sqrt(2.0) * 3.0 + std::sqrt(5.0) * 4.0).epsilon(1e-12));
}

TEST_CASE("mixed norm: homogeneity and triangle inequality") {
  GridSpec g = small_grid();
  KvField f = random_field(g, 11);
  KvField h = random_field(g, 12);
  KvField sum(g);
  for (std::size_t i = 0; i < f.data.size(); ++i) sum.data[i] = f.data[i] + h.data[i];
  KvField scaled(g);
  for (std::size_t i = 0; i < f.data.size(); ++i) scaled.data[i] = 2.5 * f.data[i];

  for (double p : {1.0, 2.0, EXP_INF}) {
    NormSpec spec{p, EXP_INF, 2.0, 0.5, 0.0};
    const double nf = mixed_norm(f, spec);
    const double nh = mixed_norm(h, spec);
    CHECK(mixed_norm(scaled, spec) == doctest::Approx(2.5 * nf).epsilon(1e-12));
    CHECK(mixed_norm(sum, spec) <= nf + nh + 1e-12 * (nf + nh));
    CHECK(nf > 0.0);
  }
}

TEST_CASE("mixed norm: time integration and weights") {
  GridSpec g = small_grid();
  KvField f(g);
  set_mode_norm(f, 0, 2.0);

  std::vector<Snapshot> traj;
  for (int i = 0; i <= 8; ++i) traj.push_back({0.125 * i, f});

  // Constant trajectory over [0, 1]: every q matches the snapshot value.
  for (double q : {1.0, 2.0, EXP_INF}) {
    NormSpec spec{1.0, q, 2.0, 0.0, 0.0};
    CHECK(mixed_norm(traj, spec) == doctest::Approx(2.0).epsilon(1e-12));
  }

  // sup_t of t^2 ||.|| over [0, 2].
  std::vector<Snapshot> traj2;
  for (int i = 0; i <= 8; ++i) traj2.push_back({0.25 * i, f});
  NormSpec wt{1.0, EXP_INF, 2.0, 0.0, 2.0};
  CHECK(mixed_norm(traj2, wt) == doctest::Approx(4.0 * 2.0).epsilon(1e-12));

  // L2_t of t ||.|| over [0, 1] -> 2/sqrt(3), trapezoid converges at order 2.
  GridSpec g0 = small_grid();
  g0.K = 0;
  NormSpec wq{1.0, 2.0, 2.0, 0.0, 1.0};
  auto value_with_n = [&](int n) {
    std::vector<double> times(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> table(std::size_t(n), std::vector<double>(1, 2.0));
    for (int i = 0; i < n; ++i) times[std::size_t(i)] = double(i) / double(n - 1);
    return mixed_norm_table(times, table, g0, wq);
  };
  const double exact = 2.0 / std::sqrt(3.0);
  const double e1 = std::abs(value_with_n(101) - exact);
  const double e2 = std::abs(value_with_n(201) - exact);
  CHECK(e1 < 1e-4);
  CHECK(e1 / e2 > 3.5);  // order 2: halving dt divides the error by ~4

  // Guards: non-uniform or decreasing time grids are rejected.
  std::vector<Snapshot> bad = traj;
  bad[3].t += 0.01;
  CHECK_THROWS_AS((void)mixed_norm(bad, wq), std::invalid_argument);
  NormSpec fin{1.0, 2.0, 2.0, 0.0, 0.0};
  std::vector<Snapshot> one;
  one.push_back({0.0, f});
  CHECK_THROWS_AS((void)mixed_norm(one, fin), std::invalid_argument);
}

TEST_CASE("gevrey weight: identity, single mode, overflow threshold") {
  GridSpec g;
  g.dx = 1;
  g.dv = 1;
  g.K = 1;
  g.N_v = 64;
  g.V = 6.0;

  PhaseSpectrum s(g);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf)
    for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
      const Vec3 eta = g.eta_of(mf);
      s.at(kf, mf) = std::exp(-0.5 * dot(eta, eta, 1));
    }

  bool over = true;
  PhaseSpectrum id = gevrey_weight(s, 0.0, 0.5, &over);
  CHECK(!over);
  double d = 0.0;
  for (std::size_t i = 0; i < s.data.size(); ++i)
    d = std::max(d, std::abs(id.data[i] - s.data[i]));
  CHECK(d == 0.0);

  // One mode at k = 1, eta = 0 with r = 1: weight e^{c (1)^{1/2}}.
  PhaseSpectrum mono(g);
  const std::size_t kf1 = g.k_index(IVec3{1, 0, 0});
  const std::size_t mf0 = g.m_index(IVec3{0, 0, 0});
  mono.at(kf1, mf0) = 2.0;
  PhaseSpectrum w = gevrey_weight(mono, 0.5, 1.0, &over);
  CHECK(!over);
  CHECK(std::abs(w.at(kf1, mf0) - 2.0 * std::exp(0.5)) < 1e-14);
  CHECK(std::abs(w.at(g.k_index(IVec3{0, 0, 0}), mf0)) == 0.0);

  // Overflow flag flips exactly where the closed-form maximum crosses 1e300.
  const double r = 0.5;
  auto log_max_amp = [&](double c) {
    double m = -1e308;
    for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
      const double k2 = sq(lat_norm(g.k_of(kf), 1));
      for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
        const double e2 = dot(g.eta_of(mf), g.eta_of(mf), 1);
        m = std::max(m, c * std::pow(k2 + e2, 0.5 / r) - 0.5 * e2);
      }
    }
    return m;
  };
  double lo = 0.0, hi = 16.0;
  REQUIRE(log_max_amp(hi) > std::log(1e300));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_max_amp(mid) > std::log(1e300) ? hi : lo) = mid;
  }
  const double c_star = 0.5 * (lo + hi);
  gevrey_weight(s, 0.999 * c_star, r, &over);
  CHECK(!over);
  gevrey_weight(s, 1.001 * c_star, r, &over);
  CHECK(over);
}

TEST_CASE("sobolev slice norm") {
  GridSpec g = small_grid();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhaseSpectrum s(g);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf)
    for (std::size_t mf = 0; mf < g.n_v(); ++mf) s.at(kf, mf) = cplx{u(rng), u(rng)};

  for (std::size_t kf = 0; kf < g.n_k(); ++kf)
    CHECK(sobolev_norm_k(s, kf, 0.0) ==
          doctest::Approx(s.norm_l2_k(kf)).epsilon(1e-13));

  PhaseSpectrum mono(g);
  const std::size_t mf = g.m_index(IVec3{2, 0, 0});
  mono.at(0, mf) = 3.0;
  const double eta = 2.0 * g.deta();
  const double expect =
      std::pow(std::sqrt(1.0 + eta * eta), 0.425) * 3.0 / std::sqrt(2.0 * g.V);
  CHECK(sobolev_norm_k(mono, 0, 0.425) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("binomial lattice inequality") {
  IneqReport rep = check_binomial_lattice(8, 4);
  CHECK(rep.ok());
  CHECK(rep.n_checked == 8L * 729L * 729L);
  CHECK(rep.worst.slack <= 1.0);
  CHECK(rep.worst.slack > 0.40);  // near-equal splits of large k come closest
  REQUIRE(rep.rows.size() == 8);
  for (const auto& row : rep.rows) CHECK(row.slack <= 1.0);
}

TEST_CASE("interpolation inequalities with sharp minimiser") {
  for (double s : {0.25, 0.5, 0.75}) {
    CAPTURE(s);
    InterpolationReport rep = check_interpolation(s, 48);
    CHECK(rep.ok());
    CHECK(rep.worst_minimiser_reldiff < 0.01);

    // The slack maximum sits at the analytic minimiser and is independent of
    // <eta>: 1/(beta^s + beta^{s-1}) for the low family.
    const double beta = (1.0 - s) / s;
    const double low_sharp = 1.0 / (std::pow(beta, s) + std::pow(beta, s - 1.0));
    CHECK(rep.low.worst.slack == doctest::Approx(low_sharp).epsilon(1e-9));

    double neg_sharp;
    if (s < 0.5) {
      const double b = (1.0 - 2.0 * s) / (2.0 * s);
      neg_sharp = 1.0 / (std::pow(b, 2.0 * s) + std::pow(b, 2.0 * s - 1.0));
    } else if (s == 0.5) {
      neg_sharp = 1.0;  // the second term alone matches the left side
    } else {
      // rhs = eps B^a + eps^{-b} B^g minimises to (b^{1/(b+1)} + b^{-b/(b+1)}) B^{-2s}
      const double b = (1.0 - s) / (2.0 * s - 1.0);
      neg_sharp = 1.0 / (std::pow(b, 1.0 / (b + 1.0)) + std::pow(b, -b / (b + 1.0)));
    }
    CHECK(rep.negative.worst.slack == doctest::Approx(neg_sharp).epsilon(1e-9));
  }
}

TEST_CASE("symbol powers on the phase spectrum") {
  GridSpec g = small_grid();
  PhaseSpectrum s(g);
  const std::size_t kf = g.k_index(IVec3{1, 0, 0});
  const std::size_t mf = g.m_index(IVec3{2, 0, 0});
  s.at(kf, mf) = cplx{1.0, -2.0};

  PowerLawSymbol A{2.0, 1.0, 3.0, 0.0};
  const double eta = 2.0 * g.deta();
  const double phi = 2.0 * 2.0 * 1.0 + 3.0 * eta;
  PhaseSpectrum out = apply_symbol_power(s, A, 2.0, 3);
  CHECK(std::abs(out.at(kf, mf) - pow_int(phi, 3) * cplx{1.0, -2.0}) < 1e-12);
  CHECK(std::abs(out.at(kf, (mf + 1) % g.n_v())) == 0.0);
}

TEST_CASE("split lemma on a random spectrum") {
  GridSpec g;
  g.dx = 1;
  g.dv = 1;
  g.K = 2;
  g.N_v = 32;
  g.V = 6.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhaseSpectrum h(g);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf)
    for (std::size_t mf = 0; mf < g.n_v(); ++mf) h.at(kf, mf) = cplx{u(rng), u(rng)};

  PowerLawSymbol A1{0.3, 2.0, 0.0, 0.0};
  PowerLawSymbol A2{0.0, 0.0, 1.1, 0.5};
  IneqReport rep = check_split_lemma(h, A1, A2, 6, 0.5, 2.0, 9, {0.0, 0.5});
  CHECK(rep.ok());
  CHECK(rep.worst.slack <= 1.0 + 1e-12);
  CHECK(rep.n_checked > 0);

  // Degenerate A2 = 0: the 2^m split bound has slack exactly 2^{-m}.
  PowerLawSymbol zero{};
  IneqReport dg = check_split_lemma(h, A1, zero, 3, 0.5, 2.0, 5, {0.0});
  CHECK(dg.ok());
  REQUIRE(dg.rows.size() == 6);  // supT and L2T rows for m = 1..3
  for (int m = 1; m <= 3; ++m) {
    CHECK(dg.rows[std::size_t(2 * (m - 1))].slack ==
          doctest::Approx(std::pow(2.0, -m)).epsilon(1e-12));
    CHECK(dg.rows[std::size_t(2 * (m - 1) + 1)].slack ==
          doctest::Approx(std::pow(2.0, -m)).epsilon(1e-12));
  }
}

TEST_CASE("minkowski-fubini rearrangement bound") {
  IneqReport rep = check_minkowski_fubini(20, 2, 3, 9, 12345ULL);
  CHECK(rep.ok());
  CHECK(rep.n_checked == 20);
  CHECK(rep.worst.slack <= 1.0);
  CHECK(rep.worst.slack > 0.05);  // random data should not be wildly slack
  for (const auto& row : rep.rows) CHECK(row.slack <= 1.0);
}
