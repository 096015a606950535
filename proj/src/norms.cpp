#include "kinlab/norms.hpp"

#include <algorithm>
#include <cmath>

namespace kinlab {

namespace {

// L^q on a uniform time grid: trapezoid for finite q, supremum for q = inf.
double time_lq(const std::vector<double>& times, const std::vector<double>& vals,
               double q) {
  if (q == EXP_INF || times.size() == 1) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, v);
    return m;
  }
  const double dt = times[1] - times[0];
  KahanSum acc;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double w = (i == 0 || i + 1 == vals.size()) ? 0.5 * dt : dt;
    acc.add(w * std::pow(vals[i], q));
  }
  return std::pow(acc.value(), 1.0 / q);
}

}  // namespace

double mixed_norm_table(const std::vector<double>& times,
                        const std::vector<std::vector<double>>& table, const GridSpec& g,
                        const NormSpec& spec) {
  spec.validate();
  require(!times.empty() && times.size() == table.size(),
          "mixed_norm: need matching, non-empty times/table");
  if (spec.q != EXP_INF)
    require(times.size() >= 2, "mixed_norm: finite q needs at least two snapshots");
  if (times.size() >= 2) {
    const double dt = times[1] - times[0];
    require(dt > 0.0, "mixed_norm: times must increase");
    for (std::size_t i = 1; i < times.size(); ++i)
      require(std::abs(times[i] - times[i - 1] - dt) <= 1e-9 * dt,
              "mixed_norm: time grid must be uniform");
  }
  const std::size_t n_k = g.n_k();
  for (const auto& row : table)
    require(row.size() == n_k, "mixed_norm: table row size mismatch");

  std::vector<double> vals(times.size());
  KahanSum acc;
  double sup = 0.0;
  for (std::size_t kf = 0; kf < n_k; ++kf) {
    const double wk = std::pow(bracket(g.k_of(kf)), spec.weight_k);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double wt =
          spec.weight_t == 0.0 ? 1.0 : std::pow(times[i], spec.weight_t);
      vals[i] = wt * table[i][kf];
    }
    const double zk = wk * time_lq(times, vals, spec.q);
    if (spec.p == EXP_INF)
      sup = std::max(sup, zk);
    else
      acc.add(std::pow(zk, spec.p));
  }
  return spec.p == EXP_INF ? sup : std::pow(acc.value(), 1.0 / spec.p);
}

double mixed_norm(const std::vector<Snapshot>& traj, const NormSpec& spec) {
  require(!traj.empty(), "mixed_norm: empty trajectory");
  const GridSpec& g = traj.front().field.grid;
  std::vector<double> times(traj.size());
  std::vector<std::vector<double>> table(traj.size(),
                                         std::vector<double>(g.n_k()));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    require(traj[i].field.grid.same(g), "mixed_norm: snapshot grids differ");
    times[i] = traj[i].t;
    for (std::size_t kf = 0; kf < g.n_k(); ++kf)
      table[i][kf] = traj[i].field.norm_l2_k(kf);
  }
  return mixed_norm_table(times, table, g, spec);
}

double mixed_norm(const KvField& f, const NormSpec& spec) {
  require(spec.q == EXP_INF && spec.weight_t == 0.0,
          "mixed_norm: single snapshot needs q = inf and weight_t = 0");
  std::vector<Snapshot> traj;
  traj.push_back({0.0, f});
  return mixed_norm(traj, spec);
}

PhaseSpectrum gevrey_weight(const PhaseSpectrum& s, double c, double r,
                            bool* overflow) {
  require(r > 0.0, "gevrey_weight: r must be positive");
  const GridSpec& g = s.grid;
  PhaseSpectrum out(g);
  bool over = false;
  const double log_cap = std::log(1e300);
  for (std::size_t kf = 0; kf < g.n_k(); ++kf) {
    const double k2 = sq(lat_norm(g.k_of(kf), g.dx));
    for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
      const Vec3 eta = g.eta_of(mf);
      const double a = c * std::pow(k2 + dot(eta, eta, g.dv), 0.5 / r);
      const cplx sv = s.at(kf, mf);
      const double mag = std::abs(sv);
      cplx z{0.0, 0.0};
      if (mag > 0.0) {
        // Work with log magnitudes: the weight alone may overflow a double
        // even when the weighted amplitude is representable.  Amplitudes past
        // e^709 are clamped to keep the array finite; the flag is what marks
        // the result unusable.
        const double lw = a + std::log(mag);
        if (lw > log_cap) over = true;
        z = (a <= 700.0 && lw <= 705.0)
                ? std::exp(a) * sv
                : std::polar(std::exp(std::min(lw, 709.0)), std::arg(sv));
      }
      out.at(kf, mf) = z;
    }
  }
  if (overflow) *overflow = over;
  return out;
}

double sobolev_norm_k(const PhaseSpectrum& s, std::size_t kf, double r) {
  const GridSpec& g = s.grid;
  KahanSum acc;
  for (std::size_t mf = 0; mf < g.n_v(); ++mf) {
    const double br = bracket(g.eta_of(mf), g.dv);
    acc.add(std::pow(br, 2.0 * r) * std::norm(s.at(kf, mf)));
  }
  return std::sqrt(acc.value() * std::pow(2.0 * g.V, -g.dv));
}

}  // namespace kinlab
