#pragma once

#include <limits>
#include <vector>

#include "kinlab/field.hpp"

namespace kinlab {

inline constexpr double EXP_INF = std::numeric_limits<double>::infinity();

// Nested mixed norm  l^p_k ( L^q_T ( t^{weight_t} <k>^{weight_k} ||c_k(t)||_{L^2_v} ) ),
// inner-to-outer: v, then T, then k.  Time integrals by trapezoid rule on a
// uniform snapshot grid; q = inf takes the discrete supremum.  The k-sum has
// no (2 pi)^{dx} factor: it is the plain counting-measure l^p over modes.
struct NormSpec {
  double p = 1.0;
  double q = EXP_INF;
  double r = 2.0;
  double weight_k = 0.0;
  double weight_t = 0.0;

  void validate() const {
    require(p >= 1.0, "NormSpec: p must be >= 1 (inf allowed)");
    require(q >= 1.0, "NormSpec: q must be >= 1 (inf allowed)");
    require(r == 2.0, "NormSpec: only r = 2 is implemented");
  }
};

struct Snapshot {
  double t = 0.0;
  KvField field;
};

// table[i][kf] = ||c_k(t_i)||_{L^2_v} (bare grid norm per mode).
double mixed_norm_table(const std::vector<double>& times,
                        const std::vector<std::vector<double>>& table, const GridSpec& g,
                        const NormSpec& spec);
double mixed_norm(const std::vector<Snapshot>& traj, const NormSpec& spec);
double mixed_norm(const KvField& f, const NormSpec& spec);  // single snapshot, t = 0

// Multiply each amplitude by e^{c (|k|^2 + |eta|^2)^{1/(2r)}}.  Sets
// *overflow when any weighted amplitude exceeds 1e300.
PhaseSpectrum gevrey_weight(const PhaseSpectrum& s, double c, double r,
                            bool* overflow = nullptr);

// H^r_v norm of one k-slice: ( (2V)^{-dv} sum_m <eta_m>^{2r} |s|^2 )^{1/2}.
double sobolev_norm_k(const PhaseSpectrum& s, std::size_t kf, double r);

}  // namespace kinlab
