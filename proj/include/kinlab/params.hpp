#pragma once

#include "kinlab/grid.hpp"

namespace kinlab {

// Run-level model and discretisation parameters shared by the CLI drivers.
struct ModelParams {
  double s = 0.5;        // angular singularity exponent, 0 < s < 1
  double gamma = 0.0;    // kinetic exponent, hard potentials 0 <= gamma <= 1
  int d_x = 1;
  int d_v = 1;
  int K = 16;            // max spatial wavenumber per axis
  double V = 8.0;        // velocity half-width
  int N_v = 64;          // velocity points per axis
  double theta_min = PI / 128.0;
  int n_sphere = 32;     // polar nodes across the angular panels
  double dt = 1e-3;
  double t_max = 1.0;
  double tol_balance = 1e-8;   // per-step dissipativity slack
  double tol_fit = 0.10;       // relative tolerance on fitted exponents

  void validate() const {
    require(s > 0.0 && s < 1.0, "ModelParams: s must lie in (0,1)");
    require(gamma >= 0.0 && gamma <= 1.0, "ModelParams: gamma must lie in [0,1]");
    require(d_x >= 1 && d_x <= 3, "ModelParams: d_x in 1..3");
    require(d_v == 1 || d_v == 3, "ModelParams: d_v in {1,3}");
    require(K >= 1, "ModelParams: K >= 1");
    require(N_v >= 8 && N_v % 2 == 0, "ModelParams: N_v even and >= 8");
    require(V > 0.0, "ModelParams: V > 0");
    require(theta_min > 0.0 && theta_min < PI / 4.0, "ModelParams: theta_min in (0, pi/4)");
    require(n_sphere >= 8, "ModelParams: n_sphere >= 8");
    require(dt > 0.0 && t_max > 0.0, "ModelParams: positive dt, t_max");
  }

  GridSpec grid() const {
    GridSpec g;
    g.dx = d_x;
    g.dv = d_v;
    g.K = K;
    g.N_v = N_v;
    g.V = V;
    return g;
  }
};

}  // namespace kinlab
