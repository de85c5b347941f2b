#pragma once

#include <cstddef>
#include <vector>

namespace collapse {

// Forward-equation solution state: density p(E, t) on a vertex-centered grid
// whose first node is E = 0.
struct FpGrid {
  std::vector<double> energies;
  std::vector<double> density;
  double t = 0.0;
};

struct FpMoments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

struct FpConfig {
  double e0 = 1.0;        // initial energy (delta location)
  double d_over_m = 1.0;  // D/m
  double kappa = 0.0;
  double t_max = 0.1;
  double dt = 1e-4;
  std::size_t n_cells = 4000;
  double e_max = 0.0;       // 0 -> automatic (>= 14 sd beyond the mean)
  double init_width = 0.0;  // 0 -> max(3 cells, 1e-3 e0)
  double mass_tol = 1e-6;   // abort threshold on mass loss per unit time
  std::vector<double> energies;  // optional explicit nonuniform grid

  void validate() const;
};

// Solves the forward equation of the energy diffusion,
//   dp/dt = d^2/dE^2 [ (D/m) E p ] + d/dE [ (kappa E - 3D/m) p ],
// in conservative flux form F = ((2D/m) - kappa E) p - (D/m) E dp/dE with
// Chang-Cooper face weights and fully implicit time stepping (tridiagonal
// M-matrix solves: positivity and exact discrete mass conservation up to
// roundoff). Zero-flux boundaries at E = 0 and at the far edge. The initial
// delta at e0 is represented by a narrow Gaussian.
FpGrid solve_forward(const FpConfig& cfg);

// Trapezoid mass/mean/variance; identical weights to the solver's own
// control volumes, so the reported mass is the exactly conserved one.
FpMoments mass_and_moments(const FpGrid& grid);

}  // namespace collapse
