#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "collapse/rng.hpp"

namespace collapse {

// Classical phase-space point of a localized packet, dimensionless units
// (hbar = 1). Position and momentum diffuse under one shared Brownian vector.
struct PhaseState {
  std::array<double, 3> position{};
  std::array<double, 3> momentum{};
  double t = 0.0;
};

// One Euler step of the shared-noise pair
//   dX = (P/m) dt + sqrt(hbar/m) dW,   dP = sqrt(2D) dW,
// with the SAME dW in both lines.
PhaseState phase_step(const PhaseState& state, double diffusion, double mass,
                      double dt, const std::array<double, 3>& dw);

// Increment of the rest-frame kinetic energy driven by the same noise:
//   dE' = (3D/m) dt + (sqrt(2D)/m) P . dW.
double rest_energy_increment(const std::array<double, 3>& momentum,
                             double diffusion, double mass, double dt,
                             const std::array<double, 3>& dw);

// Ensemble moments per output time. mean_eprime accumulates the energy
// increments; mean_kinetic recomputes |P|^2/2m from the momentum path, and
// rms_energy_gap measures the discrepancy between the two routes (an O(dt)
// strong-convergence diagnostic).
struct PhaseMomentsRow {
  double t = 0.0;
  std::array<double, 3> var_p{};
  std::array<double, 3> cov_xp{};
  double mean_eprime = 0.0;
  double mean_kinetic = 0.0;
  double rms_energy_gap = 0.0;
};

// Path-parallel ensemble. Paths are grouped into fixed blocks whose partial
// sums are reduced in block order, so the result is bit-identical for any
// thread count (and equal to the serial run).
std::vector<PhaseMomentsRow> simulate_phase_ensemble(
    std::uint64_t seed, std::size_t n_paths, double diffusion, double mass,
    double dt, double t_max, std::size_t n_outputs, bool parallel,
    const std::array<double, 3>& p0 = {0.0, 0.0, 0.0});

}  // namespace collapse
