#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "collapse/cir_params.hpp"
#include "collapse/rng.hpp"
#include "collapse/units.hpp"

namespace collapse {

enum class EnergyScheme {
  truncation,  // full-truncation Euler on the square-root SDE
  exact,       // noncentral-chi-square transition between output times
};

EnergyScheme scheme_from_string(std::string_view name);

struct EnergyPath {
  std::vector<double> times;
  std::vector<double> energies;
};

// One draw of the transition law over an interval t: with (alpha, beta) from
// the interval, 2 alpha E is noncentral chi-square with df = 6 and
// noncentrality 2 alpha beta E0. t = 0 returns E0; D = 0 degenerates to the
// deterministic decay E0 exp(-kappa t).
double exact_transition_sample(RngStream& stream, double e0,
                               const CirParams& cir, double t);

// Single path of dE = (3D/m - kappa E) dt + sqrt(2 D E / m) dW recorded on a
// uniform time grid. The truncation scheme resolves every dt; the exact
// scheme jumps grid point to grid point through the transition law.
EnergyPath simulate_energy(RngStream& stream, double e0, double diffusion,
                           double mass, double kappa, double t_max, double dt,
                           EnergyScheme scheme);

// Ensemble of final-segment snapshots, path-parallel. energies is row-major
// [path][output]; path i draws from stream (seed, i), so serial and OpenMP
// execution produce bit-identical results.
struct EnergyEnsemble {
  std::vector<double> times;
  std::vector<double> energies;
  std::size_t n_paths = 0;
  std::size_t n_outputs = 0;

  double at(std::size_t path, std::size_t output) const {
    return energies[path * n_outputs + output];
  }
  std::vector<double> column(std::size_t output) const;
};

EnergyEnsemble simulate_energy_ensemble(std::uint64_t seed,
                                        std::size_t n_paths, double e0,
                                        double diffusion, double mass,
                                        double kappa, double t_max, double dt,
                                        EnergyScheme scheme,
                                        std::size_t n_outputs, bool parallel);

// Observer-frame elapsed time for a tabulated Lorentz-factor history:
// t = integral of gamma over rest-frame time (trapezoid).
double cosmo_time_of_proper(std::span<const double> t_prime,
                            std::span<const double> gamma);

// Spread of that time estimate, sqrt(hbar/(m c^2) * integral of gamma^2).
double time_estimate_stddev(std::span<const double> t_prime,
                            std::span<const double> gamma, double mass_kg,
                            const PhysicalConstants& consts);

}  // namespace collapse
