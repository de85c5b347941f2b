#pragma once

#include <string>
#include <vector>

namespace collapse {

// Fundamental constants in SI units (CODATA 2018). This module is the only
// place SI magnitudes appear; everything downstream works in dimensionless
// variables to keep the floating point well conditioned.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;             // J s
  double c = 2.99792458e8;                   // m/s
  double nucleon_mass = 1.67262192369e-27;   // kg

  void validate() const;
};

// Localization rate and inverse length scale of the collapse noise. The
// per-nucleon rate lambda0 is amplified as (m/m_n)^2; only the combination
// lambda*alpha enters the diffusion strength, so alpha_csl is kept as an
// independent knob.
struct CslParams {
  double lambda0 = 1e-16;     // 1/s, per nucleon
  double alpha_csl = 1e14;    // 1/m^2
  int mass_exponent = 2;

  void validate() const;
};

struct ParticleSpecies {
  std::string name;
  double mass_kg = 0.0;
};

struct CosmologyParams {
  double hubble = 0.0;  // 1/s, constant adot/a; zero means no expansion

  void validate() const;
};

struct DerivedParams {
  double lambda_m = 0.0;    // 1/s
  double diffusion = 0.0;   // J^2 s / m^2
  double sigma_inf = 0.0;   // m
  double t_loc = 0.0;       // s
};

double lambda_of_mass(const CslParams& params, const PhysicalConstants& consts,
                      double mass_kg);

double diffusion_coefficient(const CslParams& params,
                             const PhysicalConstants& consts, double mass_kg);

// Steady-state packet width (hbar^3 / (8 D m))^(1/4). Throws if D == 0: with
// collapse switched off the packet spreads forever.
double steady_state_width(double diffusion, double mass_kg,
                          const PhysicalConstants& consts);

// Settling time sqrt(m hbar / D); an order-of-magnitude quantity.
double localization_time(double diffusion, double mass_kg,
                         const PhysicalConstants& consts);

DerivedParams derive_params(const CslParams& params,
                            const PhysicalConstants& consts, double mass_kg);

struct Table1Row {
  std::string name;
  double mass_kg = 0.0;
  double lambda_m = 0.0;
  double diffusion = 0.0;
  double sigma_inf = 0.0;
  double t_loc = 0.0;
};

std::vector<Table1Row> species_table(const std::vector<ParticleSpecies>& species,
                                     const CslParams& params,
                                     const PhysicalConstants& consts);

// Dimensionless groups of the observer-frame energy diffusion, with energies
// measured in units of e0 (pass e0 = 1 for raw SI values):
//   omega     = hubble * m / D * e0
//   beta      = exp(-hubble * t)
//   alpha_cir = omega / (1 - beta), with the analytic limit m/(D t) * e0
//               when hubble * t < 1e-8
//   dt_over_m = D t / (m e0)
struct DimensionlessGroups {
  double omega = 0.0;
  double alpha_cir = 0.0;
  double beta = 1.0;
  double dt_over_m = 0.0;
};

DimensionlessGroups dimensionless_groups(double diffusion, double mass_kg,
                                         double hubble, double t, double e0);

// Expected energy gain D t / m in units of the rest energy m c^2. The ratio
// is independent of the mass when lambda scales as m^2.
double energy_gain_estimate(const CslParams& params,
                            const PhysicalConstants& consts, double mass_kg,
                            double t);

}  // namespace collapse
