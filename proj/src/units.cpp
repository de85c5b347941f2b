#include "collapse/units.hpp"

#include <cmath>
#include <stdexcept>

namespace collapse {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void PhysicalConstants::validate() const {
  require(hbar > 0.0, "hbar must be positive");
  require(c > 0.0, "c must be positive");
  require(nucleon_mass > 0.0, "nucleon_mass must be positive");
}

void CslParams::validate() const {
  // lambda0 = 0 is allowed and means collapse switched off (D = 0); the
  // steady-state ops reject it downstream where it actually diverges.
  require(lambda0 >= 0.0, "lambda0 must be nonnegative");
  require(alpha_csl > 0.0, "alpha_csl must be positive");
  require(mass_exponent == 2, "mass_exponent is fixed to 2");
}

void CosmologyParams::validate() const {
  require(hubble >= 0.0, "hubble must be nonnegative");
}

double lambda_of_mass(const CslParams& params, const PhysicalConstants& consts,
                      double mass_kg) {
  params.validate();
  consts.validate();
  require(mass_kg > 0.0, "mass must be positive");
  const double ratio = mass_kg / consts.nucleon_mass;
  return params.lambda0 * ratio * ratio;
}

double diffusion_coefficient(const CslParams& params,
                             const PhysicalConstants& consts, double mass_kg) {
  const double lambda = lambda_of_mass(params, consts, mass_kg);
  return lambda * params.alpha_csl * consts.hbar * consts.hbar / 4.0;
}

double steady_state_width(double diffusion, double mass_kg,
                          const PhysicalConstants& consts) {
  require(mass_kg > 0.0, "mass must be positive");
  if (diffusion <= 0.0)
    throw std::domain_error(
        "steady_state_width: diffusion must be positive (free spreading never "
        "settles)");
  const double h3 = consts.hbar * consts.hbar * consts.hbar;
  return std::pow(h3 / (8.0 * diffusion * mass_kg), 0.25);
}

double localization_time(double diffusion, double mass_kg,
                         const PhysicalConstants& consts) {
  require(mass_kg > 0.0, "mass must be positive");
  if (diffusion <= 0.0)
    throw std::domain_error("localization_time: diffusion must be positive");
  return std::sqrt(mass_kg * consts.hbar / diffusion);
}

DerivedParams derive_params(const CslParams& params,
                            const PhysicalConstants& consts, double mass_kg) {
  DerivedParams out;
  out.lambda_m = lambda_of_mass(params, consts, mass_kg);
  out.diffusion = diffusion_coefficient(params, consts, mass_kg);
  out.sigma_inf = steady_state_width(out.diffusion, mass_kg, consts);
  out.t_loc = localization_time(out.diffusion, mass_kg, consts);
  return out;
}

std::vector<Table1Row> species_table(const std::vector<ParticleSpecies>& species,
                                     const CslParams& params,
                                     const PhysicalConstants& consts) {
  std::vector<Table1Row> rows;
  rows.reserve(species.size());
  for (const auto& sp : species) {
    const DerivedParams d = derive_params(params, consts, sp.mass_kg);
    rows.push_back({sp.name, sp.mass_kg, d.lambda_m, d.diffusion, d.sigma_inf,
                    d.t_loc});
  }
  return rows;
}

DimensionlessGroups dimensionless_groups(double diffusion, double mass_kg,
                                         double hubble, double t, double e0) {
  require(diffusion > 0.0, "diffusion must be positive");
  require(mass_kg > 0.0, "mass must be positive");
  require(hubble >= 0.0, "hubble must be nonnegative");
  require(t >= 0.0, "time must be nonnegative");
  require(e0 > 0.0, "reference energy must be positive");
  if (t == 0.0)
    throw std::domain_error(
        "dimensionless_groups: alpha_cir is undefined at t = 0");

  DimensionlessGroups g;
  g.omega = hubble * mass_kg / diffusion * e0;
  g.beta = std::exp(-hubble * t);
  g.dt_over_m = diffusion * t / (mass_kg * e0);
  if (hubble * t < 1e-8) {
    g.alpha_cir = mass_kg / (diffusion * t) * e0;
  } else {
    g.alpha_cir = g.omega / (-std::expm1(-hubble * t));
  }
  return g;
}

double energy_gain_estimate(const CslParams& params,
                            const PhysicalConstants& consts, double mass_kg,
                            double t) {
  require(t >= 0.0, "time must be nonnegative");
  const double d = diffusion_coefficient(params, consts, mass_kg);
  const double rest = mass_kg * consts.c * consts.c;
  return d * t / (mass_kg * rest);
}

}  // namespace collapse
