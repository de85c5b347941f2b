#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "collapse/units.hpp"
#include "test_util.hpp"

using namespace collapse;
using test_util::round_sig;

namespace {

const PhysicalConstants kConsts;
const CslParams kGrw;  // defaults are the GRW choice

// Reference species and the published rounded values they must reproduce:
// sigma_inf at the quoted number of significant digits, t_loc within a
// factor of two (order-level quantities).
struct Reference {
  const char* name;
  double mass_kg;
  double sigma_inf_quoted;
  int sigma_inf_digits;
  double t_loc_quoted;
};

const Reference kTable[] = {
    {"neutrino", 1.78266192e-37, 1.3e6, 2, 180.0 * 365.25 * 86400.0},
    {"electron", 9.1093837015e-31, 12.0, 2, 41.0 * 86400.0},
    {"proton", 1.67262192369e-27, 0.04, 1, 23.0 * 3600.0},
    {"iron atom", 9.2732804e-26, 0.002, 1, 3.0 * 3600.0},
    {"10000 u", 1.6605390666e-23, 4.2e-5, 2, 14.0 * 60.0},
};

}  // namespace

TEST_SUITE_BEGIN("units");

TEST_CASE("published width and settling values are reproduced") {
  for (const auto& ref : kTable) {
    CAPTURE(ref.name);
    const DerivedParams d = derive_params(kGrw, kConsts, ref.mass_kg);
    CHECK(round_sig(d.sigma_inf, ref.sigma_inf_digits) ==
          doctest::Approx(ref.sigma_inf_quoted).epsilon(1e-12));
    CHECK(d.t_loc > 0.5 * ref.t_loc_quoted);
    CHECK(d.t_loc < 2.0 * ref.t_loc_quoted);
  }
}

TEST_CASE("species_table is deterministic and row-complete") {
  std::vector<ParticleSpecies> species;
  for (const auto& ref : kTable) species.push_back({ref.name, ref.mass_kg});
  const auto rows = species_table(species, kGrw, kConsts);
  const auto again = species_table(species, kGrw, kConsts);
  REQUIRE(rows.size() == species.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].name == species[i].name);
    CHECK(rows[i].sigma_inf == again[i].sigma_inf);
    CHECK(rows[i].t_loc == again[i].t_loc);
  }
  CHECK(species_table({}, kGrw, kConsts).empty());
}

TEST_CASE("rate scales with the squared mass ratio") {
  const double m = kConsts.nucleon_mass;
  const double l1 = lambda_of_mass(kGrw, kConsts, m);
  CHECK(l1 == doctest::Approx(kGrw.lambda0).epsilon(1e-12));
  CHECK(lambda_of_mass(kGrw, kConsts, 2.0 * m) ==
        doctest::Approx(4.0 * l1).epsilon(1e-12));
}

TEST_CASE("diffusion strength: switched-off and upper-bound values") {
  CslParams off = kGrw;
  off.lambda0 = 0.0;
  CHECK(diffusion_coefficient(off, kConsts, kConsts.nucleon_mass) == 0.0);

  // lambda*alpha = 1e8 for a nucleon gives D = 1e8 hbar^2 / 4.
  CslParams cub = kGrw;
  cub.lambda0 = 1e8 / cub.alpha_csl;
  const double d = diffusion_coefficient(cub, kConsts, kConsts.nucleon_mass);
  CHECK(d == doctest::Approx(1e8 * kConsts.hbar * kConsts.hbar / 4.0)
                 .epsilon(1e-12));
}

TEST_CASE("width and settling-time scaling laws") {
  const double m = kConsts.nucleon_mass;
  const double d0 = diffusion_coefficient(kGrw, kConsts, m);
  CHECK(steady_state_width(16.0 * d0, m, kConsts) ==
        doctest::Approx(0.5 * steady_state_width(d0, m, kConsts))
            .epsilon(1e-12));
  CHECK(localization_time(4.0 * d0, m, kConsts) ==
        doctest::Approx(0.5 * localization_time(d0, m, kConsts))
            .epsilon(1e-12));
}

TEST_CASE("zero diffusion has no steady state") {
  CHECK_THROWS_AS(steady_state_width(0.0, kConsts.nucleon_mass, kConsts),
                  std::domain_error);
  CHECK_THROWS_AS(localization_time(0.0, kConsts.nucleon_mass, kConsts),
                  std::domain_error);
}

TEST_CASE("dimensionless groups: limits and identities") {
  const double d = diffusion_coefficient(kGrw, kConsts, kConsts.nucleon_mass);
  const double m = kConsts.nucleon_mass;

  SUBCASE("no expansion") {
    const auto g = dimensionless_groups(d, m, 0.0, 1e17, 1.0);
    CHECK(g.beta == 1.0);
    CHECK(g.omega == 0.0);
    CHECK(g.alpha_cir == doctest::Approx(m / (d * 1e17)).epsilon(1e-12));
    CHECK(g.dt_over_m == doctest::Approx(d * 1e17 / m).epsilon(1e-12));
  }

  SUBCASE("half-life of the friction factor") {
    const double hubble = 2.2e-18;
    const auto g = dimensionless_groups(d, m, hubble, std::log(2.0) / hubble,
                                        1.0);
    CHECK(g.beta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.alpha_cir == doctest::Approx(g.omega / (1.0 - g.beta))
                             .epsilon(1e-12));
  }

  SUBCASE("tiny but nonzero expansion matches the series limit") {
    const double t = 1.0e8;
    const auto a = dimensionless_groups(d, m, 1e-30, t, 1.0);
    const auto b = dimensionless_groups(d, m, 0.0, t, 1.0);
    CHECK(a.alpha_cir == doctest::Approx(b.alpha_cir).epsilon(1e-9));
  }

  SUBCASE("energy unit rescales the energy-valued groups") {
    const double e0 = 3.5e-11;
    const auto si = dimensionless_groups(d, m, 2.2e-18, 1e17, 1.0);
    const auto scaled = dimensionless_groups(d, m, 2.2e-18, 1e17, e0);
    CHECK(scaled.omega == doctest::Approx(si.omega * e0).epsilon(1e-12));
    CHECK(scaled.alpha_cir ==
          doctest::Approx(si.alpha_cir * e0).epsilon(1e-12));
    CHECK(scaled.dt_over_m ==
          doctest::Approx(si.dt_over_m / e0).epsilon(1e-12));
    CHECK(scaled.beta == si.beta);
  }

  SUBCASE("undefined transition interval") {
    CHECK_THROWS_AS(dimensionless_groups(d, m, 0.0, 0.0, 1.0),
                    std::domain_error);
  }
}

TEST_CASE("energy gain is mass independent and vanishes at t = 0") {
  const double t = 1e17;
  const double g1 = energy_gain_estimate(kGrw, kConsts, 1.7e-27, t);
  const double g2 = energy_gain_estimate(kGrw, kConsts, 9.1e-31, t);
  const double g3 = energy_gain_estimate(kGrw, kConsts, 1.66e-23, t);
  CHECK(std::fabs(g2 / g1 - 1.0) < 1e-12);
  CHECK(std::fabs(g3 / g1 - 1.0) < 1e-12);
  CHECK(energy_gain_estimate(kGrw, kConsts, 1.7e-27, 0.0) == 0.0);

  // The directly computed value sits about two orders of magnitude below the
  // commonly quoted ~1e-15; record the computed number, don't force it.
  CHECK(g1 == doctest::Approx(1.1057459428082331e-17).epsilon(1e-9));
  CHECK(g1 < 1e-15);
}

TEST_CASE("parameter validation") {
  CslParams bad = kGrw;
  bad.lambda0 = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = kGrw;
  bad.alpha_csl = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CslParams off = kGrw;
  off.lambda0 = 0.0;
  CHECK_NOTHROW(off.validate());
}

TEST_SUITE_END();
