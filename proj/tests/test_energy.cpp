#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "collapse/cir_params.hpp"
#include "collapse/energy.hpp"
#include "collapse/rng.hpp"
#include "collapse/stats.hpp"
#include "collapse/units.hpp"
#include "test_util.hpp"

using namespace collapse;
using test_util::mean_of;
using test_util::variance_of;

namespace {

// Norm-squared endpoint of a six-dimensional Gaussian walk started on a
// sphere of radius r0 and run to time t in n sub-steps: the squared Bessel
// construction the exact sampler must reproduce in law.
double squared_bessel_walk(RngStream& s, double r0, double t, int n) {
  std::array<double, 6> x{r0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const double step = std::sqrt(t / n);
  for (int k = 0; k < n; ++k)
    for (auto& c : x) c += step * s.next_normal();
  double r2 = 0.0;
  for (const double c : x) r2 += c * c;
  return r2;
}

}  // namespace

TEST_SUITE_BEGIN("energy");

TEST_CASE("scheme names") {
  CHECK(scheme_from_string("exact") == EnergyScheme::exact);
  CHECK(scheme_from_string("truncation") == EnergyScheme::truncation);
  CHECK_THROWS_AS(scheme_from_string("midpoint"), std::invalid_argument);
}

TEST_CASE("switched-off noise decays deterministically") {
  RngStream s(1, 0);
  CirParams off;  // sigma2 = 0: no noise, pure friction
  off.kappa = 0.7;
  CHECK(exact_transition_sample(s, 2.0, off, 1.5) ==
        doctest::Approx(2.0 * std::exp(-0.7 * 1.5)).epsilon(1e-12));
  CHECK(exact_transition_sample(s, 2.0, off, 0.0) == 2.0);

  // The path simulator accepts diffusion = 0 too and decays on the grid.
  RngStream s2(1, 1);
  const auto path = simulate_energy(s2, 2.0, 0.0, 1.0, 0.7, 1.5, 1.5e-3,
                                    EnergyScheme::exact);
  CHECK(path.energies.back() ==
        doctest::Approx(2.0 * std::exp(-0.7 * 1.5)).epsilon(1e-9));
}

TEST_CASE("zero interval returns the initial energy") {
  RngStream s(2, 0);
  const CirParams cir = CirParams::from_physical(0.5, 1.0, 0.3, 1.0);
  CHECK(exact_transition_sample(s, 1.7, cir, 0.0) == 1.7);
}

TEST_CASE("linear mean growth without expansion") {
  const double d = 0.5, m = 2.0, t = 1.0, e0 = 1.0;
  const std::size_t n = 20000;
  const auto ens = simulate_energy_ensemble(/*seed=*/90, n, e0, d, m,
                                            /*kappa=*/0.0, t, /*dt=*/t,
                                            EnergyScheme::exact,
                                            /*n_outputs=*/1, /*parallel=*/true);
  const auto finals = ens.column(0);
  const double want_mean = e0 + 3.0 * d * t / m;
  const CirParams cir = CirParams::from_physical(d, m, 0.0, t);
  const auto tm = transition_moments(e0, cir);
  REQUIRE(tm.mean == doctest::Approx(want_mean).epsilon(1e-12));
  const double se = std::sqrt(tm.variance / double(n));
  CHECK(std::fabs(mean_of(finals) - want_mean) < 4.0 * se);
  for (const double e : finals) REQUIRE(e >= 0.0);
}

TEST_CASE("exact sampler agrees with the squared Bessel construction") {
  // With kappa = 0 the rescaled energy 2mE/D is the squared norm of a
  // six-dimensional Brownian motion; compare the two ensembles by a
  // two-sample KS test.
  const double d = 1.0, m = 1.0, e0 = 1.0, t = 0.5;
  const std::size_t n = 20000;

  const auto ens = simulate_energy_ensemble(/*seed=*/91, n, e0, d, m, 0.0, t,
                                            t, EnergyScheme::exact, 1, true);
  std::vector<double> a = ens.column(0);
  for (auto& e : a) e *= 2.0 * m / d;

  // Y = 2mE/D obeys dY = 6 dt + 2 sqrt(Y) dW in physical time, so the walk
  // components are standard Brownian motions run to the same t.
  const double r0 = std::sqrt(2.0 * m * e0 / d);
  std::vector<double> b(n);
  RngStream s(92, 0);
  for (auto& v : b) v = squared_bessel_walk(s, r0, t, 128);

  const double stat = ks_two_sample_statistic(a, b);
  CHECK(stat < ks_two_sample_threshold(n, n));
}

TEST_CASE("truncation scheme converges to the exact law") {
  const double d = 0.5, m = 1.0, e0 = 1.0, t = 1.0;
  const std::size_t n = 20000;
  const auto exact = simulate_energy_ensemble(/*seed=*/93, n, e0, d, m, 0.2,
                                              t, t, EnergyScheme::exact, 1,
                                              true);

  const auto stat_for = [&](double dt) {
    const auto trunc = simulate_energy_ensemble(
        /*seed=*/94, n, e0, d, m, 0.2, t, dt, EnergyScheme::truncation, 1,
        true);
    return ks_two_sample_statistic(exact.column(0), trunc.column(0));
  };

  const double coarse = stat_for(1e-2);
  const double fine = stat_for(5e-3);
  CHECK(coarse < 0.02);
  // Both statistics sit at the sampling-noise floor, so halving dt moves the
  // value by well under 30 percent (seeds fixed above keep this stable).
  CHECK(std::fabs(fine - coarse) < 0.3 * coarse);
}

TEST_CASE("serial and parallel ensembles are bit identical") {
  const auto serial = simulate_energy_ensemble(7, 64, 1.0, 0.5, 1.0, 0.1, 1.0,
                                               1e-2, EnergyScheme::truncation,
                                               4, false);
  const auto parallel = simulate_energy_ensemble(7, 64, 1.0, 0.5, 1.0, 0.1,
                                                 1.0, 1e-2,
                                                 EnergyScheme::truncation, 4,
                                                 true);
  REQUIRE(serial.energies.size() == parallel.energies.size());
  CHECK(std::memcmp(serial.energies.data(), parallel.energies.data(),
                    serial.energies.size() * sizeof(double)) == 0);

  const auto exact_s = simulate_energy_ensemble(8, 64, 1.0, 0.5, 1.0, 0.0,
                                                1.0, 0.25, EnergyScheme::exact,
                                                4, false);
  const auto exact_p = simulate_energy_ensemble(8, 64, 1.0, 0.5, 1.0, 0.0,
                                                1.0, 0.25, EnergyScheme::exact,
                                                4, true);
  CHECK(std::memcmp(exact_s.energies.data(), exact_p.energies.data(),
                    exact_s.energies.size() * sizeof(double)) == 0);
}

TEST_CASE("single-path output grid and nonnegativity") {
  RngStream s(21, 5);
  const auto path = simulate_energy(s, 1.0, 0.8, 1.0, 0.4, 2.0, 1e-3,
                                    EnergyScheme::truncation);
  REQUIRE(path.times.size() == path.energies.size());
  CHECK(path.times.front() == 0.0);
  CHECK(path.times.back() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(path.energies.front() == 1.0);
  for (const double e : path.energies) REQUIRE(e >= 0.0);
}

TEST_CASE("origin classification") {
  // Physical coefficients always keep the origin inaccessible: the drift
  // 3 D/m is triple the diffusion scale D/m.
  const auto phys = feller_check(CirParams::from_physical(0.3, 2.0, 0.1, 1.0));
  CHECK(phys.origin_inaccessible);
  CHECK(phys.twice_drift0 == doctest::Approx(3.0 * phys.sigma2).epsilon(1e-12));

  const auto weak = feller_check(CirParams::coefficients(1.0, 0.3, 1.0));
  CHECK_FALSE(weak.origin_inaccessible);

  const auto edge = feller_check(CirParams::coefficients(1.0, 0.5, 1.0));
  CHECK(edge.origin_inaccessible);
}

TEST_CASE("observer-frame time of a Lorentz-factor history") {
  const std::vector<double> t1{0.0, 2.5, 5.0};
  const std::vector<double> g1{1.0, 1.0, 1.0};
  CHECK(cosmo_time_of_proper(t1, g1) == doctest::Approx(5.0).epsilon(1e-12));

  const std::vector<double> g2{2.0, 2.0, 2.0};
  CHECK(cosmo_time_of_proper(t1, g2) == doctest::Approx(10.0).epsilon(1e-12));

  // Linear ramp: trapezoid is exact, integral T + T^2/2.
  std::vector<double> tp(11), gp(11);
  for (int i = 0; i <= 10; ++i) {
    tp[i] = 0.3 * i;
    gp[i] = 1.0 + tp[i];
  }
  CHECK(cosmo_time_of_proper(tp, gp) ==
        doctest::Approx(3.0 + 3.0 * 3.0 / 2.0).epsilon(1e-12));

  const std::vector<double> bad_t{0.0, 1.0, 0.5};
  CHECK_THROWS_AS(cosmo_time_of_proper(bad_t, g1), std::invalid_argument);
  const std::vector<double> bad_g{1.0, 0.5, 1.0};
  CHECK_THROWS_AS(cosmo_time_of_proper(t1, bad_g), std::invalid_argument);
}

TEST_CASE("spread of the time estimate") {
  const PhysicalConstants consts;
  const std::vector<double> tp{0.0, 0.5, 1.0};
  const std::vector<double> rest{1.0, 1.0, 1.0};
  const double sigma =
      time_estimate_stddev(tp, rest, consts.nucleon_mass, consts);
  const double want = std::sqrt(consts.hbar / (consts.nucleon_mass *
                                               consts.c * consts.c));
  CHECK(sigma == doctest::Approx(want).epsilon(1e-12));
  CHECK(sigma == doctest::Approx(8.376e-13).epsilon(1e-3));

  const std::vector<double> boosted{2.0, 2.0, 2.0};
  CHECK(time_estimate_stddev(tp, boosted, consts.nucleon_mass, consts) ==
        doctest::Approx(2.0 * sigma).epsilon(1e-12));

  CHECK_THROWS_AS(time_estimate_stddev(tp, rest, 0.0, consts),
                  std::invalid_argument);
}

TEST_SUITE_END();
