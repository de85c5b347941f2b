#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "collapse/cir.hpp"
#include "collapse/cir_params.hpp"
#include "collapse/stats.hpp"
#include "test_util.hpp"

#ifdef HAVE_GSL
#include <gsl/gsl_sf_bessel.h>
#endif

using namespace collapse;

namespace {

// Direct power series for exp(-x) I_2(x), summed in extended precision. An
// independent oracle for the production routine's series/asymptotic split.
long double i2_scaled_series(long double x) {
  const long double q = 0.25L * x * x;
  long double term = 0.5L * q;
  long double sum = term;
  for (int k = 1; k < 512; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + 2));
    sum += term;
    if (term < sum * 1e-25L) break;
  }
  return expl(-x) * sum;
}

// Second route to the transition law: map to the noncentral chi-square with
// six degrees of freedom,
//   rho(E) = 2 alpha f(2 alpha E; 6, 2 alpha beta E0),
//   f(x; 6, l) = (1/2) e^{-(x+l)/2} (x/l) I_2(sqrt(l x)),
// assembled from scratch (extended precision in the exponent) rather than
// through log_transition_density.
double log_density_ncx2_route(double energy, double e0, const CirParams& cir) {
  const long double alpha = cir.alpha;
  const long double beta = cir.beta;
  const long double x = 2.0L * alpha * energy;
  const long double lambda = 2.0L * alpha * beta * e0;
  const long double z = sqrtl(lambda * x);
  const long double scaled = bessel_i2_scaled(static_cast<double>(z));
  const long double exponent = z - 0.5L * (x + lambda);
  return static_cast<double>(logl(alpha) + logl(x / lambda) + exponent +
                             logl(scaled));
}

CirParams law_with(double alpha_e0, double beta) {
  const double hubble_t = -std::log(beta);
  return CirParams::from_dimensionless(hubble_t / (alpha_e0 * (1.0 - beta)),
                                       hubble_t);
}

const double kBetas[] = {0.1, 0.5, 0.99};
const double kAlphaE0s[] = {1.0, 10.0, 1e4};

}  // namespace

TEST_SUITE_BEGIN("cir");

TEST_CASE("scaled Bessel function against a direct series") {
  for (const double x : {1e-8, 0.01, 0.5, 1.0, 3.0, 7.0, 12.0, 18.5, 19.5,
                         25.0, 37.0, 50.0}) {
    CAPTURE(x);
    const double want = static_cast<double>(i2_scaled_series(x));
    CHECK(bessel_i2_scaled(x) == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK(bessel_i2_scaled(0.0) == 0.0);
  CHECK_THROWS_AS(bessel_i2_scaled(-1.0), std::domain_error);
}

#ifdef HAVE_GSL
TEST_CASE("scaled Bessel function against GSL") {
  for (const double x : {1e-6, 0.5, 5.0, 18.0, 19.0, 20.0, 50.0, 100.0, 1e3,
                         1e4}) {
    CAPTURE(x);
    const double want = gsl_sf_bessel_In_scaled(2, x);
    CHECK(bessel_i2_scaled(x) == doctest::Approx(want).epsilon(1e-12));
  }
}
#endif

TEST_CASE("transition density equals the noncentral chi-square mapping") {
  for (const double beta : kBetas) {
    for (const double ae0 : kAlphaE0s) {
      CAPTURE(beta);
      CAPTURE(ae0);
      const CirParams cir = law_with(ae0, beta);
      const auto m = transition_moments(1.0, cir);
      const double sd = std::sqrt(m.variance);
      const double lo = std::max(0.05 * m.mean, m.mean - 4.0 * sd);
      const double hi = m.mean + 4.0 * sd;
      for (int i = 0; i <= 20; ++i) {
        const double e = lo + (hi - lo) * i / 20.0;
        const double lib = log_transition_density(e, 1.0, cir);
        const double route2 = log_density_ncx2_route(e, 1.0, cir);
        CHECK(std::fabs(lib - route2) < 1e-12);
      }
    }
  }
}

TEST_CASE("transition law integrates to one with the closed-form moments") {
  for (const double beta : kBetas) {
    for (const double ae0 : kAlphaE0s) {
      CAPTURE(beta);
      CAPTURE(ae0);
      const CirParams cir = law_with(ae0, beta);
      // The clipped tail past the 1 - 1e-8 quantile still holds ~3e-6 of the
      // variance for the broad laws; push the window out instead.
      const auto grid = transition_density_grid(1.0, cir, 1e-10, 1.0 - 1e-10,
                                                40001);
      const auto gm = grid_moments(grid);
      const auto tm = transition_moments(1.0, cir);
      CHECK(gm.mass == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(gm.mean == doctest::Approx(tm.mean).epsilon(1e-6));
      CHECK(gm.variance == doctest::Approx(tm.variance).epsilon(1e-6));
    }
  }
}

TEST_CASE("grid refinement does not move the moments") {
  const CirParams cir = CirParams::from_dimensionless(0.5, 0.3);
  const auto coarse =
      grid_moments(transition_density_grid(1.0, cir, 1e-8, 1.0 - 1e-8, 10001));
  const auto fine =
      grid_moments(transition_density_grid(1.0, cir, 1e-8, 1.0 - 1e-8, 20001));
  CHECK(coarse.mass == doctest::Approx(fine.mass).epsilon(1e-6));
  CHECK(coarse.mean == doctest::Approx(fine.mean).epsilon(1e-6));
  CHECK(coarse.variance == doctest::Approx(fine.variance).epsilon(1e-6));
}

TEST_CASE("vanishing expansion rate joins the no-expansion branch") {
  const CirParams frozen = CirParams::from_physical(0.5, 1.0, 0.0, 2.0);
  const CirParams slow = CirParams::from_physical(0.5, 1.0, 5e-13, 2.0);
  const CirParams above = CirParams::from_physical(0.5, 1.0, 1.5e-8, 2.0);
  for (const double e : {0.5, 1.0, 2.0, 5.0}) {
    CAPTURE(e);
    const double p0 = transition_density(e, 1.0, frozen);
    CHECK(transition_density(e, 1.0, slow) ==
          doctest::Approx(p0).epsilon(1e-9));
    CHECK(transition_density(e, 1.0, above) ==
          doctest::Approx(p0).epsilon(1e-6));
  }
}

TEST_CASE("short-interval closed form near the mode") {
  const double dtm = 0.01;
  const CirParams cir = CirParams::from_dimensionless(dtm, 0.0);
  for (const double e : {0.9, 1.0, 1.1}) {
    CAPTURE(e);
    const double z = 2.0 * cir.alpha * std::sqrt(cir.beta * e);
    REQUIRE(z > 100.0);
    CHECK(asymptotic_density(e, 1.0, dtm) ==
          doctest::Approx(transition_density(e, 1.0, cir)).epsilon(0.01));
  }

  // The (diffusion, mass, t) overload is a pure reparameterization.
  const double d = 0.004, m = 2.0, t = 5.0;
  for (const double e : {0.8, 1.0, 1.3}) {
    CHECK(asymptotic_density(e, 1.0, d, m, t) ==
          asymptotic_density(e, 1.0, d * t / m));
  }
}

TEST_CASE("stationary law: normalization, moments, long-time limit") {
  SUBCASE("Gamma(3) normalization and moments") {
    const double omega = 1.3;
    const auto gm =
        grid_moments(stationary_density_grid(omega, 1e-9, 1.0 - 1e-9, 20001));
    CHECK(gm.mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(gm.mean == doctest::Approx(3.0 / omega).epsilon(1e-6));
    CHECK(gm.variance ==
          doctest::Approx(3.0 / (omega * omega)).epsilon(1e-6));
  }

  SUBCASE("transition law collapses onto the stationary one") {
    const auto target = stationary_density_grid(1.0, 1e-7, 1.0 - 1e-7, 4001);
    const CirParams late = CirParams::from_dimensionless(20.0, 20.0);
    REQUIRE(late.omega == doctest::Approx(1.0).epsilon(1e-12));
    const auto grid =
        transition_density_grid(1.0, late, 1e-7, 1.0 - 1e-7, 4001);
    CHECK(l1_distance(grid, target) < 1e-3);

    double prev = 2.0;
    for (const double kt : {3.0, 4.0, 5.0, 6.0}) {
      CAPTURE(kt);
      const CirParams cir = CirParams::from_dimensionless(kt, kt);
      const double l1 = l1_distance(
          transition_density_grid(1.0, cir, 1e-7, 1.0 - 1e-7, 4001), target);
      CHECK(l1 < prev);
      prev = l1;
    }
  }
}

TEST_CASE("the law depends on (D, m, t) only through D t / m") {
  const double triples[][3] = {{0.25, 1.0, 1.0}, {0.5, 4.0, 2.0},
                               {1.0, 2.0, 0.5}};
  const CirParams ref = CirParams::from_physical(
      triples[0][0], triples[0][1], 0.0, triples[0][2]);
  for (const auto& tr : triples) {
    const CirParams cir = CirParams::from_physical(tr[0], tr[1], 0.0, tr[2]);
    for (const double e : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      CHECK(transition_density(e, 1.0, cir) ==
            doctest::Approx(transition_density(e, 1.0, ref)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cumulative distribution is a proper CDF") {
  const CirParams cir = CirParams::from_dimensionless(0.2, 0.1);
  const TransitionCdf cdf(1.0, cir);
  CHECK(cdf(0.0) == 0.0);
  CHECK(cdf(-1.0) == 0.0);
  CHECK(cdf(1e9) == 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double f = cdf(0.01 * i);
    REQUIRE(f >= prev);
    REQUIRE(f <= 1.0);
    prev = f;
  }
  const auto m = transition_moments(1.0, cir);
  const double at_mean = cdf(m.mean);
  CHECK(at_mean > 0.3);
  CHECK(at_mean < 0.8);
}

TEST_CASE("degenerate arguments") {
  const CirParams cir = CirParams::from_dimensionless(0.5, 0.0);
  CHECK(transition_density(0.0, 1.0, cir) == 0.0);
  CHECK(std::isinf(log_transition_density(0.0, 1.0, cir)));
  CHECK(log_transition_density(0.0, 1.0, cir) < 0.0);
  CHECK(transition_density(-0.5, 1.0, cir) == 0.0);
  CHECK_THROWS_AS(transition_density(1.0, 0.0, cir), std::invalid_argument);

  const CirParams bare = CirParams::coefficients(1.0, 0.5, 1.0);
  CHECK_THROWS_AS(transition_density(1.0, 1.0, bare), std::invalid_argument);
  CHECK_THROWS_AS(transition_moments(1.0, bare), std::invalid_argument);

  CHECK_THROWS_AS(transition_alpha_beta(0.1, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(transition_alpha_beta(0.1, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(transition_alpha_beta(-0.1, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_SUITE_END();
