#include <doctest.h>

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "collapse/rng.hpp"
#include "collapse/sde.hpp"
#include "test_util.hpp"

using namespace collapse;
using test_util::mean_of;
using test_util::variance_of;

namespace {

const auto kZero = [](std::span<const double>, double, std::span<double> out) {
  for (auto& v : out) v = 0.0;
};

}  // namespace

TEST_SUITE_BEGIN("sde");

TEST_CASE("no drift, no noise: the path is constant") {
  RngStream s(1, 0);
  const std::array<double, 2> x0{1.5, -2.0};
  const auto path = euler_maruyama(kZero, kZero, x0, 0.1, 50, s);
  REQUIRE(path.dim == 2);
  REQUIRE(path.steps() == 51);
  for (std::size_t k = 0; k <= 50; ++k) {
    CHECK(path.at(k, 0) == 1.5);
    CHECK(path.at(k, 1) == -2.0);
    CHECK(path.times[k] == doctest::Approx(0.1 * double(k)).epsilon(1e-12));
  }
}

TEST_CASE("constant drift integrates exactly") {
  RngStream s(1, 1);
  const auto drift = [](std::span<const double>, double,
                        std::span<double> out) { out[0] = 3.0; };
  const std::array<double, 1> x0{1.0};
  const auto path = euler_maruyama(drift, kZero, x0, 0.25, 40, s);
  CHECK(path.at(40) == doctest::Approx(1.0 + 3.0 * 10.0).epsilon(1e-12));
}

TEST_CASE("Ornstein-Uhlenbeck variance matches the closed form") {
  const double kappa = 0.8;
  const double sigma = 1.3;
  const double dt = 1e-3;
  const std::size_t n_steps = 1000;
  const std::size_t n_paths = 4000;
  const double t_end = dt * double(n_steps);

  const auto drift = [&](std::span<const double> x, double,
                         std::span<double> out) { out[0] = -kappa * x[0]; };
  const auto diff = [&](std::span<const double>, double,
                        std::span<double> out) { out[0] = sigma; };

  std::vector<double> finals(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) {
    RngStream s(77, p);
    const std::array<double, 1> x0{0.0};
    finals[p] = euler_maruyama(drift, diff, x0, dt, n_steps, s).at(n_steps);
  }
  const double want =
      sigma * sigma * (1.0 - std::exp(-2.0 * kappa * t_end)) / (2.0 * kappa);
  // SE of a Gaussian sample variance is var * sqrt(2/n).
  const double se = want * std::sqrt(2.0 / double(n_paths));
  CHECK(std::fabs(mean_of(finals)) < 5.0 * std::sqrt(want / double(n_paths)));
  CHECK(std::fabs(variance_of(finals) - want) < 4.0 * se + 2.0 * kappa * dt * want);
}

TEST_CASE("divergence is reported with the offending step") {
  RngStream s(1, 2);
  const auto blowup = [](std::span<const double> x, double,
                         std::span<double> out) {
    out[0] = x[0] * x[0] * 1e200;
  };
  const std::array<double, 1> x0{1e200};
  try {
    euler_maruyama(blowup, kZero, x0, 1.0, 10, s);
    FAIL("expected a non-finite state error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("argument validation") {
  RngStream s(1, 3);
  const std::array<double, 1> x0{0.0};
  CHECK_THROWS_AS(euler_maruyama(kZero, kZero, x0, 0.0, 5, s),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      euler_maruyama(kZero, kZero, std::span<const double>{}, 0.1, 5, s),
      std::invalid_argument);
}

TEST_CASE("full truncation step") {
  SUBCASE("zero state moves by the constant drift only") {
    CHECK(full_truncation_step(0.0, 2.0, 0.5, 1.0, 0.01, 0.3) ==
          doctest::Approx(0.02).epsilon(1e-12));
  }

  SUBCASE("negative excursions are clipped away") {
    // Coefficients see max(x, 0), so neither sign of the noise matters here,
    // and the still-negative update is clipped to the boundary.
    const double a = full_truncation_step(-1.0, 2.0, 0.5, 1.0, 0.01, 0.3);
    const double b = full_truncation_step(-1.0, 2.0, 0.5, 1.0, 0.01, -0.3);
    CHECK(a == b);
    CHECK(a == 0.0);
    // A noise kick past zero lands exactly on the boundary.
    CHECK(full_truncation_step(0.01, 0.0, 0.0, 1.0, 0.01, -5.0) == 0.0);
  }

  SUBCASE("iterated steps stay nonnegative for coarse dt") {
    RngStream s(13, 4);
    double x = 0.5;
    for (int k = 0; k < 20000; ++k) {
      const double dw = std::sqrt(0.05) * s.next_normal();
      x = full_truncation_step(x, 0.1, 2.0, 3.0, 0.05, dw);
      REQUIRE(std::isfinite(x));
      REQUIRE(x >= 0.0);
    }
  }
}

TEST_SUITE_END();
