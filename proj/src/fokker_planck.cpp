#include "collapse/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "collapse/cir_params.hpp"

namespace collapse {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void FpConfig::validate() const {
  require(e0 > 0.0, "FpConfig: e0 must be > 0");
  require(d_over_m >= 0.0, "FpConfig: D/m must be >= 0");
  require(kappa >= 0.0, "FpConfig: kappa must be >= 0");
  require(t_max > 0.0, "FpConfig: t_max must be > 0");
  require(dt > 0.0, "FpConfig: dt must be > 0");
  require(mass_tol > 0.0, "FpConfig: mass_tol must be > 0");
  if (energies.empty()) {
    require(n_cells >= 16, "FpConfig: need at least 16 cells");
  } else {
    require(energies.size() >= 17, "FpConfig: explicit grid too small");
    require(energies.front() == 0.0, "FpConfig: grid must start at E = 0");
    for (std::size_t i = 1; i < energies.size(); ++i)
      require(energies[i] > energies[i - 1], "FpConfig: grid must increase");
  }
}

FpGrid solve_forward(const FpConfig& cfg) {
  cfg.validate();

  // Lay out the grid. The automatic far boundary sits 14 standard deviations
  // past the analytic mean at t_max (and past the stationary bulk when the
  // friction term matters).
  std::vector<double> e = cfg.energies;
  if (e.empty()) {
    double e_max = cfg.e_max;
    if (e_max <= 0.0) {
      double mean = cfg.e0, sd = 0.0;
      if (cfg.d_over_m > 0.0) {
        const auto [alpha, beta] =
            transition_alpha_beta(cfg.kappa, cfg.d_over_m, cfg.t_max);
        const double be0 = beta * cfg.e0;
        mean = be0 + 3.0 / alpha;
        sd = std::sqrt(2.0 * be0 / alpha + 3.0 / (alpha * alpha));
        if (cfg.kappa > 0.0) {
          const double omega = cfg.kappa / cfg.d_over_m;
          mean = std::max(mean, 3.0 / omega);
          sd = std::max(sd, std::sqrt(3.0) / omega);
        }
      }
      e_max = std::max(mean + 14.0 * sd, 2.0 * cfg.e0);
    }
    require(cfg.e0 < 0.9 * e_max, "FpConfig: e0 not interior to the grid");
    const std::size_t n = cfg.n_cells + 1;
    e.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      e[j] = e_max * static_cast<double>(j) / static_cast<double>(cfg.n_cells);
  } else {
    require(cfg.e0 < 0.9 * e.back(), "FpConfig: e0 not interior to the grid");
  }

  const std::size_t n = e.size();

  // Control volumes (trapezoid weights) and Chang-Cooper face coefficients
  // for the flux F = (2D/m - kappa E) p - (D/m) E dp/dE. Both face transfer
  // rates are positive for any sign of the drift, which makes the implicit
  // matrix an M-matrix: solutions stay nonnegative and total mass is
  // telescoping-exact.
  std::vector<double> vol(n);
  vol[0] = 0.5 * (e[1] - e[0]);
  for (std::size_t j = 1; j + 1 < n; ++j) vol[j] = 0.5 * (e[j + 1] - e[j - 1]);
  vol[n - 1] = 0.5 * (e[n - 1] - e[n - 2]);

  std::vector<double> c(n - 1), d(n - 1);  // outflux rates across face j+1/2
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double h = e[j + 1] - e[j];
    const double ef = 0.5 * (e[j] + e[j + 1]);
    const double adv = 2.0 * cfg.d_over_m - cfg.kappa * ef;
    const double dif = cfg.d_over_m * ef;
    if (dif == 0.0) {
      c[j] = std::max(adv, 0.0);
      d[j] = std::max(-adv, 0.0);
      continue;
    }
    const double w = adv * h / dif;
    if (std::fabs(w) < 1e-12) {
      c[j] = dif / h;
      d[j] = dif / h;
    } else {
      c[j] = adv / (-std::expm1(-w));
      d[j] = adv / std::expm1(w);
    }
  }

  // Narrow-Gaussian stand-in for the initial delta at e0.
  double width = cfg.init_width;
  if (width <= 0.0) {
    double h_local = e[1] - e[0];
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (e[j] <= cfg.e0 && cfg.e0 <= e[j + 1]) h_local = e[j + 1] - e[j];
    width = std::max(3.0 * h_local, 1e-3 * cfg.e0);
  }
  FpGrid grid;
  grid.energies = e;
  grid.density.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = (e[j] - cfg.e0) / width;
    grid.density[j] = std::exp(-0.5 * y * y);
  }
  double mass0 = 0.0;
  for (std::size_t j = 0; j < n; ++j) mass0 += vol[j] * grid.density[j];
  for (auto& p : grid.density) p /= mass0;
  mass0 = 1.0;

  const auto n_steps = static_cast<std::size_t>(
      std::llround(std::ceil(cfg.t_max / cfg.dt - 1e-9)));
  const double ht = cfg.t_max / static_cast<double>(n_steps);

  // Backward-Euler tridiagonal system; coefficients are time-independent.
  std::vector<double> lower(n), diag(n), upper(n), rhs(n), scratch(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double out_right = j + 1 < n ? c[j] : 0.0;
    const double out_left = j > 0 ? d[j - 1] : 0.0;
    diag[j] = vol[j] / ht + out_right + out_left;
    lower[j] = j > 0 ? -c[j - 1] : 0.0;
    upper[j] = j + 1 < n ? -d[j] : 0.0;
  }

  for (std::size_t step = 1; step <= n_steps; ++step) {
    for (std::size_t j = 0; j < n; ++j) rhs[j] = vol[j] / ht * grid.density[j];

    // Thomas solve.
    scratch[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for (std::size_t j = 1; j < n; ++j) {
      const double denom = diag[j] - lower[j] * scratch[j - 1];
      scratch[j] = upper[j] / denom;
      rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / denom;
    }
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= scratch[j] * rhs[j + 1];

    for (std::size_t j = 0; j < n; ++j) {
      if (rhs[j] < 0.0) {
        if (rhs[j] < -1e-12)
          throw std::runtime_error(
              "solve_forward: negative density at step " +
              std::to_string(step));
        rhs[j] = 0.0;
      }
      grid.density[j] = rhs[j];
    }
    grid.t = static_cast<double>(step) * ht;

    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) mass += vol[j] * grid.density[j];
    if (std::fabs(mass - mass0) > cfg.mass_tol)
      throw std::runtime_error(
          "solve_forward: mass drifted to " + std::to_string(mass) +
          " at t = " + std::to_string(grid.t) + " (step " +
          std::to_string(step) + ")");
  }
  return grid;
}

FpMoments mass_and_moments(const FpGrid& grid) {
  const auto& e = grid.energies;
  const auto& p = grid.density;
  require(e.size() == p.size() && e.size() >= 2,
          "mass_and_moments: malformed grid");
  FpMoments m;
  double m1 = 0.0;
  for (std::size_t j = 0; j + 1 < e.size(); ++j) {
    const double h = e[j + 1] - e[j];
    m.mass += 0.5 * h * (p[j] + p[j + 1]);
    m1 += 0.5 * h * (e[j] * p[j] + e[j + 1] * p[j + 1]);
  }
  if (m.mass <= 0.0)
    throw std::invalid_argument("mass_and_moments: grid carries no mass");
  m.mean = m1 / m.mass;
  double m2 = 0.0;
  for (std::size_t j = 0; j + 1 < e.size(); ++j) {
    const double h = e[j + 1] - e[j];
    const double da = e[j] - m.mean, db = e[j + 1] - m.mean;
    m2 += 0.5 * h * (da * da * p[j] + db * db * p[j + 1]);
  }
  m.variance = m2 / m.mass;
  return m;
}

}  // namespace collapse
