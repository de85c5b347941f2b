#pragma once

#include <cstddef>
#include <vector>

#include "collapse/cir_params.hpp"

namespace collapse {

// Exponentially scaled modified Bessel function exp(-x) I_2(x) for x >= 0.
// Power series below the crossover, asymptotic series above; both branches
// stay in the scaled form so nothing overflows for large arguments.
double bessel_i2_scaled(double x);

// Transition density of the energy process started at E0, evaluated after
// the interval bound into cir (alpha, beta). Written against the squared
// difference of square roots,
//   log p = log(alpha/beta) + log(E/E0)
//           - alpha (sqrt(E) - sqrt(beta E0))^2 + log(e^{-z} I_2(z)),
//   z = 2 alpha sqrt(beta E E0),
// which is the numerically safe form of
//   p = (alpha/beta)(E/E0) e^{-alpha(E + beta E0)} I_2(z).
double log_transition_density(double energy, double e0, const CirParams& cir);
double transition_density(double energy, double e0, const CirParams& cir);

struct TransitionMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Closed-form moments: mean = beta E0 + 3/alpha,
// variance = 2 beta E0 / alpha + 3 / alpha^2.
TransitionMoments transition_moments(double e0, const CirParams& cir);

// Saddle-point form of the short-interval density (valid when
// z = 2 alpha sqrt(beta E E0) is large and beta ~ 1):
//   p ~ sqrt(1/(4 pi dtm)) (E^3 / E0^5)^{1/4} exp(-(sqrt(E)-sqrt(E0))^2/dtm)
// with dtm = D t / m. Unnormalized tail behavior is exact to O(1/z).
double asymptotic_density(double energy, double e0, double dt_over_m);
double asymptotic_density(double energy, double e0, double diffusion,
                          double mass, double t);

// Stationary density (kappa > 0): p = omega^3 E^2 exp(-omega E) / 2,
// a Gamma(3, rate omega) law.
double stationary_density(double energy, double omega);

// Tabulated density on an increasing energy grid.
struct DensityGrid {
  std::vector<double> energies;
  std::vector<double> density;
  std::vector<double> log_density;

  void validate() const;
};

struct GridMoments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

// Quadrature of mass/mean/variance over the grid: composite Simpson when the
// spacing is uniform and the point count odd, trapezoid otherwise.
GridMoments grid_moments(const DensityGrid& grid);

// Uniform grid covering quantiles [q_lo, q_hi] of the transition law. The
// quantile bracket comes from a dense scan of the cumulative integral.
DensityGrid transition_density_grid(double e0, const CirParams& cir,
                                    double q_lo, double q_hi,
                                    std::size_t n_points);

// Asymptotic density normalized numerically on the supplied energies.
DensityGrid asymptotic_density_grid(const std::vector<double>& energies,
                                    double e0, double dt_over_m);

DensityGrid stationary_density_grid(double omega, double q_lo, double q_hi,
                                    std::size_t n_points);

// Cumulative distribution of the transition law, tabulated by trapezoid
// quadrature on a fine uniform grid; evaluation interpolates linearly and
// clamps to [0, 1] outside the table.
class TransitionCdf {
 public:
  TransitionCdf(double e0, const CirParams& cir, std::size_t n_points = 1 << 17);
  double operator()(double energy) const;

 private:
  std::vector<double> energies_;
  std::vector<double> cdf_;
};

}  // namespace collapse
