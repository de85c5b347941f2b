#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace collapse {

// Square-root (CIR) process for the kinetic energy,
//   dE = (drift0 - kappa E) dt + sqrt(sigma2 E) dW,
// with drift0 = 3 D / m and sigma2 = 2 D / m. theta = drift0 / kappa is the
// stationary mean (infinite when kappa = 0, the non-expanding case).
//
// (alpha, beta) parameterize the exact transition law over the interval
// `elapsed`: beta = exp(-kappa t) and alpha = omega / (1 - beta), which
// degenerates to m / (D t) as kappa t -> 0.
struct CirParams {
  double kappa = 0.0;
  double theta = std::numeric_limits<double>::infinity();
  double sigma2 = 0.0;
  double drift0 = 0.0;
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
  double elapsed = 0.0;

  double d_over_m() const { return 0.5 * sigma2; }

  static CirParams from_physical(double diffusion, double mass, double kappa,
                                 double t);
  // Unit reference energy and unit elapsed time: dt_over_m = D t / (m E0)
  // and hubble_t = kappa t fix everything.
  static CirParams from_dimensionless(double dt_over_m, double hubble_t);
  // Bare SDE coefficients without a bound transition interval.
  static CirParams coefficients(double kappa, double theta, double sigma2);
};

// (alpha, beta) of the transition law; the kappa t -> 0 branch avoids the
// 0/0 of omega / (1 - beta).
inline std::pair<double, double> transition_alpha_beta(double kappa,
                                                       double d_over_m,
                                                       double t) {
  if (!(d_over_m > 0.0))
    throw std::invalid_argument("transition_alpha_beta: D/m must be > 0");
  if (!(t > 0.0))
    throw std::invalid_argument("transition_alpha_beta: t must be > 0");
  if (kappa < 0.0)
    throw std::invalid_argument("transition_alpha_beta: kappa must be >= 0");
  const double kt = kappa * t;
  if (kt < 1e-8) return {1.0 / (d_over_m * t), std::exp(-kt)};
  const double beta = std::exp(-kt);
  const double omega = kappa / d_over_m;
  return {omega / (-std::expm1(-kt)), beta};
}

struct FellerReport {
  double twice_drift0 = 0.0;  // 2 kappa theta in the generic parameterization
  double sigma2 = 0.0;
  bool origin_inaccessible = false;
};

// Feller boundary classification: the origin is inaccessible iff
// 2 kappa theta >= sigma2. For the physical coefficients this reads
// 6 D/m >= 2 D/m and always holds.
FellerReport feller_check(const CirParams& cir);

}  // namespace collapse
