#include "collapse/cir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace collapse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

CirParams CirParams::from_physical(double diffusion, double mass, double kappa,
                                   double t) {
  require(diffusion > 0.0, "CirParams: diffusion must be > 0");
  require(mass > 0.0, "CirParams: mass must be > 0");
  require(kappa >= 0.0, "CirParams: kappa must be >= 0");
  const double d_over_m = diffusion / mass;
  CirParams cir;
  cir.kappa = kappa;
  cir.drift0 = 3.0 * d_over_m;
  cir.sigma2 = 2.0 * d_over_m;
  cir.theta = kappa > 0.0 ? cir.drift0 / kappa : kInf;
  cir.omega = kappa / d_over_m;
  if (t > 0.0) {
    const auto [alpha, beta] = transition_alpha_beta(kappa, d_over_m, t);
    cir.alpha = alpha;
    cir.beta = beta;
    cir.elapsed = t;
  }
  return cir;
}

CirParams CirParams::from_dimensionless(double dt_over_m, double hubble_t) {
  require(dt_over_m > 0.0, "CirParams: dt_over_m must be > 0");
  require(hubble_t >= 0.0, "CirParams: hubble_t must be >= 0");
  return from_physical(dt_over_m, 1.0, hubble_t, 1.0);
}

CirParams CirParams::coefficients(double kappa, double theta, double sigma2) {
  require(kappa >= 0.0, "CirParams: kappa must be >= 0");
  require(sigma2 > 0.0, "CirParams: sigma2 must be > 0");
  CirParams cir;
  cir.kappa = kappa;
  cir.theta = theta;
  cir.sigma2 = sigma2;
  cir.drift0 = kappa > 0.0 ? kappa * theta : 0.0;
  return cir;
}

FellerReport feller_check(const CirParams& cir) {
  FellerReport rep;
  rep.twice_drift0 = 2.0 * cir.drift0;
  rep.sigma2 = cir.sigma2;
  rep.origin_inaccessible = rep.twice_drift0 >= cir.sigma2;
  return rep;
}

double bessel_i2_scaled(double x) {
  if (x < 0.0) throw std::domain_error("bessel_i2_scaled: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < 19.0) {
    // exp(-x) sum_k (x/2)^{2k+2} / (k! (k+2)!); all terms positive.
    const double q = 0.25 * x * x;
    double term = 0.5 * q;
    double sum = term;
    for (int k = 1; k < 256; ++k) {
      term *= q / (static_cast<double>(k) * static_cast<double>(k + 2));
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::exp(-x) * sum;
  }
  // Large-argument expansion with mu = 4 nu^2 = 16:
  //   I_2(x) e^{-x} ~ (2 pi x)^{-1/2} sum_k t_k,
  //   t_k = t_{k-1} * -(mu - (2k-1)^2) / (8 k x).
  const double inv8x = 1.0 / (8.0 * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (-(16.0 - odd * odd) * inv8x / k);
    if (std::fabs(next) >= std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

namespace {

void require_transition(const CirParams& cir) {
  if (!(cir.alpha > 0.0) || !(cir.beta > 0.0) || !(cir.elapsed > 0.0))
    throw std::invalid_argument(
        "CirParams carries no transition interval (alpha, beta unset)");
}

}  // namespace

double log_transition_density(double energy, double e0, const CirParams& cir) {
  require(e0 > 0.0, "log_transition_density: E0 must be > 0");
  require_transition(cir);
  if (energy < 0.0) return -kInf;
  if (energy == 0.0) return -kInf;  // density vanishes like E^2 at the origin
  const double alpha = cir.alpha;
  const double beta = cir.beta;
  const double z = 2.0 * alpha * std::sqrt(beta * energy * e0);
  const double root_diff = std::sqrt(energy) - std::sqrt(beta * e0);
  const double scaled = bessel_i2_scaled(z);
  if (scaled == 0.0) return -kInf;
  return std::log(alpha / beta) + std::log(energy / e0) -
         alpha * root_diff * root_diff + std::log(scaled);
}

double transition_density(double energy, double e0, const CirParams& cir) {
  const double lp = log_transition_density(energy, e0, cir);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

TransitionMoments transition_moments(double e0, const CirParams& cir) {
  require(e0 > 0.0, "transition_moments: E0 must be > 0");
  require_transition(cir);
  TransitionMoments m;
  const double be0 = cir.beta * e0;
  m.mean = be0 + 3.0 / cir.alpha;
  m.variance = 2.0 * be0 / cir.alpha + 3.0 / (cir.alpha * cir.alpha);
  return m;
}

double asymptotic_density(double energy, double e0, double dt_over_m) {
  require(e0 > 0.0, "asymptotic_density: E0 must be > 0");
  require(dt_over_m > 0.0, "asymptotic_density: dt_over_m must be > 0");
  if (energy <= 0.0) return 0.0;
  const double root_diff = std::sqrt(energy) - std::sqrt(e0);
  const double shape =
      std::pow(energy * energy * energy / (e0 * e0 * e0 * e0 * e0), 0.25);
  return std::sqrt(1.0 / (4.0 * M_PI * dt_over_m)) * shape *
         std::exp(-root_diff * root_diff / dt_over_m);
}

double asymptotic_density(double energy, double e0, double diffusion,
                          double mass, double t) {
  require(mass > 0.0, "asymptotic_density: mass must be > 0");
  return asymptotic_density(energy, e0, diffusion * t / mass);
}

double stationary_density(double energy, double omega) {
  require(omega > 0.0, "stationary_density: omega must be > 0");
  if (energy < 0.0) return 0.0;
  return 0.5 * omega * omega * omega * energy * energy *
         std::exp(-omega * energy);
}

void DensityGrid::validate() const {
  if (energies.size() != density.size() ||
      energies.size() != log_density.size())
    throw std::invalid_argument("DensityGrid: column lengths differ");
  if (energies.size() < 2)
    throw std::invalid_argument("DensityGrid: need at least two points");
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (!(energies[i] > energies[i - 1]))
      throw std::invalid_argument("DensityGrid: energies must increase");
  for (double p : density)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("DensityGrid: density must be finite, >= 0");
}

GridMoments grid_moments(const DensityGrid& grid) {
  grid.validate();
  const auto& e = grid.energies;
  const auto& p = grid.density;
  const std::size_t n = e.size();

  bool uniform = (n % 2 == 1);
  const double h0 = e[1] - e[0];
  for (std::size_t i = 1; uniform && i + 1 < n; ++i)
    if (std::fabs((e[i + 1] - e[i]) - h0) > 1e-12 * h0) uniform = false;

  auto integrate = [&](auto&& f) {
    if (uniform) {
      double sum = f(0) + f(n - 1);
      for (std::size_t i = 1; i + 1 < n; i += 2) sum += 4.0 * f(i);
      for (std::size_t i = 2; i + 1 < n; i += 2) sum += 2.0 * f(i);
      return sum * h0 / 3.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      sum += 0.5 * (e[i + 1] - e[i]) * (f(i) + f(i + 1));
    return sum;
  };

  GridMoments m;
  m.mass = integrate([&](std::size_t i) { return p[i]; });
  if (m.mass <= 0.0)
    throw std::invalid_argument("grid_moments: grid carries no mass");
  m.mean = integrate([&](std::size_t i) { return e[i] * p[i]; }) / m.mass;
  m.variance = integrate([&](std::size_t i) {
                 const double d = e[i] - m.mean;
                 return d * d * p[i];
               }) /
               m.mass;
  return m;
}

namespace {

// Dense scan of the cumulative integral, used to translate quantiles into an
// energy bracket before laying out the final grid.
struct CumulativeScan {
  std::vector<double> e, cum;
  double total = 0.0;

  double quantile(double q) const {
    const double target = q * total;
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    if (it == cum.begin()) return e.front();
    if (it == cum.end()) return e.back();
    const std::size_t j = static_cast<std::size_t>(it - cum.begin());
    const double c0 = cum[j - 1], c1 = cum[j];
    const double w = c1 > c0 ? (target - c0) / (c1 - c0) : 0.0;
    return e[j - 1] + w * (e[j] - e[j - 1]);
  }
};

template <class Density>
CumulativeScan scan_cumulative(double lo, double hi, std::size_t n,
                               Density&& density) {
  CumulativeScan s;
  s.e.resize(n);
  s.cum.resize(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  double prev = density(lo);
  s.e[0] = lo;
  s.cum[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double x = lo + static_cast<double>(i) * h;
    const double cur = density(x);
    s.e[i] = x;
    s.cum[i] = s.cum[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  s.total = s.cum.back();
  if (!(s.total > 0.0))
    throw std::runtime_error("density scan found no mass in bracket");
  return s;
}

template <class Density>
DensityGrid grid_between_quantiles(double mean, double sd, double q_lo,
                                   double q_hi, std::size_t n_points,
                                   Density&& density) {
  if (!(q_lo >= 0.0 && q_hi <= 1.0 && q_lo < q_hi))
    throw std::invalid_argument("quantile bounds must satisfy 0<=lo<hi<=1");
  if (n_points < 9)
    throw std::invalid_argument("density grid needs at least 9 points");

  const double lo = std::max(0.0, mean - 45.0 * sd);
  const double hi = mean + 45.0 * sd;
  const auto scan = scan_cumulative(lo, hi, 200001, density);
  double e_lo = q_lo <= 0.0 ? lo : scan.quantile(q_lo);
  double e_hi = q_hi >= 1.0 ? hi : scan.quantile(q_hi);
  if (!(e_hi > e_lo))
    throw std::runtime_error("degenerate quantile bracket for density grid");

  DensityGrid grid;
  grid.energies.resize(n_points);
  grid.density.resize(n_points);
  grid.log_density.resize(n_points);
  const double h = (e_hi - e_lo) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = e_lo + static_cast<double>(i) * h;
    const double p = density(x);
    grid.energies[i] = x;
    grid.density[i] = p;
    grid.log_density[i] = p > 0.0 ? std::log(p) : -kInf;
  }
  return grid;
}

}  // namespace

DensityGrid transition_density_grid(double e0, const CirParams& cir,
                                    double q_lo, double q_hi,
                                    std::size_t n_points) {
  const TransitionMoments m = transition_moments(e0, cir);
  const double sd = std::sqrt(m.variance);
  return grid_between_quantiles(
      m.mean, sd, q_lo, q_hi, n_points,
      [&](double x) { return transition_density(x, e0, cir); });
}

DensityGrid asymptotic_density_grid(const std::vector<double>& energies,
                                    double e0, double dt_over_m) {
  if (energies.size() < 2)
    throw std::invalid_argument("asymptotic_density_grid: need >= 2 energies");
  DensityGrid grid;
  grid.energies = energies;
  grid.density.resize(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i)
    grid.density[i] = asymptotic_density(energies[i], e0, dt_over_m);

  // Normalize on the grid so shape comparisons are scale-free.
  grid.log_density.assign(energies.size(), 0.0);
  const GridMoments raw = grid_moments(grid);
  for (std::size_t i = 0; i < energies.size(); ++i) {
    grid.density[i] /= raw.mass;
    grid.log_density[i] =
        grid.density[i] > 0.0 ? std::log(grid.density[i]) : -kInf;
  }
  return grid;
}

DensityGrid stationary_density_grid(double omega, double q_lo, double q_hi,
                                    std::size_t n_points) {
  require(omega > 0.0, "stationary_density_grid: omega must be > 0");
  const double mean = 3.0 / omega;
  const double sd = std::sqrt(3.0) / omega;
  return grid_between_quantiles(
      mean, sd, q_lo, q_hi, n_points,
      [&](double x) { return stationary_density(x, omega); });
}

TransitionCdf::TransitionCdf(double e0, const CirParams& cir,
                             std::size_t n_points) {
  if (n_points < 1024)
    throw std::invalid_argument("TransitionCdf: n_points too small");
  const TransitionMoments m = transition_moments(e0, cir);
  const double sd = std::sqrt(m.variance);
  const double lo = std::max(0.0, m.mean - 45.0 * sd);
  const double hi = m.mean + 45.0 * sd;
  const auto scan = scan_cumulative(lo, hi, 200001, [&](double x) {
    return transition_density(x, e0, cir);
  });
  const double e_lo = scan.quantile(1e-9);
  const double e_hi = scan.quantile(1.0 - 1e-9);

  energies_.resize(n_points);
  cdf_.resize(n_points);
  const double h = (e_hi - e_lo) / static_cast<double>(n_points - 1);
  double prev = transition_density(e_lo, e0, cir);
  energies_[0] = e_lo;
  cdf_[0] = 1e-9;  // mass to the left of the bracket
  for (std::size_t i = 1; i < n_points; ++i) {
    const double x = e_lo + static_cast<double>(i) * h;
    const double cur = transition_density(x, e0, cir);
    energies_[i] = x;
    cdf_[i] = cdf_[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  for (auto& c : cdf_) c = std::min(c, 1.0);
}

double TransitionCdf::operator()(double energy) const {
  if (energy <= energies_.front()) return 0.0;
  if (energy >= energies_.back()) return 1.0;
  const auto it =
      std::upper_bound(energies_.begin(), energies_.end(), energy);
  const std::size_t j = static_cast<std::size_t>(it - energies_.begin());
  const double e0 = energies_[j - 1], e1 = energies_[j];
  const double w = (energy - e0) / (e1 - e0);
  return cdf_[j - 1] + w * (cdf_[j] - cdf_[j - 1]);
}

}  // namespace collapse
