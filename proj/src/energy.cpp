#include "collapse/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "collapse/parallel.hpp"
#include "collapse/sde.hpp"

namespace collapse {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

EnergyScheme scheme_from_string(std::string_view name) {
  if (name == "truncation") return EnergyScheme::truncation;
  if (name == "exact") return EnergyScheme::exact;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected truncation|exact)");
}

double exact_transition_sample(RngStream& stream, double e0,
                               const CirParams& cir, double t) {
  require(e0 > 0.0, "exact_transition_sample: E0 must be > 0");
  require(t >= 0.0, "exact_transition_sample: t must be >= 0");
  if (t == 0.0) return e0;
  const double d_over_m = cir.d_over_m();
  if (d_over_m == 0.0) return e0 * std::exp(-cir.kappa * t);
  const auto [alpha, beta] = transition_alpha_beta(cir.kappa, d_over_m, t);
  const double noncentrality = 2.0 * alpha * beta * e0;
  return gamma_poisson_ncx2_sample(stream, 6.0, noncentrality) /
         (2.0 * alpha);
}

EnergyPath simulate_energy(RngStream& stream, double e0, double diffusion,
                           double mass, double kappa, double t_max, double dt,
                           EnergyScheme scheme) {
  require(e0 > 0.0, "simulate_energy: E0 must be > 0");
  require(diffusion >= 0.0, "simulate_energy: diffusion must be >= 0");
  require(mass > 0.0, "simulate_energy: mass must be > 0");
  require(kappa >= 0.0, "simulate_energy: kappa must be >= 0");
  require(t_max > 0.0, "simulate_energy: t_max must be > 0");
  require(dt > 0.0 && dt <= t_max, "simulate_energy: need 0 < dt <= t_max");

  const auto n_steps =
      static_cast<std::size_t>(std::llround(std::ceil(t_max / dt - 1e-9)));
  const double h = t_max / static_cast<double>(n_steps);
  const double d_over_m = diffusion / mass;

  EnergyPath path;
  path.times.resize(n_steps + 1);
  path.energies.resize(n_steps + 1);
  path.times[0] = 0.0;
  path.energies[0] = e0;

  if (scheme == EnergyScheme::exact) {
    CirParams bare;  // only kappa and sigma2 feed the transition sampler
    bare.kappa = kappa;
    bare.sigma2 = 2.0 * d_over_m;
    bare.drift0 = 3.0 * d_over_m;
    if (kappa > 0.0) bare.theta = bare.drift0 / kappa;
    double e = e0;
    for (std::size_t k = 0; k < n_steps; ++k) {
      e = exact_transition_sample(stream, e, bare, h);
      path.times[k + 1] = static_cast<double>(k + 1) * h;
      path.energies[k + 1] = e;
    }
    return path;
  }

  const double drift0 = 3.0 * d_over_m;
  const double sqrt_diffusion = std::sqrt(2.0 * d_over_m);
  const double sqrt_h = std::sqrt(h);
  double e = e0;
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double dw = sqrt_h * stream.next_normal();
    e = full_truncation_step(e, drift0, kappa, sqrt_diffusion, h, dw);
    path.times[k + 1] = static_cast<double>(k + 1) * h;
    path.energies[k + 1] = e;
  }
  return path;
}

std::vector<double> EnergyEnsemble::column(std::size_t output) const {
  std::vector<double> out(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) out[p] = at(p, output);
  return out;
}

EnergyEnsemble simulate_energy_ensemble(std::uint64_t seed,
                                        std::size_t n_paths, double e0,
                                        double diffusion, double mass,
                                        double kappa, double t_max, double dt,
                                        EnergyScheme scheme,
                                        std::size_t n_outputs, bool parallel) {
  require(n_paths >= 1, "simulate_energy_ensemble: need at least one path");
  require(n_outputs >= 1, "simulate_energy_ensemble: need at least one output");

  EnergyEnsemble ens;
  ens.n_paths = n_paths;
  ens.n_outputs = n_outputs;
  ens.times.resize(n_outputs);
  ens.energies.resize(n_paths * n_outputs);
  for (std::size_t j = 0; j < n_outputs; ++j)
    ens.times[j] = t_max * static_cast<double>(j + 1) /
                   static_cast<double>(n_outputs);

  for_each_trajectory(n_paths, parallel, [&](std::size_t p) {
    RngStream stream(seed, p);
    const EnergyPath path = simulate_energy(stream, e0, diffusion, mass, kappa,
                                            t_max, dt, scheme);
    const std::size_t n_steps = path.times.size() - 1;
    for (std::size_t j = 0; j < n_outputs; ++j) {
      const auto k = static_cast<std::size_t>(
          std::llround(static_cast<double>((j + 1) * n_steps) /
                       static_cast<double>(n_outputs)));
      ens.energies[p * n_outputs + j] = path.energies[k];
    }
  });
  return ens;
}

double cosmo_time_of_proper(std::span<const double> t_prime,
                            std::span<const double> gamma) {
  require(t_prime.size() == gamma.size(),
          "cosmo_time_of_proper: mismatched arrays");
  require(t_prime.size() >= 2, "cosmo_time_of_proper: need >= 2 samples");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t_prime.size(); ++i) {
    const double ds = t_prime[i + 1] - t_prime[i];
    if (!(ds > 0.0))
      throw std::invalid_argument(
          "cosmo_time_of_proper: t_prime must increase strictly");
    if (gamma[i] < 1.0 || gamma[i + 1] < 1.0)
      throw std::invalid_argument("cosmo_time_of_proper: gamma must be >= 1");
    total += 0.5 * ds * (gamma[i] + gamma[i + 1]);
  }
  return total;
}

double time_estimate_stddev(std::span<const double> t_prime,
                            std::span<const double> gamma, double mass_kg,
                            const PhysicalConstants& consts) {
  require(mass_kg > 0.0, "time_estimate_stddev: mass must be > 0");
  require(t_prime.size() == gamma.size(),
          "time_estimate_stddev: mismatched arrays");
  require(t_prime.size() >= 2, "time_estimate_stddev: need >= 2 samples");
  double quad = 0.0;
  for (std::size_t i = 0; i + 1 < t_prime.size(); ++i) {
    const double ds = t_prime[i + 1] - t_prime[i];
    if (!(ds > 0.0))
      throw std::invalid_argument(
          "time_estimate_stddev: t_prime must increase strictly");
    quad += 0.5 * ds * (gamma[i] * gamma[i] + gamma[i + 1] * gamma[i + 1]);
  }
  const double rest_energy = mass_kg * consts.c * consts.c;
  return std::sqrt(consts.hbar / rest_energy * quad);
}

}  // namespace collapse
