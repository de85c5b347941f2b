#include "collapse/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "collapse/parallel.hpp"

namespace collapse {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

constexpr std::size_t kBlock = 4096;

// Per-(block, output) partial sums; reduced sequentially in block order.
struct Accumulator {
  std::array<double, 3> sum_p{}, sum_p2{}, sum_x{}, sum_xp{};
  double sum_eprime = 0.0;
  double sum_kinetic = 0.0;
  double sum_gap2 = 0.0;
};

}  // namespace

PhaseState phase_step(const PhaseState& state, double diffusion, double mass,
                      double dt, const std::array<double, 3>& dw) {
  require(dt > 0.0, "phase_step: dt must be > 0");
  require(mass > 0.0, "phase_step: mass must be > 0");
  require(diffusion >= 0.0, "phase_step: diffusion must be >= 0");
  const double kick_x = std::sqrt(1.0 / mass);  // hbar = 1
  const double kick_p = std::sqrt(2.0 * diffusion);
  PhaseState next = state;
  for (int i = 0; i < 3; ++i) {
    next.position[i] += state.momentum[i] / mass * dt + kick_x * dw[i];
    next.momentum[i] += kick_p * dw[i];
  }
  next.t += dt;
  return next;
}

double rest_energy_increment(const std::array<double, 3>& momentum,
                             double diffusion, double mass, double dt,
                             const std::array<double, 3>& dw) {
  require(dt > 0.0, "rest_energy_increment: dt must be > 0");
  require(mass > 0.0, "rest_energy_increment: mass must be > 0");
  const double p_dot_dw =
      momentum[0] * dw[0] + momentum[1] * dw[1] + momentum[2] * dw[2];
  return 3.0 * diffusion / mass * dt +
         std::sqrt(2.0 * diffusion) / mass * p_dot_dw;
}

std::vector<PhaseMomentsRow> simulate_phase_ensemble(
    std::uint64_t seed, std::size_t n_paths, double diffusion, double mass,
    double dt, double t_max, std::size_t n_outputs, bool parallel,
    const std::array<double, 3>& p0) {
  require(n_paths >= 1, "simulate_phase_ensemble: need at least one path");
  require(n_outputs >= 1, "simulate_phase_ensemble: need >= 1 output");
  require(t_max > 0.0 && dt > 0.0 && dt <= t_max,
          "simulate_phase_ensemble: need 0 < dt <= t_max");

  const auto n_steps =
      static_cast<std::size_t>(std::llround(std::ceil(t_max / dt - 1e-9)));
  const double h = t_max / static_cast<double>(n_steps);
  const double sqrt_h = std::sqrt(h);
  const double e0 =
      (p0[0] * p0[0] + p0[1] * p0[1] + p0[2] * p0[2]) / (2.0 * mass);

  std::vector<std::size_t> checkpoint(n_outputs);
  for (std::size_t j = 0; j < n_outputs; ++j)
    checkpoint[j] = static_cast<std::size_t>(
        std::llround(static_cast<double>((j + 1) * n_steps) /
                     static_cast<double>(n_outputs)));

  const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
  std::vector<Accumulator> acc(n_blocks * n_outputs);

  for_each_trajectory(n_blocks, parallel, [&](std::size_t b) {
    Accumulator* block_acc = acc.data() + b * n_outputs;
    const std::size_t begin = b * kBlock;
    const std::size_t end = std::min(begin + kBlock, n_paths);
    for (std::size_t p = begin; p < end; ++p) {
      RngStream stream(seed, p);
      PhaseState state;
      state.momentum = p0;
      double eprime = e0;
      std::size_t next_out = 0;
      for (std::size_t k = 1; k <= n_steps; ++k) {
        const std::array<double, 3> dw = {sqrt_h * stream.next_normal(),
                                          sqrt_h * stream.next_normal(),
                                          sqrt_h * stream.next_normal()};
        eprime += rest_energy_increment(state.momentum, diffusion, mass, h, dw);
        state = phase_step(state, diffusion, mass, h, dw);
        while (next_out < n_outputs && checkpoint[next_out] == k) {
          Accumulator& a = block_acc[next_out];
          double kinetic = 0.0;
          for (int i = 0; i < 3; ++i) {
            a.sum_p[i] += state.momentum[i];
            a.sum_p2[i] += state.momentum[i] * state.momentum[i];
            a.sum_x[i] += state.position[i];
            a.sum_xp[i] += state.position[i] * state.momentum[i];
            kinetic += state.momentum[i] * state.momentum[i];
          }
          kinetic /= 2.0 * mass;
          a.sum_eprime += eprime;
          a.sum_kinetic += kinetic;
          a.sum_gap2 += (eprime - kinetic) * (eprime - kinetic);
          ++next_out;
        }
      }
    }
  });

  std::vector<PhaseMomentsRow> rows(n_outputs);
  const double inv_n = 1.0 / static_cast<double>(n_paths);
  for (std::size_t j = 0; j < n_outputs; ++j) {
    Accumulator total;
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const Accumulator& a = acc[b * n_outputs + j];
      for (int i = 0; i < 3; ++i) {
        total.sum_p[i] += a.sum_p[i];
        total.sum_p2[i] += a.sum_p2[i];
        total.sum_x[i] += a.sum_x[i];
        total.sum_xp[i] += a.sum_xp[i];
      }
      total.sum_eprime += a.sum_eprime;
      total.sum_kinetic += a.sum_kinetic;
      total.sum_gap2 += a.sum_gap2;
    }
    PhaseMomentsRow& row = rows[j];
    row.t = static_cast<double>(checkpoint[j]) * h;
    for (int i = 0; i < 3; ++i) {
      const double mean_p = total.sum_p[i] * inv_n;
      const double mean_x = total.sum_x[i] * inv_n;
      row.var_p[i] = total.sum_p2[i] * inv_n - mean_p * mean_p;
      row.cov_xp[i] = total.sum_xp[i] * inv_n - mean_x * mean_p;
    }
    row.mean_eprime = total.sum_eprime * inv_n;
    row.mean_kinetic = total.sum_kinetic * inv_n;
    row.rms_energy_gap = std::sqrt(total.sum_gap2 * inv_n);
  }
  return rows;
}

}  // namespace collapse
