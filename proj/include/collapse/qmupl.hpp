#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "collapse/rng.hpp"

namespace collapse {

// 1D wave function on a uniform periodic grid, dimensionless units
// (hbar = 1). amplitudes[j] is psi(x_min + j dx).
struct WaveFunction {
  std::vector<std::complex<double>> amplitudes;
  double x_min = 0.0;
  double dx = 0.0;
  double norm = 1.0;

  std::size_t size() const { return amplitudes.size(); }
  double x_at(std::size_t j) const {
    return x_min + static_cast<double>(j) * dx;
  }
};

WaveFunction make_gaussian_packet(std::size_t n_grid, double x_min, double dx,
                                  double width, double center,
                                  double momentum);

struct QmuplConfig {
  double diffusion = 1.0;  // D; sigma_inf = (8 D m)^(-1/4)
  double mass = 1.0;
  double dt = 5e-4;
  std::size_t n_grid = 2048;     // power of two (spectral kinetic step)
  double t_max = 15.0;           // horizon for fixed-length runs
  double domain_width = 0.0;     // 0 -> 40 sigma_inf
  double initial_width_factor = 3.0;
  double convergence_rel_tol = 1e-3;  // var_x window criterion
  double max_time_factor = 20.0;      // give up after factor * t_loc
  double norm_guard = 1e-6;           // pre-renormalization drift bound

  double sigma_inf() const;
  double t_loc() const;
  void validate() const;
};

struct Observables {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double curvature_ratio = 0.0;  // phase curvature / magnitude curvature
};

// Observables of an arbitrary packet: quadratic moments of |psi|^2, spectral
// mean momentum, and the curvature ratio fitted near the peak. The steady
// packet has curvature_ratio = 1; a real packet has 0.
Observables observables(const WaveFunction& psi);

struct QmuplTracePoint {
  double t = 0.0;
  double var_x = 0.0;
  double curvature_ratio = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
};

// Raised when the packet width fails to settle within max_time_factor*t_loc;
// carries the trace accumulated so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string msg, std::vector<QmuplTracePoint> trace)
      : std::runtime_error(std::move(msg)), trace_(std::move(trace)) {}
  const std::vector<QmuplTracePoint>& trace() const { return trace_; }

 private:
  std::vector<QmuplTracePoint> trace_;
};

// Raised when the pre-renormalization norm drift exceeds the guard,
// indicating the time step is too coarse for the noise realization.
class StepSizeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Split-step integrator for
//   dpsi = [-(i/2m) d^2/dx^2 dt - D (x-<x>)^2 dt + sqrt(2D)(x-<x>) dW] psi:
// kinetic half-step (spectral), multiplicative collapse factor with the Ito
// exponential correction, kinetic half-step, renormalize. <x> enters the
// factor frozen at the step start. The window re-centers on <x> when the
// packet has drifted past a quarter of the half-width.
class QmuplSimulator {
 public:
  explicit QmuplSimulator(const QmuplConfig& cfg);
  ~QmuplSimulator();
  QmuplSimulator(const QmuplSimulator&) = delete;
  QmuplSimulator& operator=(const QmuplSimulator&) = delete;

  void initialize_gaussian(double width, double center = 0.0,
                           double momentum = 0.0);
  void set_wavefunction(const WaveFunction& psi);

  // One full step with Brownian increment dw (variance dt).
  void step(double dw);

  double t() const { return t_; }
  double mean_x() const { return mean_x_; }
  double mean_p() const { return mean_p_; }
  double var_x() const { return var_x_; }
  double kinetic_energy() const { return 0.5 * p2_ / cfg_.mass; }
  double curvature_ratio() const;
  double norm_drift_last() const { return norm_drift_last_; }
  QmuplTracePoint trace_point() const;

  WaveFunction wavefunction() const;
  const QmuplConfig& config() const { return cfg_; }

 private:
  void refresh_position_moments();
  void refresh_momentum_moments();
  void renormalize_and_guard();
  void recenter_if_needed();

  QmuplConfig cfg_;
  double length_ = 0.0;
  double dx_ = 0.0;
  double x_min_ = 0.0;
  double t_ = 0.0;
  double mean_x_ = 0.0, var_x_ = 0.0, mean_p_ = 0.0, p2_ = 0.0;
  double norm_drift_last_ = 0.0;
  std::vector<std::complex<double>> half_kinetic_;  // includes the 1/n of the
                                                    // unnormalized inverse FFT
  std::vector<double> wavenumber_;
  struct FftwState;
  FftwState* fftw_;
};

// Integrates from a 3 sigma_inf-wide start until var_x is flat to
// convergence_rel_tol over a trailing t_loc window; throws ConvergenceError
// past max_time_factor * t_loc.
std::vector<QmuplTracePoint> run_to_steady_state(const QmuplConfig& cfg,
                                                 RngStream& stream);

// Fixed-horizon run to cfg.t_max (used by the CLI trace output).
std::vector<QmuplTracePoint> run_fixed_horizon(const QmuplConfig& cfg,
                                               RngStream& stream);

// One steady-state run per stream_id in [0, n_seeds); trajectory-parallel.
struct QmuplRun {
  std::uint64_t stream_id = 0;
  std::vector<QmuplTracePoint> trace;
};

std::vector<QmuplRun> run_qmupl_ensemble(const QmuplConfig& cfg,
                                         std::uint64_t seed,
                                         std::size_t n_seeds, bool parallel,
                                         bool to_steady_state);

}  // namespace collapse
