#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "collapse/rng.hpp"

namespace collapse {

// Dense sample path: values is row-major [step][component].
struct SdePath {
  std::vector<double> times;
  std::vector<double> values;
  std::size_t dim = 1;

  std::size_t steps() const { return times.size(); }
  double at(std::size_t step, std::size_t comp = 0) const {
    return values[step * dim + comp];
  }
};

// Fixed-step Euler-Maruyama with componentwise independent noise:
//   x_{k+1} = x_k + drift(x_k, t_k) dt + diffusion(x_k, t_k) .* dW_k.
// drift/diffusion write their result through the out span. Produces the full
// path including the initial state. Throws std::runtime_error naming the step
// at which the state first became non-finite.
template <class Drift, class Diffusion>
SdePath euler_maruyama(Drift&& drift, Diffusion&& diffusion,
                       std::span<const double> x0, double dt,
                       std::size_t n_steps, RngStream& stream) {
  if (!(dt > 0.0)) throw std::invalid_argument("euler_maruyama: dt <= 0");
  if (x0.empty()) throw std::invalid_argument("euler_maruyama: empty state");

  const std::size_t dim = x0.size();
  SdePath path;
  path.dim = dim;
  path.times.resize(n_steps + 1);
  path.values.resize((n_steps + 1) * dim);

  std::vector<double> state(x0.begin(), x0.end());
  std::vector<double> a(dim), b(dim);
  const double sqrt_dt = std::sqrt(dt);

  path.times[0] = 0.0;
  std::copy(state.begin(), state.end(), path.values.begin());

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    drift(std::span<const double>(state), t, std::span<double>(a));
    diffusion(std::span<const double>(state), t, std::span<double>(b));
    for (std::size_t c = 0; c < dim; ++c) {
      const double dw = sqrt_dt * stream.next_normal();
      state[c] += a[c] * dt + b[c] * dw;
      if (!std::isfinite(state[c]))
        throw std::runtime_error("euler_maruyama: non-finite state at step " +
                                 std::to_string(k + 1));
    }
    path.times[k + 1] = static_cast<double>(k + 1) * dt;
    std::copy(state.begin(), state.end(),
              path.values.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim));
  }
  return path;
}

// One full-truncation step for a square-root diffusion
//   dx = (drift_const - friction x) dt + sqrt_diffusion sqrt(x) dW.
// Negative excursions are clipped both inside the coefficients and on the
// result, which keeps the scheme well defined and nonnegative for any dt.
double full_truncation_step(double state, double drift_const, double friction,
                            double sqrt_diffusion, double dt, double dw);

}  // namespace collapse
