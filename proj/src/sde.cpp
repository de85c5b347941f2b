#include "collapse/sde.hpp"

#include <algorithm>
#include <cmath>

namespace collapse {

double full_truncation_step(double state, double drift_const, double friction,
                            double sqrt_diffusion, double dt, double dw) {
  const double clipped = std::max(state, 0.0);
  const double next = state + (drift_const - friction * clipped) * dt +
                      sqrt_diffusion * std::sqrt(clipped) * dw;
  if (!std::isfinite(next))
    throw std::runtime_error("full_truncation_step: non-finite state");
  return std::max(next, 0.0);
}

}  // namespace collapse
