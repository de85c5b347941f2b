#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace collapse {

// Thread budget: OpenMP's limit, further capped by the
// COLLAPSE_DIFFUSION_THREADS environment variable when set.
int max_threads();

// Runs fn(i) for i in [0, n). With parallel = false the loop is strictly
// sequential; with parallel = true iterations are distributed over OpenMP
// threads. Work items must not share mutable state: every trajectory owns its
// RNG stream and output slots, which is what makes both paths bit-identical.
// The first exception thrown by any iteration is rethrown after the loop.
template <class Fn>
void for_each_trajectory(std::size_t n, bool parallel, Fn&& fn) {
#ifdef _OPENMP
  if (parallel && n > 1) {
    std::exception_ptr error;
    std::mutex error_mutex;
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return;
  }
#else
  (void)parallel;
#endif
  for (std::size_t i = 0; i < n; ++i) fn(i);
}

}  // namespace collapse
