#include "collapse/parallel.hpp"

#include <cstdlib>
#include <string>

namespace collapse {

int max_threads() {
#ifdef _OPENMP
  int limit = omp_get_max_threads();
#else
  int limit = 1;
#endif
  if (const char* env = std::getenv("COLLAPSE_DIFFUSION_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap < limit) limit = cap;
    } catch (...) {
      // Unparseable cap: ignore and keep the OpenMP default.
    }
  }
  return limit < 1 ? 1 : limit;
}

}  // namespace collapse
