#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "collapse/energy.hpp"
#include "collapse/parallel.hpp"
#include "collapse/phase.hpp"
#include "collapse/qmupl.hpp"

namespace {

using namespace collapse;
using clock_type = std::chrono::steady_clock;

double seconds_of(const std::function<void()>& fn) {
  const auto start = clock_type::now();
  fn();
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

void report(const char* name, double serial_s, double parallel_s,
            bool identical) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial_s,
              parallel_s, serial_s / parallel_s,
              identical ? "bit-identical" : "MISMATCH");
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

void bench_phase(std::size_t paths) {
  std::vector<PhaseMomentsRow> serial, parallel;
  const double ts = seconds_of([&] {
    serial = simulate_phase_ensemble(1, paths, 1.0, 1.0, 1e-3, 1.0, 20, false);
  });
  const double tp = seconds_of([&] {
    parallel =
        simulate_phase_ensemble(1, paths, 1.0, 1.0, 1e-3, 1.0, 20, true);
  });
  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i)
    identical = std::memcmp(&serial[i], &parallel[i],
                            sizeof(PhaseMomentsRow)) == 0;
  report("phase ensemble", ts, tp, identical);
}

void bench_energy(EnergyScheme scheme, const char* name, std::size_t paths,
                  std::size_t steps) {
  EnergyEnsemble serial, parallel;
  const double dt = 1.0 / static_cast<double>(steps);
  const double ts = seconds_of([&] {
    serial = simulate_energy_ensemble(1, paths, 1.0, 0.1, 1.0, 0.0, 1.0, dt,
                                      scheme, 4, false);
  });
  const double tp = seconds_of([&] {
    parallel = simulate_energy_ensemble(1, paths, 1.0, 0.1, 1.0, 0.0, 1.0, dt,
                                        scheme, 4, true);
  });
  report(name, ts, tp, same_bits(serial.energies, parallel.energies));
}

void bench_qmupl(std::size_t seeds) {
  QmuplConfig cfg;
  cfg.diffusion = 1.0;
  cfg.dt = 1e-3;
  cfg.n_grid = 1024;
  cfg.t_max = 2.0;

  std::vector<QmuplRun> serial, parallel;
  const double ts = seconds_of(
      [&] { serial = run_qmupl_ensemble(cfg, 1, seeds, false, false); });
  const double tp = seconds_of(
      [&] { parallel = run_qmupl_ensemble(cfg, 1, seeds, true, false); });
  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].trace.size() == parallel[i].trace.size();
    for (std::size_t j = 0; identical && j < serial[i].trace.size(); ++j)
      identical = std::memcmp(&serial[i].trace[j], &parallel[i].trace[j],
                              sizeof(QmuplTracePoint)) == 0;
  }
  report("wave-packet ensemble", ts, tp, identical);
}

}  // namespace

int main(int argc, char** argv) {
  // Scale factor for quick smoke runs: bench_kernels 0.1 runs one tenth of
  // the default workload.
  double scale = 1.0;
  if (argc > 1) {
    try {
      scale = std::stod(argv[1]);
    } catch (const std::exception&) {
      scale = 0.0;
    }
    if (scale <= 0.0) {
      std::fprintf(stderr, "usage: %s [workload-scale]\n", argv[0]);
      return 2;
    }
  }
  const auto scaled = [scale](std::size_t n) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(n * scale));
  };

  std::printf("threads: %d\n", max_threads());
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel",
              "speedup");
  bench_phase(scaled(200000));
  bench_energy(EnergyScheme::truncation, "energy ensemble (Euler)",
               scaled(100000), 1000);
  bench_energy(EnergyScheme::exact, "energy ensemble (exact)",
               scaled(2000000), 1);
  bench_qmupl(scaled(16));
  return 0;
}
