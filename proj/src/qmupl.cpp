#include "collapse/qmupl.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "collapse/parallel.hpp"

namespace collapse {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct QuadraticFit {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

// Weighted least squares of y = c0 + c1 u + c2 u^2 via normal equations.
QuadraticFit fit_quadratic(const std::vector<double>& u,
                           const std::vector<double>& y,
                           const std::vector<double>& w) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double wi = w[i], ui = u[i];
    const double u2 = ui * ui;
    s0 += wi;
    s1 += wi * ui;
    s2 += wi * u2;
    s3 += wi * u2 * ui;
    s4 += wi * u2 * u2;
    b0 += wi * y[i];
    b1 += wi * ui * y[i];
    b2 += wi * u2 * y[i];
  }
  // Solve the 3x3 symmetric system by elimination.
  double m[3][4] = {{s0, s1, s2, b0}, {s1, s2, s3, b1}, {s2, s3, s4, b2}};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    if (m[col][col] == 0.0)
      throw std::runtime_error("curvature fit: singular normal equations");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

// Curvature ratio from the density and unwrapped phase near the peak:
// fits log|psi|^2 and arg(psi) on the window where the density exceeds 5% of
// its maximum (and the absolute floor 1e-12), then returns
// (phase curvature) / (magnitude curvature). Steady packet -> +1.
double curvature_ratio_of(const std::vector<std::complex<double>>& amp,
                          double x_min, double dx, double mean_x) {
  const std::size_t n = amp.size();
  std::vector<double> dens(n);
  double peak = 0.0;
  std::size_t peak_j = 0;
  for (std::size_t j = 0; j < n; ++j) {
    dens[j] = std::norm(amp[j]);
    if (dens[j] > peak) {
      peak = dens[j];
      peak_j = j;
    }
  }
  const double floor = std::max(0.05 * peak, 1e-12);

  std::size_t lo = peak_j, hi = peak_j;
  while (lo > 0 && dens[lo - 1] >= floor) --lo;
  while (hi + 1 < n && dens[hi + 1] >= floor) ++hi;
  if (hi - lo < 8)
    throw std::runtime_error("curvature fit: window narrower than 9 points");

  std::vector<double> u, logd, phase, w;
  u.reserve(hi - lo + 1);
  double prev_arg = std::arg(amp[peak_j]);
  double offset = 0.0;
  // Unwrap outward from the peak in both directions.
  std::vector<double> ph(hi - lo + 1);
  ph[peak_j - lo] = prev_arg;
  for (std::size_t j = peak_j + 1; j <= hi; ++j) {
    double a = std::arg(amp[j]);
    while (a + offset - prev_arg > M_PI) offset -= 2.0 * M_PI;
    while (a + offset - prev_arg < -M_PI) offset += 2.0 * M_PI;
    prev_arg = a + offset;
    ph[j - lo] = prev_arg;
  }
  prev_arg = std::arg(amp[peak_j]);
  offset = 0.0;
  for (std::size_t j = peak_j; j-- > lo;) {
    double a = std::arg(amp[j]);
    while (a + offset - prev_arg > M_PI) offset -= 2.0 * M_PI;
    while (a + offset - prev_arg < -M_PI) offset += 2.0 * M_PI;
    prev_arg = a + offset;
    ph[j - lo] = prev_arg;
  }

  for (std::size_t j = lo; j <= hi; ++j) {
    u.push_back(x_min + static_cast<double>(j) * dx - mean_x);
    logd.push_back(std::log(dens[j]));
    phase.push_back(ph[j - lo]);
    w.push_back(dens[j]);
  }
  const QuadraticFit fd = fit_quadratic(u, logd, w);
  const QuadraticFit fp = fit_quadratic(u, phase, w);
  if (fd.c2 >= 0.0)
    throw std::runtime_error("curvature fit: density not concave at peak");
  return -2.0 * fp.c2 / fd.c2;
}

}  // namespace

double QmuplConfig::sigma_inf() const {
  return std::pow(8.0 * diffusion * mass, -0.25);
}

double QmuplConfig::t_loc() const { return std::sqrt(mass / diffusion); }

void QmuplConfig::validate() const {
  require(diffusion >= 0.0, "QmuplConfig: diffusion must be >= 0");
  require(mass > 0.0, "QmuplConfig: mass must be > 0");
  require(dt > 0.0, "QmuplConfig: dt must be > 0");
  require(t_max > 0.0, "QmuplConfig: t_max must be > 0");
  require(is_power_of_two(n_grid) && n_grid >= 64,
          "QmuplConfig: n_grid must be a power of two >= 64");
  require(initial_width_factor > 0.0,
          "QmuplConfig: initial_width_factor must be > 0");
  require(convergence_rel_tol > 0.0, "QmuplConfig: rel tol must be > 0");
  require(norm_guard > 0.0, "QmuplConfig: norm_guard must be > 0");
}

WaveFunction make_gaussian_packet(std::size_t n_grid, double x_min, double dx,
                                  double width, double center,
                                  double momentum) {
  require(width > 0.0, "make_gaussian_packet: width must be > 0");
  require(dx > 0.0, "make_gaussian_packet: dx must be > 0");
  WaveFunction psi;
  psi.x_min = x_min;
  psi.dx = dx;
  psi.amplitudes.resize(n_grid);
  double norm2 = 0.0;
  for (std::size_t j = 0; j < n_grid; ++j) {
    const double y = x_min + static_cast<double>(j) * dx - center;
    const std::complex<double> a =
        std::exp(std::complex<double>(-y * y / (4.0 * width * width),
                                      momentum * y));
    psi.amplitudes[j] = a;
    norm2 += std::norm(a) * dx;
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& a : psi.amplitudes) a *= scale;
  psi.norm = 1.0;
  return psi;
}

struct QmuplSimulator::FftwState {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t n = 0;

  explicit FftwState(std::size_t n_grid) : n(n_grid) {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    buf = fftw_alloc_complex(n);
    if (!buf) throw std::bad_alloc();
    fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                           FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  }
  ~FftwState() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
  std::complex<double>* amplitudes() {
    return reinterpret_cast<std::complex<double>*>(buf);
  }
  const std::complex<double>* amplitudes() const {
    return reinterpret_cast<const std::complex<double>*>(buf);
  }
};

QmuplSimulator::QmuplSimulator(const QmuplConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const double sigma =
      cfg_.diffusion > 0.0 ? cfg_.sigma_inf() : 1.0;  // free case: any scale
  length_ = cfg_.domain_width > 0.0 ? cfg_.domain_width : 40.0 * sigma;
  dx_ = length_ / static_cast<double>(cfg_.n_grid);
  x_min_ = -0.5 * length_;
  fftw_ = new FftwState(cfg_.n_grid);

  const std::size_t n = cfg_.n_grid;
  wavenumber_.resize(n);
  half_kinetic_.resize(n);
  const double dk = 2.0 * M_PI / length_;
  for (std::size_t j = 0; j < n; ++j) {
    const double k =
        dk * (j <= n / 2 ? static_cast<double>(j)
                         : static_cast<double>(j) - static_cast<double>(n));
    wavenumber_[j] = k;
    // exp(-i k^2 dt / (4m)) with the 1/n of the round trip folded in.
    half_kinetic_[j] =
        std::exp(std::complex<double>(0.0, -k * k * cfg_.dt / (4.0 * cfg_.mass))) /
        static_cast<double>(n);
  }
  initialize_gaussian(cfg_.initial_width_factor * sigma);
}

QmuplSimulator::~QmuplSimulator() { delete fftw_; }

void QmuplSimulator::initialize_gaussian(double width, double center,
                                         double momentum) {
  require(width > 0.0, "initialize_gaussian: width must be > 0");
  require(width * 6.0 < length_,
          "initialize_gaussian: packet too wide for the window");
  x_min_ = center - 0.5 * length_;
  const WaveFunction psi = make_gaussian_packet(cfg_.n_grid, x_min_, dx_,
                                                width, center, momentum);
  std::copy(psi.amplitudes.begin(), psi.amplitudes.end(),
            fftw_->amplitudes());
  t_ = 0.0;
  norm_drift_last_ = 0.0;
  refresh_position_moments();
  refresh_momentum_moments();
}

void QmuplSimulator::set_wavefunction(const WaveFunction& psi) {
  require(psi.size() == cfg_.n_grid, "set_wavefunction: grid size mismatch");
  require(psi.dx > 0.0, "set_wavefunction: dx must be > 0");
  // Adopt the packet's own geometry; renormalize defensively.
  dx_ = psi.dx;
  length_ = psi.dx * static_cast<double>(cfg_.n_grid);
  x_min_ = psi.x_min;
  const double dk = 2.0 * M_PI / length_;
  for (std::size_t j = 0; j < cfg_.n_grid; ++j) {
    const double k = dk * (j <= cfg_.n_grid / 2
                               ? static_cast<double>(j)
                               : static_cast<double>(j) -
                                     static_cast<double>(cfg_.n_grid));
    wavenumber_[j] = k;
    half_kinetic_[j] = std::exp(std::complex<double>(
                           0.0, -k * k * cfg_.dt / (4.0 * cfg_.mass))) /
                       static_cast<double>(cfg_.n_grid);
  }
  double norm2 = 0.0;
  for (const auto& a : psi.amplitudes) norm2 += std::norm(a) * dx_;
  const double scale = 1.0 / std::sqrt(norm2);
  std::complex<double>* buf = fftw_->amplitudes();
  for (std::size_t j = 0; j < cfg_.n_grid; ++j)
    buf[j] = psi.amplitudes[j] * scale;
  t_ = 0.0;
  norm_drift_last_ = 0.0;
  refresh_position_moments();
  refresh_momentum_moments();
}

void QmuplSimulator::refresh_position_moments() {
  const std::complex<double>* buf = fftw_->amplitudes();
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t j = 0; j < cfg_.n_grid; ++j) {
    const double d = std::norm(buf[j]);
    m0 += d;
    m1 += d * (x_min_ + static_cast<double>(j) * dx_);
  }
  mean_x_ = m1 / m0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < cfg_.n_grid; ++j) {
    const double y = x_min_ + static_cast<double>(j) * dx_ - mean_x_;
    m2 += std::norm(buf[j]) * y * y;
  }
  var_x_ = m2 / m0;
}

void QmuplSimulator::refresh_momentum_moments() {
  fftw_execute(fftw_->fwd);
  std::complex<double>* buf = fftw_->amplitudes();
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
  for (std::size_t j = 0; j < cfg_.n_grid; ++j) {
    const double d = std::norm(buf[j]);
    w0 += d;
    w1 += d * wavenumber_[j];
    w2 += d * wavenumber_[j] * wavenumber_[j];
  }
  mean_p_ = w1 / w0;
  p2_ = w2 / w0;
  const double inv_n = 1.0 / static_cast<double>(cfg_.n_grid);
  for (std::size_t j = 0; j < cfg_.n_grid; ++j) buf[j] *= inv_n;
  fftw_execute(fftw_->bwd);
}

void QmuplSimulator::renormalize_and_guard() {
  std::complex<double>* buf = fftw_->amplitudes();
  double norm2 = 0.0;
  for (std::size_t j = 0; j < cfg_.n_grid; ++j) norm2 += std::norm(buf[j]);
  norm2 *= dx_;
  norm_drift_last_ = std::fabs(norm2 - 1.0);
  if (norm_drift_last_ > cfg_.norm_guard)
    throw StepSizeError(
        "qmupl step: pre-renormalization norm drift " +
        std::to_string(norm_drift_last_) + " exceeds guard at t = " +
        std::to_string(t_) + "; reduce dt");
  const double scale = 1.0 / std::sqrt(norm2);
  for (std::size_t j = 0; j < cfg_.n_grid; ++j) buf[j] *= scale;
}

void QmuplSimulator::recenter_if_needed() {
  const double center = x_min_ + 0.5 * length_;
  if (std::fabs(mean_x_ - center) <= 0.125 * length_) return;
  const auto shift = static_cast<long>(std::lround((mean_x_ - center) / dx_));
  if (shift == 0) return;
  std::complex<double>* buf = fftw_->amplitudes();
  const long n = static_cast<long>(cfg_.n_grid);
  const long s = ((shift % n) + n) % n;
  std::rotate(buf, buf + s, buf + n);
  x_min_ += static_cast<double>(shift) * dx_;
}

void QmuplSimulator::step(double dw) {
  const std::size_t n = cfg_.n_grid;
  std::complex<double>* buf = fftw_->amplitudes();
  const double d = cfg_.diffusion;
  const double dt = cfg_.dt;
  const double mean_x0 = mean_x_;

  // First kinetic half-step.
  fftw_execute(fftw_->fwd);
  for (std::size_t j = 0; j < n; ++j) buf[j] *= half_kinetic_[j];
  fftw_execute(fftw_->bwd);

  // Multiplicative collapse factor exp(a y + b y^2 + c), y = x - <x> with
  // <x> frozen at the step start. This is the exact stochastic exponential
  // of the noise-plus-drift generator over one step: sqrt(2D) y dW plus
  // -D y^2 dt from the equation and another -D y^2 dt of quadratic-variation
  // correction. The x-independent c cancels the closed-form log-norm a
  // Gaussian density of the measured mean/variance would acquire, so the
  // pre-renormalization drift seen by the guard is purely the
  // non-Gaussian/discretization error.
  if (d > 0.0) {
    const double a = std::sqrt(2.0 * d) * dw;
    const double b = -2.0 * d * dt;

    double h0 = 0.0, h1 = 0.0, h2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = x_min_ + static_cast<double>(j) * dx_ - mean_x0;
      const double dens = std::norm(buf[j]);
      h0 += dens;
      h1 += dens * y;
      h2 += dens * y * y;
    }
    const double mu = h1 / h0;
    const double var = h2 / h0 - mu * mu;

    const double denom = 1.0 - 4.0 * b * var;  // > 1 since b < 0
    const double log_norm2 =
        -0.5 * std::log(denom) +
        (4.0 * mu * a + 4.0 * a * a * var + 4.0 * b * mu * mu) / (2.0 * denom);
    const double c = -0.5 * log_norm2;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = x_min_ + static_cast<double>(j) * dx_ - mean_x0;
      buf[j] *= std::exp((b * y + a) * y + c);
    }
  }

  // Second kinetic half-step; the spectrum en route provides the momentum
  // moments of the completed step for free.
  fftw_execute(fftw_->fwd);
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    buf[j] *= half_kinetic_[j];
    const double dens = std::norm(buf[j]);
    w0 += dens;
    w1 += dens * wavenumber_[j];
    w2 += dens * wavenumber_[j] * wavenumber_[j];
  }
  mean_p_ = w1 / w0;
  p2_ = w2 / w0;
  fftw_execute(fftw_->bwd);

  renormalize_and_guard();
  refresh_position_moments();
  recenter_if_needed();
  t_ += dt;
}

double QmuplSimulator::curvature_ratio() const {
  const std::complex<double>* buf = fftw_->amplitudes();
  std::vector<std::complex<double>> amp(buf, buf + cfg_.n_grid);
  return curvature_ratio_of(amp, x_min_, dx_, mean_x_);
}

QmuplTracePoint QmuplSimulator::trace_point() const {
  return {t_, var_x_, curvature_ratio(), mean_x_, mean_p_};
}

WaveFunction QmuplSimulator::wavefunction() const {
  WaveFunction psi;
  psi.x_min = x_min_;
  psi.dx = dx_;
  const std::complex<double>* buf = fftw_->amplitudes();
  psi.amplitudes.assign(buf, buf + cfg_.n_grid);
  psi.norm = 1.0;
  return psi;
}

Observables observables(const WaveFunction& psi) {
  require(psi.size() >= 64, "observables: grid too small");
  require(psi.dx > 0.0, "observables: dx must be > 0");
  const std::size_t n = psi.size();

  double m0 = 0.0, m1 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dens = std::norm(psi.amplitudes[j]);
    m0 += dens;
    m1 += dens * psi.x_at(j);
  }
  Observables obs;
  obs.mean_x = m1 / m0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = psi.x_at(j) - obs.mean_x;
    m2 += std::norm(psi.amplitudes[j]) * y * y;
  }
  obs.var_x = m2 / m0;

  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_complex* buf = fftw_alloc_complex(n);
    fftw_plan fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    auto* amp = reinterpret_cast<std::complex<double>*>(buf);
    std::copy(psi.amplitudes.begin(), psi.amplitudes.end(), amp);
    fftw_execute(fwd);
    const double length = psi.dx * static_cast<double>(n);
    const double dk = 2.0 * M_PI / length;
    double w0 = 0.0, w1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double k =
          dk * (j <= n / 2 ? static_cast<double>(j)
                           : static_cast<double>(j) - static_cast<double>(n));
      const double dens = std::norm(amp[j]);
      w0 += dens;
      w1 += dens * k;
    }
    obs.mean_p = w1 / w0;
    fftw_destroy_plan(fwd);
    fftw_free(buf);
  }

  obs.curvature_ratio =
      curvature_ratio_of(psi.amplitudes, psi.x_min, psi.dx, obs.mean_x);
  return obs;
}

namespace {

std::vector<QmuplTracePoint> run_impl(const QmuplConfig& cfg,
                                      RngStream& stream, bool to_steady) {
  QmuplSimulator sim(cfg);
  const double sqrt_dt = std::sqrt(cfg.dt);
  const double t_loc = cfg.t_loc();
  const auto window =
      static_cast<std::size_t>(std::ceil(t_loc / cfg.dt));
  const double horizon =
      to_steady ? cfg.max_time_factor * t_loc : cfg.t_max;

  std::vector<QmuplTracePoint> trace;
  trace.reserve(static_cast<std::size_t>(horizon / cfg.dt) + 2);
  trace.push_back(sim.trace_point());

  std::vector<double> var_history;
  var_history.reserve(trace.capacity());
  var_history.push_back(sim.var_x());

  while (sim.t() < horizon - 0.5 * cfg.dt) {
    sim.step(sqrt_dt * stream.next_normal());
    trace.push_back(sim.trace_point());
    var_history.push_back(sim.var_x());

    if (to_steady && var_history.size() > window && sim.t() >= t_loc) {
      const std::size_t last = var_history.size() - 1;
      double lo = var_history[last], hi = lo;
      for (std::size_t k = last - window; k <= last; ++k) {
        lo = std::min(lo, var_history[k]);
        hi = std::max(hi, var_history[k]);
      }
      if ((hi - lo) / var_history[last] < cfg.convergence_rel_tol)
        return trace;
    }
  }
  if (to_steady)
    throw ConvergenceError(
        "qmupl: var_x failed to settle within " +
            std::to_string(cfg.max_time_factor) + " localization times",
        std::move(trace));
  return trace;
}

}  // namespace

std::vector<QmuplTracePoint> run_to_steady_state(const QmuplConfig& cfg,
                                                 RngStream& stream) {
  return run_impl(cfg, stream, true);
}

std::vector<QmuplTracePoint> run_fixed_horizon(const QmuplConfig& cfg,
                                               RngStream& stream) {
  return run_impl(cfg, stream, false);
}

std::vector<QmuplRun> run_qmupl_ensemble(const QmuplConfig& cfg,
                                         std::uint64_t seed,
                                         std::size_t n_seeds, bool parallel,
                                         bool to_steady_state) {
  std::vector<QmuplRun> runs(n_seeds);
  for_each_trajectory(n_seeds, parallel, [&](std::size_t s) {
    RngStream stream(seed, s);
    runs[s].stream_id = s;
    runs[s].trace = to_steady_state ? run_to_steady_state(cfg, stream)
                                    : run_fixed_horizon(cfg, stream);
  });
  return runs;
}

}  // namespace collapse
