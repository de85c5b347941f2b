#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace collapse {

// Philox-4x64-10 counter-based generator. A stream is keyed by
// (seed, stream_id); giving every trajectory its own stream_id makes ensemble
// results independent of scheduling, thread count, and evaluation order, and
// exactly reproducible from the pair alone.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on the open interval (0,1), 53-bit resolution; never returns an
  // endpoint, so it is safe to feed through logs and quantile functions.
  double next_uniform();

  // Standard normal via the inverse CDF; one uniform consumed per draw.
  double next_normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // UniformRandomBitGenerator interface.
  using result_type = std::uint64_t;
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ull; }
  std::uint64_t operator()() { return next_u64(); }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint64_t, 4> counter_{};
  std::array<std::uint64_t, 4> block_{};
  int pos_ = 4;
};

// Inverse of the standard normal CDF (Wichura's algorithm AS 241, double
// precision branch). Accurate to ~1e-15 over (0,1); throws outside.
double normal_quantile(double p);

// n Gaussian increments with variance dt each.
std::vector<double> brownian_increments(RngStream& stream, std::size_t n,
                                        double dt);

// Poisson draw; exact multiplication method for small means, transformed
// rejection (PTRD) for mean >= 10.
std::uint64_t poisson_sample(RngStream& stream, double mean);

// Gamma draw by Marsaglia-Tsang squeeze; shape < 1 handled by boosting.
double gamma_sample(RngStream& stream, double shape, double scale);

// Noncentral chi-square via its Poisson mixture of central chi-squares:
// N ~ Poisson(noncentrality/2), then Gamma(df/2 + N, scale 2).
double gamma_poisson_ncx2_sample(RngStream& stream, double df,
                                 double noncentrality);

}  // namespace collapse
