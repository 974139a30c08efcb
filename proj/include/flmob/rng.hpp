#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace flmob {

/// Labels for the independent random substreams used by the simulator.
enum class StreamPurpose : std::uint8_t {
  mobility,
  fading,
  compute,
  selection,
  datagen,
  shuffle,
  placement,
};

std::string_view to_string(StreamPurpose purpose);

/// Deterministic random stream.
///
/// Wraps a 64-bit Mersenne twister and exposes the handful of variates the
/// simulator needs. The transforms from raw bits to variates are written out
/// here instead of going through <random> distributions so that a stream
/// yields the same numbers under every standard library.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Exponential with unit mean; strictly positive.
  double exponential();
  /// Standard normal (Box-Muller, one variate per call).
  double normal();
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

/// Derives an independent stream keyed by (seed, purpose, round, index).
///
/// `index` separates per-entity substreams within one round (e.g. one stream
/// per user) so that kernels can run those entities in any order.
RandomStream derive_stream(std::uint64_t master_seed, StreamPurpose purpose,
                           std::uint64_t round, std::uint64_t index = 0);

}  // namespace flmob
