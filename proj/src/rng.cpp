#include "flmob/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flmob {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view to_string(StreamPurpose purpose) {
  switch (purpose) {
    case StreamPurpose::mobility: return "mobility";
    case StreamPurpose::fading: return "fading";
    case StreamPurpose::compute: return "compute";
    case StreamPurpose::selection: return "selection";
    case StreamPurpose::datagen: return "datagen";
    case StreamPurpose::shuffle: return "shuffle";
    case StreamPurpose::placement: return "placement";
  }
  return "unknown";
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RandomStream::exponential() {
  // 1 - u lies in (0, 1], so the log is finite and the variate is >= 0.
  // A variate of exactly zero would need u == 0 and is re-drawn.
  for (;;) {
    const double e = -std::log1p(-uniform());
    if (e > 0.0) return e;
  }
}

double RandomStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RandomStream::index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("RandomStream::index: empty range");
  // Rejection sampling removes modulo bias.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = max() - (max() % bound);
  for (;;) {
    const std::uint64_t r = engine_();
    if (r < limit) return static_cast<std::size_t>(r % bound);
  }
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

RandomStream derive_stream(std::uint64_t master_seed, StreamPurpose purpose,
                           std::uint64_t round, std::uint64_t index) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(purpose) + 1));
  h = splitmix64(h ^ round);
  h = splitmix64(h ^ index);
  return RandomStream(h);
}

}  // namespace flmob
