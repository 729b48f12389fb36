#pragma once

#include <cstdint>

namespace chanalloc {

// Deterministic counter-based random stream.  Each draw hashes
// (seed, counter) with a splitmix64-style finalizer, so results are
// reproducible across platforms and independent of call-site history
// length.  Trial streams are derived from a base seed and a trial index.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix(seed_ + kGamma * counter_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_range(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Uniform integer in [0, n).  Multiplicative range reduction; the modulo
  // bias at 64 bits is far below anything observable.
  std::uint64_t next_below(std::uint64_t n) {
    if (n == 0) return 0;
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool next_bool(double p) { return next_unit() < p; }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed ^ mix(stream + kGamma));
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace chanalloc
