#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lgl {

/// Seeded 64-bit Mersenne Twister with platform-independent variate transforms.
/// Independent substreams are keyed by (seed, stream) through std::seed_seq.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x4c474cu};
    engine_.seed(seq);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }

  /// Exponential variate with the given rate.
  double exponential(double rate) { return -std::log(uniform_open_left()) / rate; }

  /// Uniform integer on {0, ..., n-1}; n >= 1. Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lgl
