#pragma once

#include <cstdint>

#include "ietlab/rational.hpp"

namespace ietlab {

// xoshiro256** with splitmix64 seeding. Hand-rolled because census
// reproducibility requires a bit-exact stream across platforms and
// standard-library distributions are not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  // Independent per-sample stream: mixing the index through splitmix64
  // decorrelates neighbouring samples.
  Rng(std::uint64_t seed, std::uint64_t stream)
      : Rng(splitmix64_once(seed) ^ splitmix64_once(stream * 0x9E3779B97F4A7C15ull + 1)) {}

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform integer in [0, 2^n).
  Int bits(unsigned n) {
    Int acc = 0;
    unsigned full = n / 64, rest = n % 64;
    for (unsigned i = 0; i < full; ++i) {
      acc <<= 64;
      acc += static_cast<unsigned long>(next());
    }
    if (rest) {
      acc <<= rest;
      acc += static_cast<unsigned long>(next() >> (64 - rest));
    }
    return acc;
  }

  // Uniform Int in [0, bound), bound > 0.
  Int below_int(const Int& bound) {
    unsigned nbits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
    for (;;) {
      Int r = bits(nbits);
      if (r < bound) return r;
    }
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t splitmix64_once(std::uint64_t x) { return splitmix64(x); }
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t s_[4];
};

}  // namespace ietlab
