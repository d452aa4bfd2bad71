#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace stairdet {

// Reproducibility contract (also documented in the README): every random
// quantity in this project comes from a xoshiro256++ stream seeded through
// SplitMix64. The integer stream is bit-exact for a given 64-bit seed on any
// platform; derived doubles go through Box-Muller on that stream.

/// SplitMix64 finalizer (stateless avalanche step).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// One SplitMix64 step: advances `state` and returns the next output.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  return mix64(state);
}

/// Stream-seed derivation for parallel work units. Feeds `master`, then
/// `lane`, then `index` through the SplitMix64 finalizer, so any (lane,
/// index) pair owns an independent stream regardless of scheduling order.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t lane,
                                        std::uint64_t index) {
  std::uint64_t s = mix64(master ^ 0x6A09E667F3BCC909ULL);
  s = mix64(s ^ (lane + 1) * 0x9E3779B97F4A7C15ULL);
  s = mix64(s ^ (index + 1) * 0xC2B2AE3D27D4EB4FULL);
  return s;
}

/// xoshiro256++ (Blackman & Vigna). State expanded from the 64-bit seed via
/// SplitMix64. Single-owner object: never share one instance across threads.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 significant bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// One uniform bit (top bit of the next word).
  int bit() { return static_cast<int>(next() >> 63); }

  /// Circularly symmetric complex Gaussian CN(0,1): real and imaginary parts
  /// each N(0, 1/2). Box-Muller, consuming exactly two uniforms per draw.
  std::complex<double> cn01() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    const double ang = 2.0 * M_PI * u2;
    return {r * std::cos(ang), r * std::sin(ang)};
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace stairdet
