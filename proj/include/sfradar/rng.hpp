#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace sfr {

/// Deterministic PRNG for simulation runs (xoshiro256++ seeded via
/// splitmix64). Hand-rolled so sequences are identical across compilers
/// and platforms; std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  /// Derives an independent substream from a seed and up to three tags.
  /// Used for per-trial / per-pulse streams so parallel synthesis
  /// reproduces the serial output exactly.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = seed;
    s = splitmix64(s) ^ (a * 0x9E3779B97F4A7C15ULL);
    s = splitmix64(s) ^ (b * 0xC2B2AE3D27D4EB4FULL);
    s = splitmix64(s) ^ (c * 0x165667B19E3779F9ULL);
    return splitmix64(s);
  }

  std::uint64_t next_u64() {
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

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (fresh pair each call, first returned).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi() * u2);
  }

  /// Circular complex Gaussian with E|z|^2 = variance.
  std::complex<double> cnormal(double variance = 1.0) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1) * variance);
    return {r * std::cos(two_pi() * u2), r * std::sin(two_pi() * u2)};
  }

 private:
  static constexpr double two_pi() { return 6.283185307179586476925286766559; }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace sfr
