#pragma once

#include <cstdint>
#include <cmath>
#include <utility>

#include "mwt/constants.hpp"

namespace mwt {

/// SplitMix64: the 64-bit generator used everywhere randomness is needed.
/// It is tiny, portable, and splittable: `stream(seed, index)` derives an
/// independent stream per index, so draws do not depend on iteration order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in (0, 1]; never returns 0 so log() is safe.
  double next_unit() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform double in [-1, 1).
  double next_symmetric() { return static_cast<double>(next() >> 11) * 0x1.0p-52 - 1.0; }

  /// Avalanche finalizer, usable as a standalone 64-bit hash.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Independent substream: state derived by hashing (seed, index).
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed ^ mix(index + 1)));
  }

 private:
  std::uint64_t state_;
};

/// Box-Muller pair of independent standard normal draws.
inline std::pair<double, double> gaussian_pair(SplitMix64& gen) {
  const double u1 = gen.next_unit();
  const double u2 = gen.next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * consts::pi * u2), r * std::sin(2.0 * consts::pi * u2)};
}

}  // namespace mwt
