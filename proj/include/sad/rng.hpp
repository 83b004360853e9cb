#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sad/errors.hpp"

namespace sad {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent child seed from a root seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) {
  return splitmix64(root ^ splitmix64(tag));
}

/// Deterministic random draws on top of the mt19937_64 stream. The standard
/// engine's output sequence is specified by the standard; the standard
/// <random> distributions are not, so all mappings are done by hand to keep
/// seeded streams reproducible across platforms and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::BadParameter, "uniform_int: n must be positive");
    return next_u64() % n;
  }

  /// Standard normal via Box-Muller; always consumes exactly two draws.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sad
