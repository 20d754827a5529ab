#pragma once

#include <cmath>
#include <cstdint>

namespace pump::rng {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Counter-based hash of (seed, a, b, c). Every random draw in the library
// is a pure function of such a key, so results do not depend on the order
// in which draws are evaluated.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a,
                                  std::uint64_t b, std::uint64_t c) {
  // the seed is avalanched before any counter is folded in, so nearby
  // (seed, counter) pairs cannot cancel each other out
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h + a);
  h = mix64(h + b);
  h = mix64(h + c);
  return h;
}

// Maps to (0, 1]; never returns zero so it is safe inside a logarithm.
inline double to_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 1.0) * 0x1p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                      std::uint64_t c) {
  return to_unit(counter_hash(seed, a, b, c));
}

// Standard normal draw via Box-Muller on two hashed uniforms. The channel
// argument indexes independent scalar draws.
inline double normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                     std::uint64_t channel) {
  double u1 = to_unit(counter_hash(seed, a, b, 2 * channel));
  double u2 = to_unit(counter_hash(seed, a, b, 2 * channel + 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Distinct draw streams inside one (seed, particle, timestep) key.
enum Stream : std::uint64_t {
  kInitial = 0,
  kProcess = 1 << 20,
  kMeasurement = 2 << 20,
};

}  // namespace pump::rng
