#pragma once

#include <cstdint>
#include <random>

namespace ipp {

using Rng = std::mt19937_64;

/// Stream roles keep independent randomness apart when one replica needs
/// several generators (base points, marks, auxiliary draws, second arm).
enum class StreamRole : std::uint64_t {
  Base = 1,
  Marks = 2,
  Aux = 3,
  ArmB = 4,
  Glue = 5,
  Probe = 6,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: the generator for (seed, replica, role)
/// depends on nothing else, so replica scheduling cannot change results.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replica,
                                 StreamRole role) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ (replica * 0xd1342543de82ef95ULL));
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  return h;
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t replica,
                       StreamRole role) {
  return Rng(derive_seed(seed, replica, role));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace ipp
