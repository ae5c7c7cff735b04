#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace specwave {

// Deterministic random helpers. std::mt19937_64 has a fully specified output
// sequence, but the standard distributions do not, so uniforms and normals
// are produced here with fixed algorithms to keep artifacts byte-identical
// across platforms and standard libraries.

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Uniform on [0, 1): top 53 bits of the generator word.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

// Standard normal via Box-Muller; one draw per call, the paired value is
// discarded to keep the stream position independent of call parity.
inline double standard_normal(std::mt19937_64& gen) {
  double u1 = uniform01(gen);
  double u2 = uniform01(gen);
  while (u1 <= 0.0) u1 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace specwave
