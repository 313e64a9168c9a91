#pragma once

#include <cstdint>
#include <random>

#include "cnk/types.hpp"

namespace cnk {

/// Seeded stream used by every randomized rule.
///
/// Generator identity: std::mt19937_64 (the standard fixes its output
/// sequence), seeded with the 64-bit seed directly. A uniform variate takes the
/// top 53 bits of one draw, (u >> 11) * 2^-53, so streams are identical across
/// platforms and standard libraries. std::*_distribution is avoided for the
/// same reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., n-1}; n >= 1.
  Index uniform_index(Index n);

  /// Standard normal via Box-Muller (one variate per call).
  double normal();

  Vector normal_vector(Index n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cnk
