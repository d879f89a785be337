#pragma once

#include <cstdint>
#include <random>

namespace sdm {

/// Seeded random source with fixed, platform-independent variate
/// transforms. std::mt19937_64 produces an identical stream everywhere;
/// the uniform and normal mappings below are pinned here because the
/// standard library distributions are implementation-defined.
///
/// Normal variates use the Box-Muller transform, keeping only the cosine
/// branch, so each normal consumes exactly two 64-bit draws.
class Rng {
 public:
  /// Recorded in output metadata so runs can be reproduced elsewhere.
  static constexpr const char* kAlgorithm = "mt19937_64/box-muller";

  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in (0, 1], from the high 53 bits of one draw.
  double uniform01();

  /// Standard normal variate.
  double normal();

  /// Uniform integer in [lo, hi], unbiased (rejection sampling).
  int uniform_int(int lo, int hi);

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace sdm
