#include "sdm/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sdm/errors.hpp"

namespace sdm {

double Rng::uniform01() {
  // (x >> 11) is uniform over [0, 2^53); +1 shifts the support to (0, 2^53]
  // so log() below never sees zero.
  return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw ArgumentError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() / span * span;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

}  // namespace sdm
