#include "fiid/rng.hpp"

#include <cmath>

namespace fiid {

std::uint64_t threshold_cutoff(double p) {
  if (!(p > 0.0)) return 0;
  if (p >= 1.0) return std::uint64_t{1} << 53;
  // (k + 1) * 2^-53 <= p  <=>  k + 1 <= floor(p * 2^53); p * 2^53 is exact.
  return static_cast<std::uint64_t>(std::floor(std::ldexp(p, 53)));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  __uint128_t m = static_cast<__uint128_t>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<__uint128_t>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace fiid
