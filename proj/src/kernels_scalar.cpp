#include "fiid/kernels.hpp"

namespace fiid::kernels::scalar {

void threshold_below(std::span<const std::uint64_t> bits, std::uint64_t cutoff, std::span<std::uint8_t> out) {
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = (bits[i] >> 11) < cutoff ? 1 : 0;
}

void strict_local_min(std::span<const std::uint64_t> labels, std::span<const std::uint32_t> adjacency, int d,
                      std::span<std::uint8_t> out) {
  const auto width = static_cast<std::size_t>(d);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    const std::uint64_t own = labels[v];
    std::uint8_t is_min = 1;
    for (std::size_t s = 0; s < width; ++s) {
      if (!(own < labels[adjacency[v * width + s]])) {
        is_min = 0;
        break;
      }
    }
    out[v] = is_min;
  }
}

std::uint64_t member_pair_count(std::span<const std::uint8_t> member, std::span<const std::uint32_t> adjacency,
                                int d) {
  const auto width = static_cast<std::size_t>(d);
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < member.size(); ++v) {
    if (!member[v]) continue;
    for (std::size_t s = 0; s < width; ++s) total += member[adjacency[v * width + s]];
  }
  return total;
}

std::uint64_t and_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> mask) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i] &= mask[i];
    count += acc[i] != 0;
  }
  return count;
}

}  // namespace fiid::kernels::scalar
