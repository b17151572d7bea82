#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// fiid::kernels::scalar and, on x86-64, an AVX2 variant in fiid::kernels::avx2.
// The unqualified entry points dispatch at runtime; FIID_SIMD=scalar in the
// environment forces the reference path.

#include <cstdint>
#include <span>
#include <string_view>

namespace fiid::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
std::string_view isa_name(Isa isa);
bool avx2_available();
// Overrides the runtime choice (tests and benchmarking). Requesting avx2 on a
// machine without it falls back to scalar.
void force_isa(Isa isa);

// out[i] = (bits[i] >> 11) < cutoff, i.e. unit_from_bits(bits[i]) <= p for cutoff = threshold_cutoff(p).
void threshold_below(std::span<const std::uint64_t> bits, std::uint64_t cutoff, std::span<std::uint8_t> out);

// out[v] = 1 iff labels[v] < labels[w] for every neighbour w of v (adjacency
// rows of width d). A loop makes v its own neighbour, so v is never selected.
void strict_local_min(std::span<const std::uint64_t> labels, std::span<const std::uint32_t> adjacency, int d,
                      std::span<std::uint8_t> out);

// Number of directed edges (u, w) with member[u] = member[w] = 1; member is 0/1.
std::uint64_t member_pair_count(std::span<const std::uint8_t> member, std::span<const std::uint32_t> adjacency,
                                int d);

// acc[i] &= mask[i]; returns the number of nonzero entries of acc afterwards. Entries are 0/1.
std::uint64_t and_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> mask);

namespace scalar {
void threshold_below(std::span<const std::uint64_t> bits, std::uint64_t cutoff, std::span<std::uint8_t> out);
void strict_local_min(std::span<const std::uint64_t> labels, std::span<const std::uint32_t> adjacency, int d,
                      std::span<std::uint8_t> out);
std::uint64_t member_pair_count(std::span<const std::uint8_t> member, std::span<const std::uint32_t> adjacency,
                                int d);
std::uint64_t and_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> mask);
}  // namespace scalar

namespace avx2 {
void threshold_below(std::span<const std::uint64_t> bits, std::uint64_t cutoff, std::span<std::uint8_t> out);
void strict_local_min(std::span<const std::uint64_t> labels, std::span<const std::uint32_t> adjacency, int d,
                      std::span<std::uint8_t> out);
std::uint64_t member_pair_count(std::span<const std::uint8_t> member, std::span<const std::uint32_t> adjacency,
                                int d);
std::uint64_t and_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> mask);
}  // namespace avx2

}  // namespace fiid::kernels
