#include "fiid/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace fiid::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(FIID_BUILD_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("FIID_SIMD"); env != nullptr && std::string(env) == "scalar") return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() { return cpu_has_avx2(); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

#if defined(FIID_BUILD_AVX2)
#define FIID_DISPATCH(call) \
  (active_isa() == Isa::avx2 ? avx2::call : scalar::call)
#else
#define FIID_DISPATCH(call) scalar::call
#endif

void threshold_below(std::span<const std::uint64_t> bits, std::uint64_t cutoff, std::span<std::uint8_t> out) {
  FIID_DISPATCH(threshold_below(bits, cutoff, out));
}

void strict_local_min(std::span<const std::uint64_t> labels, std::span<const std::uint32_t> adjacency, int d,
                      std::span<std::uint8_t> out) {
  FIID_DISPATCH(strict_local_min(labels, adjacency, d, out));
}

std::uint64_t member_pair_count(std::span<const std::uint8_t> member, std::span<const std::uint32_t> adjacency,
                                int d) {
  return FIID_DISPATCH(member_pair_count(member, adjacency, d));
}

std::uint64_t and_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> mask) {
  return FIID_DISPATCH(and_accumulate(acc, mask));
}

#undef FIID_DISPATCH

}  // namespace fiid::kernels

#if !defined(FIID_BUILD_AVX2)
// Non-x86 builds: the avx2 namespace forwards to the reference kernels.
namespace fiid::kernels::avx2 {
void threshold_below(std::span<const std::uint64_t> bits, std::uint64_t cutoff, std::span<std::uint8_t> out) {
  scalar::threshold_below(bits, cutoff, out);
}
void strict_local_min(std::span<const std::uint64_t> labels, std::span<const std::uint32_t> adjacency, int d,
                      std::span<std::uint8_t> out) {
  scalar::strict_local_min(labels, adjacency, d, out);
}
std::uint64_t member_pair_count(std::span<const std::uint8_t> member, std::span<const std::uint32_t> adjacency,
                                int d) {
  return scalar::member_pair_count(member, adjacency, d);
}
std::uint64_t and_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> mask) {
  return scalar::and_accumulate(acc, mask);
}
}  // namespace fiid::kernels::avx2
#endif
