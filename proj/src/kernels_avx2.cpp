#include <immintrin.h>

#include "fiid/kernels.hpp"

namespace fiid::kernels::avx2 {

namespace {

inline std::uint64_t horizontal_sum_epi64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

void threshold_below(std::span<const std::uint64_t> bits, std::uint64_t cutoff, std::span<std::uint8_t> out) {
  const std::size_t size = bits.size();
  // After the shift values are < 2^53, so the signed 64-bit compare is exact.
  const __m256i limit = _mm256_set1_epi64x(static_cast<long long>(cutoff));
  std::size_t i = 0;
  for (; i + 4 <= size; i += 4) {
    const __m256i x = _mm256_srli_epi64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits.data() + i)), 11);
    const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpgt_epi64(limit, x)));
    out[i] = mask & 1;
    out[i + 1] = (mask >> 1) & 1;
    out[i + 2] = (mask >> 2) & 1;
    out[i + 3] = (mask >> 3) & 1;
  }
  for (; i < size; ++i) out[i] = (bits[i] >> 11) < cutoff ? 1 : 0;
}

void strict_local_min(std::span<const std::uint64_t> labels, std::span<const std::uint32_t> adjacency, int d,
                      std::span<std::uint8_t> out) {
  const std::size_t size = labels.size();
  const auto width = static_cast<std::size_t>(d);
  const auto* base = reinterpret_cast<const long long*>(labels.data());
  const __m256i sign = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  const __m128i stride = _mm_setr_epi32(0, d, 2 * d, 3 * d);
  std::size_t v = 0;
  for (; v + 4 <= size; v += 4) {
    const __m256i own = _mm256_xor_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(labels.data() + v)), sign);
    __m256i all_less = _mm256_set1_epi64x(-1);
    for (std::size_t s = 0; s < width; ++s) {
      const __m128i slot = _mm_add_epi32(stride, _mm_set1_epi32(static_cast<int>(v * width + s)));
      const __m128i nb = _mm_i32gather_epi32(reinterpret_cast<const int*>(adjacency.data()), slot, 4);
      const __m256i other = _mm256_xor_si256(_mm256_i32gather_epi64(base, nb, 8), sign);
      all_less = _mm256_and_si256(all_less, _mm256_cmpgt_epi64(other, own));
    }
    const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(all_less));
    out[v] = mask & 1;
    out[v + 1] = (mask >> 1) & 1;
    out[v + 2] = (mask >> 2) & 1;
    out[v + 3] = (mask >> 3) & 1;
  }
  for (; v < size; ++v) {
    std::uint8_t is_min = 1;
    for (std::size_t s = 0; s < width && is_min; ++s) is_min = labels[v] < labels[adjacency[v * width + s]];
    out[v] = is_min;
  }
}

std::uint64_t member_pair_count(std::span<const std::uint8_t> member, std::span<const std::uint32_t> adjacency,
                                int d) {
  const std::size_t size = member.size();
  if (size < 4) return scalar::member_pair_count(member, adjacency, d);
  const std::size_t total = adjacency.size();
  const auto* bytes = reinterpret_cast<const int*>(member.data());
  // Byte gathers: load the dword at min(idx, size - 4) and shift the wanted byte down.
  const __m256i last_start = _mm256_set1_epi32(static_cast<int>(size - 4));
  const __m256i byte_mask = _mm256_set1_epi32(0xff);
  __m256i acc = _mm256_setzero_si256();
  // Lane j tracks half-edge h + j as (owner, slot) with slot < d.
  alignas(32) std::int32_t owner0[8];
  alignas(32) std::int32_t slot0[8];
  for (int j = 0; j < 8; ++j) {
    owner0[j] = j / d;
    slot0[j] = j % d;
  }
  __m256i owner = _mm256_load_si256(reinterpret_cast<const __m256i*>(owner0));
  __m256i slot = _mm256_load_si256(reinterpret_cast<const __m256i*>(slot0));
  const __m256i eight = _mm256_set1_epi32(8);
  const __m256i d_vec = _mm256_set1_epi32(d);
  const __m256i d_minus_one = _mm256_set1_epi32(d - 1);
  const int carries = (8 + d - 1) / d;
  std::size_t h = 0;
  for (; h + 8 <= total; h += 8) {
    const __m256i nb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(adjacency.data() + h));
    const __m256i clamped = _mm256_min_epu32(nb, last_start);
    const __m256i shift = _mm256_slli_epi32(_mm256_sub_epi32(nb, clamped), 3);
    const __m256i far_end = _mm256_and_si256(_mm256_srlv_epi32(_mm256_i32gather_epi32(bytes, clamped, 1), shift), byte_mask);
    const __m256i own_idx = owner;
    const __m256i own_clamped = _mm256_min_epu32(own_idx, last_start);
    const __m256i own_shift = _mm256_slli_epi32(_mm256_sub_epi32(own_idx, own_clamped), 3);
    const __m256i near_end =
        _mm256_and_si256(_mm256_srlv_epi32(_mm256_i32gather_epi32(bytes, own_clamped, 1), own_shift), byte_mask);
    const __m256i both = _mm256_and_si256(near_end, far_end);
    acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(both)));
    acc = _mm256_add_epi64(acc, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(both, 1)));
    // Advance owner/slot lanes by 8 half-edges.
    slot = _mm256_add_epi32(slot, eight);
    for (int k = 0; k < carries; ++k) {
      const __m256i wrapped = _mm256_cmpgt_epi32(slot, d_minus_one);
      slot = _mm256_sub_epi32(slot, _mm256_and_si256(wrapped, d_vec));
      owner = _mm256_sub_epi32(owner, wrapped);
    }
  }
  std::uint64_t total_pairs = horizontal_sum_epi64(acc);
  for (; h < total; ++h) total_pairs += member[h / static_cast<std::size_t>(d)] & member[adjacency[h]];
  return total_pairs;
}

std::uint64_t and_accumulate(std::span<std::uint8_t> acc, std::span<const std::uint8_t> mask) {
  const std::size_t size = acc.size();
  std::uint64_t count = 0;
  std::size_t i = 0;
  const __m256i zero = _mm256_setzero_si256();
  for (; i + 32 <= size; i += 32) {
    auto* dst = reinterpret_cast<__m256i*>(acc.data() + i);
    const __m256i merged =
        _mm256_and_si256(_mm256_loadu_si256(dst), _mm256_loadu_si256(reinterpret_cast<const __m256i*>(mask.data() + i)));
    _mm256_storeu_si256(dst, merged);
    const auto zeros = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(merged, zero)));
    count += 32 - static_cast<std::uint64_t>(__builtin_popcount(zeros));
  }
  for (; i < size; ++i) {
    acc[i] &= mask[i];
    count += acc[i] != 0;
  }
  return count;
}

}  // namespace fiid::kernels::avx2
