#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fiid {

using Seed = std::uint64_t;

// splitmix64 finalizer; a bijection on 64-bit words with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seeds for independent streams are derived from (seed, purpose, index), so
// adding a new consumer never shifts the streams of existing ones.
constexpr Seed derive_seed(Seed seed, std::string_view purpose, std::uint64_t index = 0) noexcept {
  return mix64(mix64(seed ^ hash_tag(purpose)) + mix64(index ^ 0x5851f42d4c957f2dULL));
}

// Real value of 64 raw label bits, in (0, 1]. The top 53 bits are used.
constexpr double unit_from_bits(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Largest k such that unit_from_bits(b) <= p exactly when (b >> 11) < k.
std::uint64_t threshold_cutoff(double p);

// Auxiliary coordinate `coordinate` carved out of a single label.
constexpr std::uint64_t sub_bits(std::uint64_t label, std::uint64_t coordinate) noexcept {
  return mix64(label ^ mix64(coordinate * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  double uniform() { return unit_from_bits(engine_()); }
  bool bernoulli(double p) { return uniform() <= p; }
  // Unbiased integer in [0, bound) (Lemire's multiply-shift rejection).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fiid
