#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fiid/factor.hpp"
#include "fiid/graph.hpp"
#include "fiid/rng.hpp"

namespace fiid::test {

// Raw label bits whose value() is the largest representable number <= x.
inline std::uint64_t bits_for(double x) {
  const auto k = static_cast<std::uint64_t>(std::ldexp(x, 53));
  return (k - 1) << 11;
}

// The graph with vertex v renamed perm[v]. Slot order within each vertex is
// rotated by `rotate` so the factor cannot depend on port numbering.
inline RegularMultigraph relabel(const RegularMultigraph& g, const std::vector<Vertex>& perm, int rotate) {
  const int d = g.d();
  auto image = [&](HalfEdge h) {
    const Vertex v = g.owner(h);
    const int slot = static_cast<int>(h - g.first_half_edge(v));
    return static_cast<HalfEdge>(perm[v]) * d + static_cast<HalfEdge>((slot + rotate) % d);
  };
  std::vector<HalfEdge> pairing(g.half_edge_count());
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) pairing[image(h)] = image(g.partner(h));
  return RegularMultigraph(g.n(), d, std::move(pairing));
}

inline std::vector<Vertex> random_permutation(std::size_t n, Rng& rng) {
  std::vector<Vertex> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Vertex>(i);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

}  // namespace fiid::test
