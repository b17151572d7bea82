#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fiid/graph.hpp"
#include "fiid/rng.hpp"

namespace fiid {

using EdgeId = std::uint32_t;

// Undirected edges of a multigraph, one per half-edge pair (h, partner(h)) with h < partner(h).
struct EdgeList {
  std::size_t n = 0;
  std::vector<Vertex> a, b;
  std::vector<HalfEdge> half;  // lower half-edge of the pair

  std::size_t size() const noexcept { return a.size(); }
  bool is_loop(EdgeId e) const noexcept { return a[e] == b[e]; }
};

EdgeList edge_list(const RegularMultigraph& g);

// Maximum-cardinality matching on the edges with active[e] = 1 (Edmonds'
// blossom algorithm from a randomized greedy start). Returns the matched edge
// ids if the matching is perfect, nothing otherwise.
std::optional<std::vector<EdgeId>> perfect_matching(const EdgeList& edges, std::span<const std::uint8_t> active,
                                                    Rng& rng);
std::optional<std::vector<EdgeId>> perfect_matching(const RegularMultigraph& g, Seed seed);

struct MatchingPeel {
  std::vector<std::vector<EdgeId>> layers;  // M_1..M_{d-2}; the last is the final matching M_{d-2}
  std::vector<EdgeId> residual;             // the 2-factor
  int attempts = 0;
};

inline constexpr int kPeelBudget = 20;

// d-2 edge-disjoint perfect matchings and the remaining 2-factor. A failed
// layer restarts the whole peel with a fresh derived seed, up to `budget`
// attempts; exhaustion raises ConstructionFailure naming the layer.
MatchingPeel matching_peel(const RegularMultigraph& g, Seed seed, int budget = kPeelBudget);

// One cycle of the 2-factor: edges[i] joins vertices[i] and vertices[(i+1) % size].
struct FactorCycle {
  std::vector<Vertex> vertices;
  std::vector<EdgeId> edges;
  std::vector<std::uint8_t> points_in;  // final-matching edge oriented into the vertex
  std::vector<std::uint32_t> segment;   // segment index along the cycle
  bool coherent = false;                // zero class flips: oriented as one directed cycle
};

struct Orientation {
  std::size_t n = 0;
  EdgeList edges;
  std::vector<Vertex> tail, head;  // per edge id: tail -> head
  std::vector<FactorCycle> cycles;
  bool outside_theorem = false;    // d = 2
  int peel_attempts = 0;

  std::vector<int> in_degree() const;
  std::vector<int> out_degree() const;
};

Orientation orient_no_source_sink(const RegularMultigraph& g, Seed seed);

struct Certificate {
  std::vector<Vertex> sources, sinks;
  bool ok() const noexcept { return sources.empty() && sinks.empty(); }
};

Certificate certify(const Orientation& orientation);

}  // namespace fiid
