#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fiid/rng.hpp"

namespace fiid {

using Vertex = std::uint32_t;
using HalfEdge = std::uint32_t;

// A d-regular multigraph on n vertices stored as a pairing of its nd
// half-edges. Half-edges of vertex v are v*d, ..., v*d + d - 1. Loops and
// parallel edges are allowed; a loop contributes 2 to its vertex's degree.
class RegularMultigraph {
 public:
  // Validates that `pairing` is a fixed-point-free involution on {0..nd-1}.
  RegularMultigraph(std::size_t n, int d, std::vector<HalfEdge> pairing);

  std::size_t n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::size_t half_edge_count() const noexcept { return pairing_.size(); }
  std::size_t edge_count() const noexcept { return pairing_.size() / 2; }

  HalfEdge partner(HalfEdge h) const noexcept { return pairing_[h]; }
  Vertex owner(HalfEdge h) const noexcept { return static_cast<Vertex>(h / static_cast<HalfEdge>(d_)); }
  HalfEdge first_half_edge(Vertex v) const noexcept { return static_cast<HalfEdge>(v) * static_cast<HalfEdge>(d_); }
  // The vertex at the far end of half-edge `slot` of v.
  Vertex neighbor(Vertex v, int slot) const noexcept { return adjacency_[first_half_edge(v) + slot]; }

  std::span<const HalfEdge> pairing() const noexcept { return pairing_; }
  // adjacency()[h] == owner(partner(h)); row v is the d neighbours of v.
  std::span<const Vertex> adjacency() const noexcept { return adjacency_; }
  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return std::span<const Vertex>(adjacency_).subspan(first_half_edge(v), static_cast<std::size_t>(d_));
  }

  bool operator==(const RegularMultigraph& other) const noexcept {
    return d_ == other.d_ && pairing_ == other.pairing_;
  }

 private:
  std::size_t n_;
  int d_;
  std::vector<HalfEdge> pairing_;
  std::vector<Vertex> adjacency_;
};

// Uniform pairing of the nd half-edges (configuration model).
RegularMultigraph sample_configuration_model(std::size_t n, int d, Seed seed);

// (m)!! for odd m, with (-1)!! = 1. Guarded against overflow of 64 bits.
std::uint64_t double_factorial_odd(long m);

// Exhaustive enumeration of all (nd-1)!! pairings, in lexicographic order of
// the partner of the lowest unpaired half-edge. Oracle use only: nd <= 16.
class PairingEnumerator {
 public:
  static constexpr std::size_t kMaxHalfEdges = 16;

  PairingEnumerator(std::size_t n, int d);

  // Advances to the next pairing; false once all have been produced.
  bool next();
  std::span<const HalfEdge> pairing() const noexcept { return pairing_; }
  RegularMultigraph graph() const;
  std::size_t n() const noexcept { return n_; }
  int d() const noexcept { return d_; }

 private:
  bool advance_from(std::size_t level);
  void complete_from(std::size_t level);

  std::size_t n_;
  int d_;
  std::size_t size_;
  bool started_ = false;
  bool done_ = false;
  std::vector<HalfEdge> pairing_;
  // first_[k], second_[k]: the k-th pair chosen (first_ is the lowest free half-edge).
  std::vector<HalfEdge> first_;
  std::vector<HalfEdge> second_;
  std::vector<bool> used_;
};

// The r-neighbourhood of a vertex as an induced sub-multigraph.
struct RootedBall {
  Vertex center = 0;
  int radius = 0;
  std::vector<Vertex> vertices;      // BFS order, vertices[0] == center
  std::vector<int> depth;            // parallel to `vertices`
  // Edges with both endpoints in the ball, as local vertex indices; loops and
  // parallel edges appear once per underlying edge.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  bool is_tree = true;
};

RootedBall neighborhood(const RegularMultigraph& g, Vertex v, int r);

// tree_ball_flags(g, r)[v] == 1 iff N(v, r) is a tree. Same predicate as
// neighborhood(g, v, r).is_tree, computed with early exit and no allocation per vertex.
std::vector<std::uint8_t> tree_ball_flags(const RegularMultigraph& g, int r);

// counts[l] = number of cycles of length l, for l = 1..max_length (index 0 unused).
// Loops are 1-cycles, pairs of parallel edges are 2-cycles; for l >= 3 each
// cycle on distinct vertices is weighted by the product of edge multiplicities.
std::vector<std::uint64_t> count_cycles_up_to(const RegularMultigraph& g, int max_length);
inline constexpr int kMaxCycleLength = 8;

// Line format: "n d", then "h partner(h)" for every pair with h < partner(h), ascending in h.
void write_graph(std::ostream& out, const RegularMultigraph& g);
RegularMultigraph read_graph(std::istream& in);

}  // namespace fiid
