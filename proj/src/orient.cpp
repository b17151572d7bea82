#include "fiid/orient.hpp"

#include <string>

#include "fiid/error.hpp"

namespace fiid {

MatchingPeel matching_peel(const RegularMultigraph& g, Seed seed, int budget) {
  const int d = g.d();
  if (d < 3) throw InvalidInput("d", "matching peel needs d >= 3");
  if (g.n() % 2 != 0) throw InvalidInput("n", "perfect matchings need n even");
  if (budget < 1) throw InvalidInput("budget", "must be positive");
  const EdgeList edges = edge_list(g);
  int failed_layer = 0;
  for (int attempt = 0; attempt < budget; ++attempt) {
    Rng rng(derive_seed(seed, "matching-peel", static_cast<std::uint64_t>(attempt)));
    std::vector<std::uint8_t> active(edges.size(), 1);
    MatchingPeel peel;
    peel.attempts = attempt + 1;
    bool ok = true;
    for (int layer = 1; layer <= d - 2; ++layer) {
      auto m = perfect_matching(edges, active, rng);
      if (!m) {
        ok = false;
        failed_layer = layer;
        break;
      }
      for (EdgeId e : *m) active[e] = 0;
      peel.layers.push_back(std::move(*m));
    }
    if (!ok) continue;
    for (EdgeId e = 0; e < edges.size(); ++e) {
      if (active[e]) peel.residual.push_back(e);
    }
    return peel;
  }
  throw ConstructionFailure("matching peel failed at layer " + std::to_string(failed_layer) + " after " +
                            std::to_string(budget) + " attempts");
}

std::vector<int> Orientation::in_degree() const {
  std::vector<int> deg(n, 0);
  for (Vertex h : head) ++deg[h];
  return deg;
}

std::vector<int> Orientation::out_degree() const {
  std::vector<int> deg(n, 0);
  for (Vertex t : tail) ++deg[t];
  return deg;
}

namespace {

// Splits a 2-regular edge set into cycles. Loops become 1-cycles.
std::vector<FactorCycle> decompose_cycles(const EdgeList& edges, std::span<const EdgeId> factor) {
  const std::size_t n = edges.n;
  std::vector<std::vector<EdgeId>> inc(n);
  for (EdgeId e : factor) {
    inc[edges.a[e]].push_back(e);
    if (!edges.is_loop(e)) inc[edges.b[e]].push_back(e);
  }
  std::vector<bool> used(edges.size(), false);
  std::vector<bool> visited(n, false);
  std::vector<FactorCycle> cycles;
  for (Vertex s = 0; s < n; ++s) {
    if (visited[s] || inc[s].empty()) continue;
    FactorCycle c;
    Vertex v = s;
    for (;;) {
      visited[v] = true;
      EdgeId next = 0;
      bool found = false;
      for (EdgeId e : inc[v]) {
        if (!used[e]) {
          next = e;
          found = true;
          break;
        }
      }
      if (!found) break;
      used[next] = true;
      c.vertices.push_back(v);
      c.edges.push_back(next);
      const Vertex w = edges.a[next] == v ? edges.b[next] : edges.a[next];
      if (w == s) break;
      v = w;
    }
    cycles.push_back(std::move(c));
  }
  return cycles;
}

void orient_along(Orientation& o, const FactorCycle& c, std::size_t i, bool forward) {
  const std::size_t L = c.vertices.size();
  const Vertex u = c.vertices[i], w = c.vertices[(i + 1) % L];
  const EdgeId e = c.edges[i];
  o.tail[e] = forward ? u : w;
  o.head[e] = forward ? w : u;
}

}  // namespace

Orientation orient_no_source_sink(const RegularMultigraph& g, Seed seed) {
  const int d = g.d();
  if (d < 2) throw InvalidInput("d", "orientation without sources or sinks needs d >= 2");
  Orientation o;
  o.n = g.n();
  o.edges = edge_list(g);
  o.tail.assign(o.edges.size(), 0);
  o.head.assign(o.edges.size(), 0);
  Rng rng(derive_seed(seed, "orientation"));

  std::vector<EdgeId> factor;
  std::vector<int> final_edge(g.n(), -1);  // M_{d-2} edge at each vertex
  if (d == 2) {
    o.outside_theorem = true;
    for (EdgeId e = 0; e < o.edges.size(); ++e) factor.push_back(e);
  } else {
    const MatchingPeel peel = matching_peel(g, seed);
    o.peel_attempts = peel.attempts;
    for (const auto& layer : peel.layers) {
      for (EdgeId e : layer) {
        const bool flip = rng.bits() & 1;
        o.tail[e] = flip ? o.edges.b[e] : o.edges.a[e];
        o.head[e] = flip ? o.edges.a[e] : o.edges.b[e];
      }
    }
    for (EdgeId e : peel.layers.back()) {
      final_edge[o.edges.a[e]] = static_cast<int>(e);
      final_edge[o.edges.b[e]] = static_cast<int>(e);
    }
    factor = peel.residual;
  }

  o.cycles = decompose_cycles(o.edges, factor);
  for (auto& c : o.cycles) {
    const std::size_t L = c.vertices.size();
    c.points_in.assign(L, 0);
    c.segment.assign(L, 0);
    if (d > 2) {
      for (std::size_t i = 0; i < L; ++i) {
        c.points_in[i] = o.head[static_cast<EdgeId>(final_edge[c.vertices[i]])] == c.vertices[i];
      }
    }
    std::size_t flips = 0;
    std::size_t first_flip = 0;
    for (std::size_t i = 0; i < L; ++i) {
      if (c.points_in[i] != c.points_in[(i + 1) % L]) {
        if (flips == 0) first_flip = i;
        ++flips;
      }
    }
    if (flips == 0) {
      c.coherent = true;
      const bool forward = rng.bits() & 1;
      for (std::size_t i = 0; i < L; ++i) orient_along(o, c, i, forward);
      continue;
    }
    // Walk from the vertex after the first flip so that segment 0 starts there.
    const std::size_t start = (first_flip + 1) % L;
    std::uint32_t seg = 0;
    bool forward = rng.bits() & 1;
    for (std::size_t s = 0; s < L; ++s) {
      const std::size_t i = (start + s) % L;
      const std::size_t j = (i + 1) % L;
      c.segment[i] = seg;
      if (c.points_in[i] == c.points_in[j]) {
        orient_along(o, c, i, forward);
      } else {
        // boundary edge: from the vertex whose matching edge points in to the one whose points out
        orient_along(o, c, i, c.points_in[i] != 0);
        ++seg;
        forward = rng.bits() & 1;
      }
    }
  }
  return o;
}

Certificate certify(const Orientation& orientation) {
  const auto in = orientation.in_degree();
  const auto out = orientation.out_degree();
  Certificate c;
  for (Vertex v = 0; v < orientation.n; ++v) {
    if (in[v] == 0) c.sources.push_back(v);
    if (out[v] == 0) c.sinks.push_back(v);
  }
  return c;
}

}  // namespace fiid
