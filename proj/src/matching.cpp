#include <algorithm>
#include <deque>
#include <numeric>

#include "fiid/error.hpp"
#include "fiid/orient.hpp"

namespace fiid {

EdgeList edge_list(const RegularMultigraph& g) {
  EdgeList el;
  el.n = g.n();
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    const HalfEdge p = g.partner(h);
    if (p < h) continue;
    el.a.push_back(g.owner(h));
    el.b.push_back(g.owner(p));
    el.half.push_back(h);
  }
  return el;
}

namespace {

constexpr int kNone = -1;

// Edmonds' algorithm with blossom contraction by base relabelling.
class Blossom {
 public:
  Blossom(const EdgeList& edges, std::span<const std::uint8_t> active, Rng& rng) : n_(edges.n), adj_(edges.n) {
    for (EdgeId e = 0; e < edges.size(); ++e) {
      if (!active[e] || edges.is_loop(e)) continue;
      adj_[edges.a[e]].push_back({static_cast<int>(edges.b[e]), e});
      adj_[edges.b[e]].push_back({static_cast<int>(edges.a[e]), e});
    }
    for (auto& row : adj_) shuffle(row, rng);
    match_.assign(n_, kNone);
    match_edge_.assign(n_, 0);
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    shuffle(order_, rng);
  }

  std::size_t solve() {
    std::size_t size = 0;
    for (int v : order_) {
      if (match_[v] != kNone) continue;
      for (auto [w, e] : adj_[v]) {
        if (match_[w] == kNone) {
          match_[v] = w, match_[w] = v;
          match_edge_[v] = match_edge_[w] = e;
          ++size;
          break;
        }
      }
    }
    for (int v : order_) {
      if (match_[v] != kNone) continue;
      const int end = find_path(v);
      if (end == kNone) continue;
      ++size;
      for (int x = end; x != kNone;) {
        const int px = parent_[x];
        const int next = match_[px];
        match_[x] = px, match_[px] = x;
        match_edge_[x] = match_edge_[px] = parent_edge_[x];
        x = next;
      }
    }
    return size;
  }

  std::vector<EdgeId> matched_edges() const {
    std::vector<EdgeId> out;
    for (std::size_t v = 0; v < n_; ++v) {
      if (match_[v] != kNone && static_cast<int>(v) < match_[v]) out.push_back(match_edge_[v]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Arc {
    int to;
    EdgeId edge;
  };

  template <class T>
  static void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  }

  int lca(int a, int b) {
    std::vector<bool> seen(n_, false);
    for (;;) {
      a = base_[a];
      seen[a] = true;
      if (match_[a] == kNone) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(int v, int b, int child, EdgeId child_edge) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = in_blossom_[base_[match_[v]]] = true;
      parent_[v] = child;
      parent_edge_[v] = child_edge;
      child = match_[v];
      child_edge = parent_edge_[child];
      v = parent_[child];
    }
  }

  int find_path(int root) {
    used_.assign(n_, false);
    parent_.assign(n_, kNone);
    parent_edge_.assign(n_, 0);
    base_.resize(n_);
    std::iota(base_.begin(), base_.end(), 0);
    used_[root] = true;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (auto [to, e] : adj_[v]) {
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != kNone && parent_[match_[to]] != kNone)) {
          const int b = lca(v, to);
          in_blossom_.assign(n_, false);
          mark_path(v, b, to, e);
          mark_path(to, b, v, e);
          for (std::size_t i = 0; i < n_; ++i) {
            if (in_blossom_[base_[i]]) {
              base_[i] = b;
              if (!used_[i]) {
                used_[i] = true;
                queue.push_back(static_cast<int>(i));
              }
            }
          }
        } else if (parent_[to] == kNone) {
          parent_[to] = v;
          parent_edge_[to] = e;
          if (match_[to] == kNone) return to;
          used_[match_[to]] = true;
          queue.push_back(match_[to]);
        }
      }
    }
    return kNone;
  }

  std::size_t n_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<int> match_;
  std::vector<EdgeId> match_edge_;
  std::vector<int> order_;
  std::vector<int> parent_, base_;
  std::vector<EdgeId> parent_edge_;
  std::vector<bool> used_, in_blossom_;
};

}  // namespace

std::optional<std::vector<EdgeId>> perfect_matching(const EdgeList& edges, std::span<const std::uint8_t> active,
                                                    Rng& rng) {
  if (active.size() != edges.size()) throw InvalidInput("active", "size must equal the edge count");
  if (edges.n % 2 != 0) return std::nullopt;
  Blossom solver(edges, active, rng);
  if (solver.solve() * 2 != edges.n) return std::nullopt;
  return solver.matched_edges();
}

std::optional<std::vector<EdgeId>> perfect_matching(const RegularMultigraph& g, Seed seed) {
  const EdgeList edges = edge_list(g);
  const std::vector<std::uint8_t> active(edges.size(), 1);
  Rng rng(derive_seed(seed, "perfect-matching"));
  return perfect_matching(edges, active, rng);
}

}  // namespace fiid
