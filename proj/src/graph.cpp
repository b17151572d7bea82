#include "fiid/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "fiid/error.hpp"

namespace fiid {

RegularMultigraph::RegularMultigraph(std::size_t n, int d, std::vector<HalfEdge> pairing)
    : n_(n), d_(d), pairing_(std::move(pairing)) {
  if (n == 0) throw InvalidInput("n", "must be positive");
  if (d <= 0) throw InvalidInput("d", "must be positive");
  const std::size_t total = n * static_cast<std::size_t>(d);
  if (total > std::numeric_limits<HalfEdge>::max()) throw InvalidInput("n", "nd exceeds 32-bit half-edge range");
  if (total % 2 != 0) throw InvalidInput("n", "nd must be even");
  if (pairing_.size() != total) throw InvalidInput("pairing", "size must equal nd");
  for (std::size_t h = 0; h < total; ++h) {
    const HalfEdge p = pairing_[h];
    if (p >= total) throw InvalidInput("pairing", "partner out of range at half-edge " + std::to_string(h));
    if (p == h) throw InvalidInput("pairing", "half-edge " + std::to_string(h) + " paired with itself");
    if (pairing_[p] != h) throw InvalidInput("pairing", "not an involution at half-edge " + std::to_string(h));
  }
  adjacency_.resize(total);
  for (std::size_t h = 0; h < total; ++h) adjacency_[h] = owner(pairing_[h]);
}

RegularMultigraph sample_configuration_model(std::size_t n, int d, Seed seed) {
  if (n == 0) throw InvalidInput("n", "must be positive");
  if (d <= 0) throw InvalidInput("d", "must be positive");
  const std::size_t total = n * static_cast<std::size_t>(d);
  if (total % 2 != 0) throw InvalidInput("n", "nd must be even (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");

  std::vector<HalfEdge> order(total);
  for (std::size_t h = 0; h < total; ++h) order[h] = static_cast<HalfEdge>(h);
  Rng rng(derive_seed(seed, "configuration-model"));
  // Fisher-Yates; consecutive entries of a uniform permutation form a uniform pairing.
  for (std::size_t i = total - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<HalfEdge> pairing(total);
  for (std::size_t i = 0; i < total; i += 2) {
    pairing[order[i]] = order[i + 1];
    pairing[order[i + 1]] = order[i];
  }
  return RegularMultigraph(n, d, std::move(pairing));
}

std::uint64_t double_factorial_odd(long m) {
  if (m < -1 || (m >= 0 && m % 2 == 0)) throw InvalidInput("m", "must be odd or -1");
  std::uint64_t result = 1;
  for (long k = m; k > 1; k -= 2) {
    if (result > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(k)) {
      throw InvalidInput("m", "double factorial overflows 64 bits");
    }
    result *= static_cast<std::uint64_t>(k);
  }
  return result;
}

// ---------------------------------------------------------------------------

PairingEnumerator::PairingEnumerator(std::size_t n, int d) : n_(n), d_(d) {
  if (n == 0 || d <= 0) throw InvalidInput("n", "n and d must be positive");
  size_ = n * static_cast<std::size_t>(d);
  if (size_ % 2 != 0) throw InvalidInput("n", "nd must be even");
  if (size_ > kMaxHalfEdges) {
    throw OracleGuard("pairing enumeration refused: nd = " + std::to_string(size_) + " exceeds " +
                      std::to_string(kMaxHalfEdges));
  }
  pairing_.assign(size_, 0);
  first_.assign(size_ / 2, 0);
  second_.assign(size_ / 2, 0);
  used_.assign(size_, false);
}

void PairingEnumerator::complete_from(std::size_t level) {
  for (std::size_t k = level; k < size_ / 2; ++k) {
    HalfEdge a = 0;
    while (used_[a]) ++a;
    HalfEdge b = a + 1;
    while (used_[b]) ++b;
    first_[k] = a;
    second_[k] = b;
    used_[a] = used_[b] = true;
    pairing_[a] = b;
    pairing_[b] = a;
  }
}

bool PairingEnumerator::advance_from(std::size_t level) {
  // Try to move pair `level` to its next admissible partner; on exhaustion
  // release it and backtrack.
  for (std::size_t k = level + 1; k-- > 0;) {
    used_[second_[k]] = false;
    HalfEdge b = second_[k] + 1;
    while (b < size_ && used_[b]) ++b;
    if (b < size_) {
      second_[k] = b;
      used_[b] = true;
      pairing_[first_[k]] = b;
      pairing_[b] = first_[k];
      complete_from(k + 1);
      return true;
    }
    used_[first_[k]] = false;
  }
  return false;
}

bool PairingEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    complete_from(0);
    return true;
  }
  // Release every pair deeper than the last level, then advance.
  const std::size_t last = size_ / 2 - 1;
  if (!advance_from(last)) {
    done_ = true;
    return false;
  }
  return true;
}

RegularMultigraph PairingEnumerator::graph() const {
  return RegularMultigraph(n_, d_, pairing_);
}

// ---------------------------------------------------------------------------

RootedBall neighborhood(const RegularMultigraph& g, Vertex v, int r) {
  if (v >= g.n()) throw InvalidInput("v", "vertex out of range");
  if (r < 0) throw InvalidInput("r", "radius must be non-negative");
  RootedBall ball;
  ball.center = v;
  ball.radius = r;
  std::map<Vertex, std::uint32_t> local;
  ball.vertices.push_back(v);
  ball.depth.push_back(0);
  local.emplace(v, 0);
  for (std::size_t i = 0; i < ball.vertices.size(); ++i) {
    if (ball.depth[i] == r) continue;
    for (Vertex w : g.neighbors(ball.vertices[i])) {
      if (local.emplace(w, static_cast<std::uint32_t>(ball.vertices.size())).second) {
        ball.vertices.push_back(w);
        ball.depth.push_back(ball.depth[i] + 1);
      }
    }
  }
  for (std::size_t i = 0; i < ball.vertices.size(); ++i) {
    const Vertex u = ball.vertices[i];
    for (int s = 0; s < g.d(); ++s) {
      const HalfEdge h = g.first_half_edge(u) + static_cast<HalfEdge>(s);
      const HalfEdge p = g.partner(h);
      if (p < h) continue;
      auto it = local.find(g.owner(p));
      if (it != local.end()) ball.edges.emplace_back(static_cast<std::uint32_t>(i), it->second);
    }
  }
  ball.is_tree = ball.edges.size() + 1 == ball.vertices.size();
  return ball;
}

std::vector<std::uint8_t> tree_ball_flags(const RegularMultigraph& g, int r) {
  if (r < 0) throw InvalidInput("r", "radius must be non-negative");
  const std::size_t n = g.n();
  const int d = g.d();
  std::vector<std::uint8_t> flags(n, 1);
  if (r == 0) return flags;

  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  struct Entry {
    Vertex vertex;
    HalfEdge entry;  // half-edge of `vertex` through which it was reached
    int depth;
  };
  std::vector<Entry> queue;
  constexpr HalfEdge kNone = std::numeric_limits<HalfEdge>::max();

  for (Vertex v = 0; v < n; ++v) {
    ++epoch;
    queue.clear();
    queue.push_back({v, kNone, 0});
    stamp[v] = epoch;
    bool tree = true;
    for (std::size_t i = 0; i < queue.size() && tree; ++i) {
      const Entry cur = queue[i];
      const HalfEdge base = g.first_half_edge(cur.vertex);
      for (int s = 0; s < d; ++s) {
        const HalfEdge h = base + static_cast<HalfEdge>(s);
        if (h == cur.entry) continue;
        const HalfEdge p = g.partner(h);
        const Vertex w = g.owner(p);
        if (stamp[w] == epoch) {
          tree = false;  // loop, parallel edge, or cross edge inside the ball
          break;
        }
        if (cur.depth < r) {
          stamp[w] = epoch;
          queue.push_back({w, p, cur.depth + 1});
        }
      }
    }
    flags[v] = tree ? 1 : 0;
  }
  return flags;
}

// ---------------------------------------------------------------------------

namespace {

struct SimpleAdjacency {
  // For each vertex, distinct neighbours (excluding itself) with multiplicity.
  std::vector<std::vector<std::pair<Vertex, std::uint32_t>>> rows;
  std::vector<std::uint32_t> loops;
};

SimpleAdjacency collapse(const RegularMultigraph& g) {
  SimpleAdjacency adj;
  adj.rows.resize(g.n());
  adj.loops.assign(g.n(), 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    std::vector<Vertex> nb(g.neighbors(v).begin(), g.neighbors(v).end());
    std::sort(nb.begin(), nb.end());
    for (std::size_t i = 0; i < nb.size();) {
      std::size_t j = i;
      while (j < nb.size() && nb[j] == nb[i]) ++j;
      const auto mult = static_cast<std::uint32_t>(j - i);
      if (nb[i] == v) {
        adj.loops[v] = mult / 2;  // both half-edges of a loop appear in the row
      } else {
        adj.rows[v].emplace_back(nb[i], mult);
      }
      i = j;
    }
  }
  return adj;
}

void extend_paths(const SimpleAdjacency& adj, Vertex start, Vertex current, int length, std::uint64_t weight,
                  int max_length, std::vector<std::uint8_t>& on_path, std::vector<std::uint64_t>& twice_counts) {
  for (const auto& [w, mult] : adj.rows[current]) {
    if (w == start && length >= 3) {
      twice_counts[static_cast<std::size_t>(length)] += weight * mult;
      continue;
    }
    if (w <= start || on_path[w] || length == max_length) continue;
    on_path[w] = 1;
    extend_paths(adj, start, w, length + 1, weight * mult, max_length, on_path, twice_counts);
    on_path[w] = 0;
  }
}

}  // namespace

std::vector<std::uint64_t> count_cycles_up_to(const RegularMultigraph& g, int max_length) {
  if (max_length < 1) throw InvalidInput("L", "must be at least 1");
  if (max_length > kMaxCycleLength) {
    throw OracleGuard("cycle enumeration refused: L = " + std::to_string(max_length) + " exceeds " +
                      std::to_string(kMaxCycleLength));
  }
  const SimpleAdjacency adj = collapse(g);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_length) + 1, 0);
  for (Vertex v = 0; v < g.n(); ++v) counts[1] += adj.loops[v];
  if (max_length >= 2) {
    for (Vertex v = 0; v < g.n(); ++v) {
      for (const auto& [w, mult] : adj.rows[v]) {
        if (w > v) counts[2] += static_cast<std::uint64_t>(mult) * (mult - 1) / 2;
      }
    }
  }
  if (max_length >= 3) {
    // Paths start at their smallest vertex; each cycle is found once per direction.
    std::vector<std::uint64_t> twice(counts.size(), 0);
    std::vector<std::uint8_t> on_path(g.n(), 0);
    for (Vertex s = 0; s < g.n(); ++s) {
      on_path[s] = 1;
      extend_paths(adj, s, s, 1, 1, max_length, on_path, twice);
      on_path[s] = 0;
    }
    for (int l = 3; l <= max_length; ++l) counts[static_cast<std::size_t>(l)] = twice[static_cast<std::size_t>(l)] / 2;
  }
  return counts;
}

// ---------------------------------------------------------------------------

void write_graph(std::ostream& out, const RegularMultigraph& g) {
  out << g.n() << ' ' << g.d() << '\n';
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    const HalfEdge p = g.partner(h);
    if (h < p) out << h << ' ' << p << '\n';
  }
}

RegularMultigraph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("graph", "missing header line");
  std::istringstream header(line);
  long long n = 0;
  long long d = 0;
  if (!(header >> n >> d) || n <= 0 || d <= 0) throw InvalidInput("graph", "header must be \"n d\" with positive values");
  const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
  constexpr HalfEdge kUnset = std::numeric_limits<HalfEdge>::max();
  std::vector<HalfEdge> pairing(total, kUnset);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    long long a = -1;
    long long b = -1;
    if (!(row >> a >> b) || a < 0 || b < 0 || static_cast<std::size_t>(a) >= total ||
        static_cast<std::size_t>(b) >= total) {
      throw InvalidInput("graph", "malformed pair on line " + std::to_string(line_no));
    }
    const auto ha = static_cast<HalfEdge>(a);
    const auto hb = static_cast<HalfEdge>(b);
    if ((pairing[ha] != kUnset && pairing[ha] != hb) || (pairing[hb] != kUnset && pairing[hb] != ha)) {
      throw InvalidInput("graph", "conflicting pair on line " + std::to_string(line_no));
    }
    pairing[ha] = hb;
    pairing[hb] = ha;
  }
  for (std::size_t h = 0; h < total; ++h) {
    if (pairing[h] == kUnset) throw InvalidInput("graph", "half-edge " + std::to_string(h) + " is unpaired");
  }
  return RegularMultigraph(static_cast<std::size_t>(n), static_cast<int>(d), std::move(pairing));
}

}  // namespace fiid
