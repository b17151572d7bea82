#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <unordered_map>

#include "fiid/bounds.hpp"
#include "fiid/error.hpp"
#include "fiid/graph.hpp"

namespace fiid {

ProfileMatrix IntegerProfile::matrix(std::uint64_t n, int d) const {
  ProfileMatrix m;
  m.k = k;
  const double nd = static_cast<double>(n) * d;
  for (auto c : pair_counts) m.P.push_back(c / nd);
  for (auto c : vertex_counts) m.pi.push_back(static_cast<double>(c) / n);
  return m;
}

bool valid_integer_profile(const IntegerProfile& p, std::uint64_t n, int d) {
  if (p.k < 1 || p.pair_counts.size() != static_cast<std::size_t>(p.k) * p.k ||
      p.vertex_counts.size() != static_cast<std::size_t>(p.k)) {
    return false;
  }
  std::uint64_t vertices = 0;
  for (int i = 0; i < p.k; ++i) {
    std::uint64_t row = 0;
    for (int j = 0; j < p.k; ++j) {
      if (p.pair(i, j) != p.pair(j, i)) return false;
      row += p.pair(i, j);
    }
    if (p.pair(i, i) % 2 != 0) return false;
    if (row != static_cast<std::uint64_t>(d) * p.vertex_counts[i]) return false;
    vertices += p.vertex_counts[i];
  }
  return vertices == n;
}

std::vector<IntegerProfile> enumerate_integer_profiles(std::uint64_t n, int d, int k) {
  if (k < 1) throw InvalidInput("k", "must be positive");
  std::vector<IntegerProfile> out;
  IntegerProfile cur;
  cur.k = k;
  cur.vertex_counts.assign(k, 0);
  cur.pair_counts.assign(static_cast<std::size_t>(k) * k, 0);
  std::vector<std::uint64_t> rem(k);

  // Fill the upper triangle row by row; each row must be exhausted when it ends.
  std::function<void(int, int)> fill = [&](int i, int j) {
    if (i == k) {
      out.push_back(cur);
      return;
    }
    if (j == k) {
      if (rem[i] == 0) fill(i + 1, i + 1);
      return;
    }
    if (i == j) {
      for (std::uint64_t c = 0; c <= rem[i]; c += 2) {
        cur.pair_counts[static_cast<std::size_t>(i) * k + i] = c;
        rem[i] -= c;
        fill(i, j + 1);
        rem[i] += c;
      }
      cur.pair_counts[static_cast<std::size_t>(i) * k + i] = 0;
      return;
    }
    const std::uint64_t hi = std::min(rem[i], rem[j]);
    for (std::uint64_t c = 0; c <= hi; ++c) {
      cur.pair_counts[static_cast<std::size_t>(i) * k + j] = c;
      cur.pair_counts[static_cast<std::size_t>(j) * k + i] = c;
      rem[i] -= c;
      rem[j] -= c;
      fill(i, j + 1);
      rem[i] += c;
      rem[j] += c;
    }
    cur.pair_counts[static_cast<std::size_t>(i) * k + j] = 0;
    cur.pair_counts[static_cast<std::size_t>(j) * k + i] = 0;
  };

  std::function<void(int, std::uint64_t)> split = [&](int i, std::uint64_t left) {
    if (i == k - 1) {
      cur.vertex_counts[i] = left;
      for (int t = 0; t < k; ++t) rem[t] = static_cast<std::uint64_t>(d) * cur.vertex_counts[t];
      fill(0, 0);
      return;
    }
    for (std::uint64_t c = 0; c <= left; ++c) {
      cur.vertex_counts[i] = c;
      split(i + 1, left - c);
    }
  };
  split(0, n);
  return out;
}

namespace {

BigInt factorial(std::uint64_t m) {
  BigInt r = 1;
  for (std::uint64_t i = 2; i <= m; ++i) r *= i;
  return r;
}

// (m-1)!! for even m >= 0.
BigInt pairings(std::uint64_t m) {
  BigInt r = 1;
  for (std::uint64_t i = 3; i < m; i += 2) r *= i;
  return r;
}

double log_big(const BigInt& x) {
  if (x <= 0) throw InvalidInput("x", "log of a nonpositive integer");
  const std::size_t bits = boost::multiprecision::msb(x);
  const std::size_t shift = bits > 60 ? bits - 60 : 0;
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + shift * std::numbers::ln2;
}

// log((m-1)!!) for even m.
double log_pairings(double m) {
  if (m == 0) return 0.0;
  return std::lgamma(m + 1) - m / 2 * std::numbers::ln2 - std::lgamma(m / 2 + 1);
}

void require_valid(const IntegerProfile& p, std::uint64_t n, int d) {
  if (!valid_integer_profile(p, n, d)) {
    throw InvalidInput("profile", "not a valid integer edge profile for n = " + std::to_string(n) +
                                      ", d = " + std::to_string(d));
  }
}

}  // namespace

Rational expected_partition_count_exact(const IntegerProfile& p, std::uint64_t n, int d) {
  require_valid(p, n, d);
  const int k = p.k;
  BigInt num = factorial(n);
  BigInt den = pairings(n * static_cast<std::uint64_t>(d));
  for (int i = 0; i < k; ++i) {
    den *= factorial(p.vertex_counts[i]);
    num *= factorial(static_cast<std::uint64_t>(d) * p.vertex_counts[i]);
    for (int j = 0; j < k; ++j) den *= factorial(p.pair(i, j));
    for (int j = i + 1; j < k; ++j) num *= factorial(p.pair(i, j));
    num *= pairings(p.pair(i, i));
  }
  return Rational(num, den);
}

double log_expected_partition_count(const IntegerProfile& p, std::uint64_t n, int d) {
  require_valid(p, n, d);
  if (n * static_cast<std::uint64_t>(d) <= 4096) {
    const Rational r = expected_partition_count_exact(p, n, d);
    return log_big(boost::multiprecision::numerator(r)) - log_big(boost::multiprecision::denominator(r));
  }
  const int k = p.k;
  auto lf = [](double m) { return std::lgamma(m + 1); };
  double s = lf(static_cast<double>(n)) - log_pairings(static_cast<double>(n) * d);
  for (int i = 0; i < k; ++i) {
    s -= lf(static_cast<double>(p.vertex_counts[i]));
    s += lf(static_cast<double>(d) * p.vertex_counts[i]);
    for (int j = 0; j < k; ++j) s -= lf(static_cast<double>(p.pair(i, j)));
    for (int j = i + 1; j < k; ++j) s += lf(static_cast<double>(p.pair(i, j)));
    s += log_pairings(static_cast<double>(p.pair(i, i)));
  }
  return s;
}

double partition_count_log_bound(const ProfileMatrix& m, std::uint64_t n, int d) {
  return static_cast<double>(n) * entropy_functional(m, d);
}

std::map<IntegerProfile, Rational> brute_force_partition_table(std::uint64_t n, int d, int k) {
  if (k < 1 || k > 3) throw OracleGuard("brute-force partition table supports 1 to 3 colours");
  std::uint64_t colourings = 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    colourings *= static_cast<std::uint64_t>(k);
    if (colourings > (1u << 20)) throw OracleGuard("brute-force partition table refused: k^n exceeds 2^20");
  }
  PairingEnumerator en(n, d);  // enforces nd <= 16
  const std::size_t half = n * static_cast<std::size_t>(d);

  // Key: vertex counts then upper-triangle pair counts, 5 bits each (all values <= 16).
  std::vector<std::pair<int, int>> upper;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) upper.emplace_back(i, j);
  }
  std::unordered_map<std::uint64_t, std::uint64_t> hist;
  std::vector<std::uint8_t> colour(n);
  std::vector<std::pair<Vertex, Vertex>> edges(half / 2);
  std::uint64_t total_pairings = 0;
  while (en.next()) {
    ++total_pairings;
    const auto pairing = en.pairing();
    std::size_t e = 0;
    for (std::size_t h = 0; h < half; ++h) {
      if (pairing[h] > h) edges[e++] = {static_cast<Vertex>(h / d), static_cast<Vertex>(pairing[h] / d)};
    }
    for (std::uint64_t code = 0; code < colourings; ++code) {
      std::uint64_t x = code;
      std::uint64_t vc[3] = {0, 0, 0};
      for (std::uint64_t v = 0; v < n; ++v) {
        colour[v] = static_cast<std::uint8_t>(x % k);
        x /= k;
        ++vc[colour[v]];
      }
      std::uint64_t pc[3][3] = {};
      for (auto [a, b] : edges) {
        ++pc[colour[a]][colour[b]];
        ++pc[colour[b]][colour[a]];
      }
      std::uint64_t key = 0;
      for (int i = 0; i < k; ++i) key = key << 5 | vc[i];
      for (auto [i, j] : upper) key = key << 5 | pc[i][j];
      ++hist[key];
    }
  }

  std::map<IntegerProfile, Rational> table;
  for (auto [packed, count] : hist) {
    std::uint64_t key = packed;
    IntegerProfile p;
    p.k = k;
    p.vertex_counts.assign(k, 0);
    p.pair_counts.assign(static_cast<std::size_t>(k) * k, 0);
    for (auto it = upper.rbegin(); it != upper.rend(); ++it) {
      const auto v = key & 31;
      key >>= 5;
      p.pair_counts[static_cast<std::size_t>(it->first) * k + it->second] = v;
      p.pair_counts[static_cast<std::size_t>(it->second) * k + it->first] = v;
    }
    for (int i = k - 1; i >= 0; --i) {
      p.vertex_counts[i] = key & 31;
      key >>= 5;
    }
    table.emplace(std::move(p), Rational(BigInt(count), BigInt(total_pairings)));
  }
  return table;
}

}  // namespace fiid
