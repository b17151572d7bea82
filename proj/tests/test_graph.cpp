#include <map>
#include <sstream>

#include "doctest.h"
#include "fiid/error.hpp"
#include "fiid/graph.hpp"
#include "support.hpp"

using namespace fiid;

namespace {

std::uint64_t enumerate_count(std::size_t n, int d) {
  PairingEnumerator en(n, d);
  std::uint64_t count = 0;
  while (en.next()) ++count;
  return count;
}

}  // namespace

TEST_CASE("pairing enumeration counts") {
  CHECK(enumerate_count(1, 2) == 1);
  CHECK(enumerate_count(2, 1) == 1);
  CHECK(enumerate_count(2, 2) == 3);
  CHECK(enumerate_count(2, 3) == 15);
  CHECK(enumerate_count(4, 3) == 10395);
  // 11!! by the recurrence m!! = m (m-2)!!
  std::uint64_t df = 1;
  for (long m = 1; m <= 11; m += 2) df *= m;
  CHECK(double_factorial_odd(11) == df);
  CHECK(double_factorial_odd(-1) == 1);
}

TEST_CASE("enumerated pairings are distinct involutions") {
  PairingEnumerator en(4, 2);
  std::map<std::vector<HalfEdge>, int> seen;
  while (en.next()) {
    std::vector<HalfEdge> p(en.pairing().begin(), en.pairing().end());
    for (HalfEdge h = 0; h < p.size(); ++h) {
      CHECK(p[h] != h);
      CHECK(p[p[h]] == h);
    }
    CHECK(seen[p]++ == 0);
  }
  CHECK(seen.size() == 105);
}

TEST_CASE("oracle guards") {
  CHECK_THROWS_AS(PairingEnumerator(9, 2), OracleGuard);
  const RegularMultigraph g = sample_configuration_model(10, 3, 1);
  CHECK_THROWS_AS(count_cycles_up_to(g, 9), OracleGuard);
}

TEST_CASE("odd nd is rejected") {
  CHECK_THROWS_AS(sample_configuration_model(3, 3, 1), InvalidInput);
  CHECK_THROWS_AS(PairingEnumerator(3, 3), InvalidInput);
}

TEST_CASE("single vertex with a loop and the single edge") {
  const RegularMultigraph loop = sample_configuration_model(1, 2, 5);
  CHECK(loop.partner(0) == 1);
  CHECK(loop.neighbor(0, 0) == 0);
  const RegularMultigraph edge = sample_configuration_model(2, 1, 5);
  CHECK(edge.neighbor(0, 0) == 1);
  CHECK(edge.neighbor(1, 0) == 0);
}

TEST_CASE("configuration model is uniform over the 15 pairings of n=2, d=3") {
  std::map<std::vector<HalfEdge>, std::size_t> index;
  PairingEnumerator en(2, 3);
  while (en.next()) index.emplace(std::vector<HalfEdge>(en.pairing().begin(), en.pairing().end()), index.size());
  REQUIRE(index.size() == 15);
  std::vector<double> counts(15, 0.0);
  const std::size_t seeds = 100000;
  for (std::size_t s = 0; s < seeds; ++s) {
    const RegularMultigraph g = sample_configuration_model(2, 3, derive_seed(99, "uniformity", s));
    auto it = index.find(std::vector<HalfEdge>(g.pairing().begin(), g.pairing().end()));
    REQUIRE(it != index.end());
    counts[it->second] += 1;
  }
  double chi2 = 0;
  const double expected = static_cast<double>(seeds) / 15.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 14 degrees of freedom, 0.999 quantile
  CHECK(chi2 < 36.12);
}

TEST_CASE("sampling is deterministic in the seed") {
  CHECK(sample_configuration_model(500, 4, 11) == sample_configuration_model(500, 4, 11));
  CHECK_FALSE(sample_configuration_model(500, 4, 11) == sample_configuration_model(500, 4, 12));
}

TEST_CASE("neighbourhood balls") {
  const RegularMultigraph g = sample_configuration_model(1000, 3, 3);
  const RootedBall b0 = neighborhood(g, 17, 0);
  CHECK(b0.is_tree);
  CHECK(b0.vertices.size() == 1);

  const RegularMultigraph loop = sample_configuration_model(1, 2, 0);
  CHECK_FALSE(neighborhood(loop, 0, 1).is_tree);

  const auto flags = tree_ball_flags(g, 2);
  for (Vertex v = 0; v < g.n(); ++v) CHECK(static_cast<bool>(flags[v]) == neighborhood(g, v, 2).is_tree);
}

TEST_CASE("large random cubic graphs are locally tree-like") {
  const RegularMultigraph g = sample_configuration_model(100000, 3, 8);
  const auto flags = tree_ball_flags(g, 2);
  std::size_t bad = 0;
  for (auto f : flags) bad += !f;
  CHECK(static_cast<double>(bad) / g.n() < 0.01);
}

TEST_CASE("cycle counts on small graphs") {
  const RegularMultigraph loop(1, 2, {1, 0});
  auto c = count_cycles_up_to(loop, 1);
  CHECK(c[1] == 1);

  // triangle: 0-1 via (1,2), 1-2 via (3,4), 2-0 via (5,0)
  const RegularMultigraph tri(3, 2, {5, 2, 1, 4, 3, 0});
  c = count_cycles_up_to(tri, 3);
  CHECK(c[1] == 0);
  CHECK(c[2] == 0);
  CHECK(c[3] == 1);

  // two vertices joined by a triple edge: C(3,2) = 3 two-cycles
  const RegularMultigraph theta(2, 3, {3, 4, 5, 0, 1, 2});
  c = count_cycles_up_to(theta, 2);
  CHECK(c[1] == 0);
  CHECK(c[2] == 3);
}

TEST_CASE("invalid pairings are rejected") {
  CHECK_THROWS_AS(RegularMultigraph(2, 1, {0, 1}), InvalidInput);
  CHECK_THROWS_AS(RegularMultigraph(2, 2, {1, 0, 3}), InvalidInput);
  CHECK_THROWS_AS(RegularMultigraph(2, 2, {1, 2, 3, 0}), InvalidInput);
}

TEST_CASE("graph text round trip") {
  const RegularMultigraph g = sample_configuration_model(64, 5, 21);
  std::stringstream s;
  write_graph(s, g);
  CHECK(read_graph(s) == g);
  std::stringstream bad("3 3\n0 1\n");
  CHECK_THROWS_AS(read_graph(bad), InvalidInput);
}

TEST_CASE("relabelled graphs keep the multiset of cycle counts") {
  const RegularMultigraph g = sample_configuration_model(40, 3, 2);
  Rng rng(4);
  const RegularMultigraph h = test::relabel(g, test::random_permutation(40, rng), 1);
  CHECK(count_cycles_up_to(g, 6) == count_cycles_up_to(h, 6));
}
