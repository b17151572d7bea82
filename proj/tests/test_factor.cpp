#include <cmath>

#include "doctest.h"
#include "fiid/error.hpp"
#include "fiid/factor.hpp"
#include "fiid/profile.hpp"
#include "support.hpp"

using namespace fiid;

namespace {

double density(const ColoringField& y) {
  std::size_t c = 0;
  for (auto x : y.colours) c += x;
  return static_cast<double>(c) / static_cast<double>(y.size());
}

// A radius-1 ball of T_3 with the given root and leaf values.
LabelledTree star(double root, std::vector<double> leaves) {
  LabelledTree t;
  t.parent = {-1};
  t.children = {{}};
  t.depth = {0};
  t.labels = {test::bits_for(root)};
  for (double l : leaves) {
    t.children[0].push_back(static_cast<std::uint32_t>(t.parent.size()));
    t.parent.push_back(0);
    t.children.push_back({});
    t.depth.push_back(1);
    t.labels.push_back(test::bits_for(l));
  }
  return t;
}

std::vector<BlockFactor> sample_factors(int d) {
  return {bernoulli_factor(0.3), local_min_is(), nibble_is(3, 0.2), parse_factor("nibble", d),
          parse_factor("interpolate:base=local_min,p=0.9,c=0.5,unit=base", d),
          parse_factor("interpolate:base=nibble,base.rounds=2,base.rate=0.25,p=0.5,x=0.5", d)};
}

}  // namespace

TEST_CASE("bernoulli factor is the label threshold") {
  const RegularMultigraph g = sample_configuration_model(5000, 3, 1);
  const LabelField labels = LabelField::generate(g.n(), 2);
  for (double p : {0.0, 0.3, 1.0}) {
    for (auto mode : {ProjectionMode::strict, ProjectionMode::local}) {
      const ColoringField y = project(bernoulli_factor(p), g, labels, mode);
      for (Vertex v = 0; v < g.n(); ++v) CHECK(y.colours[v] == (labels.value(v) <= p));
    }
  }
  const RegularMultigraph big = sample_configuration_model(100000, 3, 3);
  const ColoringField y = project(bernoulli_factor(0.3), big, LabelField::generate(big.n(), 4));
  CHECK(std::abs(density(y) - 0.3) < 0.005);
}

TEST_CASE("local minimum rule on explicit balls") {
  const BlockFactor f = local_min_is();
  CHECK(evaluate_on_tree_ball(f, star(0.1, {0.5, 0.9, 0.7})) == 1);
  CHECK(evaluate_on_tree_ball(f, star(0.95, {0.5, 0.9, 0.7})) == 0);
  CHECK(evaluate_on_tree_ball(f, star(0.6, {0.5, 0.9, 0.7})) == 0);
}

TEST_CASE("non-tree balls project to 0") {
  const RegularMultigraph loop(1, 2, {1, 0});
  const LabelField labels(std::vector<std::uint64_t>{0}, 0);
  CHECK(project(local_min_is(), loop, labels).colours[0] == 0);
  CHECK(project(local_min_is(), loop, labels, ProjectionMode::local).colours[0] == 0);
  CHECK_THROWS_AS(labelled_ball(loop, 0, 1, labels), InvalidInput);
}

TEST_CASE("local minimum density on random cubic graphs") {
  const RegularMultigraph g = sample_configuration_model(100000, 3, 5);
  const ColoringField y = project(local_min_is(), g, LabelField::generate(g.n(), 6));
  CHECK(std::abs(density(y) - 0.25) < 0.005);
  CHECK(*local_min_is().tree_density(3) == doctest::Approx(0.25));
}

TEST_CASE("independent-set factors never pick adjacent tree-ball vertices") {
  for (int d : {3, 5}) {
    const RegularMultigraph g = sample_configuration_model(20000, d, 9 + d);
    for (const BlockFactor& f : sample_factors(d)) {
      if (!f.rule().produces_independent_sets()) continue;
      const ColoringField y = project(f, g, LabelField::generate(g.n(), 10));
      const auto wide = tree_ball_flags(g, f.radius() + 1);
      std::size_t bad = 0;
      for (Vertex v = 0; v < g.n(); ++v) {
        if (!y.colours[v] || !wide[v]) continue;
        for (Vertex w : g.neighbors(v)) bad += y.colours[w];
      }
      CHECK_MESSAGE(bad == 0, f.spec());
    }
  }
}

TEST_CASE("one nibble round has density rate (1-rate)^d") {
  const int d = 3;
  const double rate = 0.2;
  const RegularMultigraph g = sample_configuration_model(100000, d, 12);
  const ColoringField y = project(nibble_is(1, rate), g, LabelField::generate(g.n(), 13));
  CHECK(std::abs(density(y) - rate * std::pow(1 - rate, d)) < 0.005);

  const ColoringField tiny = project(nibble_is(3, 1e-4), g, LabelField::generate(g.n(), 14));
  CHECK(density(tiny) < 1e-3);
}

TEST_CASE("interpolation endpoints") {
  const int d = 10;
  const RegularMultigraph g = sample_configuration_model(100000, d, 15);
  const LabelField labels = LabelField::generate(g.n(), 16);
  const BlockFactor base = local_min_is();

  // p = 1: the base rule read on base-coordinate labels
  const ColoringField one = project(interpolate_factor(base, 1.0, 1.0, d), g, labels);
  const ColoringField ref = project(base, g, labels.coordinate(kBaseCoordinate));
  CHECK(one.colours == ref.colours);

  // p = 0: Bernoulli of density x log d / d
  const double x = 2.0;
  const BlockFactor f0 = interpolate_factor(base, x, 0.0, d);
  const Projector proj(g, f0.radius());
  const ColoringField zero = proj.project(f0, labels);
  CHECK(std::abs(density(zero) - x * std::log(10.0) / 10.0) < 0.005);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!proj.tree_flags()[v]) continue;
    CHECK(zero.colours[v] == (unit_from_bits(sub_bits(labels.bits(v), kBernoulliCoordinate)) <= x * std::log(10.0) / 10.0));
  }
}

TEST_CASE("interpolation input errors") {
  CHECK_THROWS_AS(interpolate_factor(local_min_is(), 5.0, 0.5, 10), InvalidInput);  // 5 log 10 / 10 > 1
  CHECK_THROWS_AS(interpolate_factor(bernoulli_factor(0.2), 1.0, 0.5, 10), InvalidInput);
  CHECK_THROWS_AS(parse_factor("interpolate:base=interpolate,p=0.5,x=1", 10), InvalidInput);
  const BlockFactor f = interpolate_factor(local_min_is(), 1.0, 0.5, 10);
  const RegularMultigraph g3 = sample_configuration_model(100, 3, 1);
  try {
    project(f, g3, LabelField::generate(100, 1));
    FAIL("degree mismatch accepted");
  } catch (const InvalidInput& e) {
    CHECK(e.field() == "d");
  }
}

TEST_CASE("factor spec parsing") {
  for (const BlockFactor& f : sample_factors(5)) {
    CHECK(parse_factor(f.spec(), 5).spec() == f.spec());
  }
  CHECK(parse_factor("bernoulli:p=0.25", 3).radius() == 0);
  CHECK(parse_factor("local_min_is", 3).radius() == 1);
  CHECK(parse_factor("nibble:rounds=5,rate=0.1", 3).radius() == 5);
  auto field_of = [](const char* spec) {
    try {
      parse_factor(spec, 3);
    } catch (const InvalidInput& e) {
      return e.field();
    }
    return std::string("none");
  };
  CHECK(field_of("nonsense") == "factor");
  CHECK(field_of("bernoulli:p=1.5") == "p");
  CHECK(field_of("bernoulli:q=0.5") != "none");
  CHECK(field_of("nibble:rounds=0") == "rounds");
}

TEST_CASE("tree route and local route agree on tree balls") {
  for (int d : {3, 4}) {
    const RegularMultigraph g = sample_configuration_model(3000, d, 20 + d);
    const LabelField labels = LabelField::generate(g.n(), 21);
    for (const BlockFactor& f : sample_factors(d)) {
      const Projector strict(g, f.radius(), ProjectionMode::strict);
      const ColoringField a = strict.project(f, labels);
      const ColoringField b = Projector(g, f.radius(), ProjectionMode::local).project(f, labels);
      std::size_t mismatches = 0, checked = 0;
      for (Vertex v = 0; v < g.n(); ++v) {
        if (!strict.tree_flags()[v]) {
          CHECK(a.colours[v] == 0);
          continue;
        }
        mismatches += a.colours[v] != b.colours[v];
        if (v % 7 == 0) {
          ++checked;
          mismatches += evaluate_on_tree_ball(f, labelled_ball(g, v, f.radius(), labels)) != a.colours[v];
        }
      }
      CHECK(checked > 0);
      CHECK_MESSAGE(mismatches == 0, f.spec());
    }
  }
}

TEST_CASE("projection commutes with graph automorphisms and port rotation") {
  const int d = 3;
  const RegularMultigraph g = sample_configuration_model(2000, d, 30);
  const LabelField labels = LabelField::generate(g.n(), 31);
  Rng rng(32);
  const auto perm = test::random_permutation(g.n(), rng);
  const RegularMultigraph h = test::relabel(g, perm, 2);
  std::vector<std::uint64_t> moved(g.n());
  for (Vertex v = 0; v < g.n(); ++v) moved[perm[v]] = labels.bits(v);
  const LabelField hl(moved, 0);
  for (const BlockFactor& f : sample_factors(d)) {
    for (auto mode : {ProjectionMode::strict, ProjectionMode::local}) {
      const ColoringField a = project(f, g, labels, mode);
      const ColoringField b = project(f, h, hl, mode);
      std::size_t bad = 0;
      for (Vertex v = 0; v < g.n(); ++v) bad += a.colours[v] != b.colours[perm[v]];
      CHECK_MESSAGE(bad == 0, f.spec());
    }
  }
}

TEST_CASE("colours depend only on labels inside the r-ball") {
  const int d = 3;
  const RegularMultigraph g = sample_configuration_model(3000, d, 40);
  const LabelField labels = LabelField::generate(g.n(), 41);
  Rng rng(42);
  for (const BlockFactor& f : sample_factors(d)) {
    const Projector proj(g, f.radius());
    const ColoringField base = proj.project(f, labels);
    for (int t = 0; t < 20; ++t) {
      const Vertex v = static_cast<Vertex>(rng.below(g.n()));
      const RootedBall ball = neighborhood(g, v, f.radius());
      std::vector<std::uint8_t> inside(g.n(), 0);
      for (Vertex w : ball.vertices) inside[w] = 1;
      std::vector<std::uint64_t> bits(labels.raw().begin(), labels.raw().end());
      for (Vertex w = 0; w < g.n(); ++w) {
        if (!inside[w]) bits[w] = rng.bits();
      }
      const ColoringField other = proj.project(f, LabelField(bits, 0));
      CHECK(other.colours[v] == base.colours[v]);
    }
  }
}

TEST_CASE("label fields are reproducible and coordinates differ") {
  const LabelField a = LabelField::generate(100, 7), b = LabelField::generate(100, 7);
  CHECK(std::equal(a.raw().begin(), a.raw().end(), b.raw().begin()));
  const LabelField c = a.coordinate(kChoiceCoordinate);
  std::size_t same = 0;
  for (Vertex v = 0; v < 100; ++v) same += c.bits(v) == a.bits(v);
  CHECK(same == 0);
}
