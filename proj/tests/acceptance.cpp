// Acceptance run: one PASS/FAIL line per criterion 1-12. Exit status is the
// number of failed criteria (capped at 100).

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fiid/bounds.hpp"
#include "fiid/coupling.hpp"
#include "fiid/error.hpp"
#include "fiid/factor.hpp"
#include "fiid/graph.hpp"
#include "fiid/orient.hpp"
#include "fiid/parallel.hpp"
#include "fiid/profile.hpp"

using namespace fiid;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& x) {
    out_ << x;
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// 1. Lemma 2.1 formula against exhaustive enumeration, exact rationals.
Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  struct Case {
    std::uint64_t n;
    int d;
  };
  const std::vector<Case> cases{{2, 2}, {3, 2}, {4, 2}, {5, 2}, {2, 3}, {4, 3}, {2, 4}, {3, 4}, {4, 4}};
  std::size_t profiles = 0, mismatches = 0;
  for (const Case& c : cases) {
    for (int k : {2, 3}) {
      if (k == 3 && c.n * c.d > 12) continue;
      const auto table = brute_force_partition_table(c.n, c.d, k);
      for (const auto& p : enumerate_integer_profiles(c.n, c.d, k)) {
        ++profiles;
        const auto it = table.find(p);
        const Rational brute = it == table.end() ? Rational(0) : it->second;
        mismatches += expected_partition_count_exact(p, c.n, c.d) != brute;
      }
      for (const auto& [p, v] : table) mismatches += !valid_integer_profile(p, c.n, c.d);
    }
  }
  const double t = seconds_since(start);
  Detail d;
  d << profiles << " profiles, " << mismatches << " mismatches, " << t << " s";
  return {mismatches == 0 && profiles > 0 && t < 120, d.str()};
}

// 2. Entropy functional of sampled profiles is nonnegative.
Outcome criterion2() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 1e300;
  std::string worst_at;
  for (int d : {3, 5, 10}) {
    const std::vector<BlockFactor> factors{bernoulli_factor(0.1), bernoulli_factor(0.3), local_min_is(),
                                           parse_factor("nibble", d),
                                           parse_factor("interpolate:base=local_min,p=0.9,c=0.5,unit=base", d)};
    for (const BlockFactor& f : factors) {
      const EntropyCheckReport r = entropy_check(f, d, 100000, 50, derive_seed(2, f.spec(), d));
      if (r.functional.min < worst) {
        worst = r.functional.min;
        worst_at = f.spec() + " d=" + std::to_string(d);
      }
    }
  }
  const double t = seconds_since(start);
  Detail d;
  d << "min functional " << worst << " at " << worst_at << ", " << t << " s";
  return {worst >= -0.01 && t < 600, d.str()};
}

// 3. Product profiles give exactly H(pi).
Outcome criterion3() {
  Rng rng(3);
  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    const int k = 1 + static_cast<int>(rng.below(6));
    const int d = 3 + static_cast<int>(rng.below(18));
    std::vector<double> pi(k);
    double total = 0;
    for (auto& x : pi) total += (x = rng.uniform());
    for (auto& x : pi) x /= total;
    ProfileMatrix m{k, std::vector<double>(static_cast<std::size_t>(k) * k), pi};
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) m.P[static_cast<std::size_t>(i) * k + j] = pi[i] * pi[j];
    }
    worst = std::max(worst, std::abs(entropy_functional(m, d) - entropy(pi)));
  }
  Detail d;
  d << "max |functional - H(pi)| = " << worst;
  return {worst <= 1e-12, d.str()};
}

// 4. Lemma 3.1: h(xy) = x h(y) + y h(x) and x - (x^2+x^3)/2 <= h(1-x) <= x - x^2/2.
Outcome criterion4() {
  Rng rng(4);
  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    const double x = rng.uniform() * 3, y = rng.uniform() * 3;
    const double lhs = h(x * y), rhs = x * h(y) + y * h(x);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  std::size_t violations = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = i / 10000.0;
    const double v = h(1 - x);
    violations += !(x - (x * x + x * x * x) / 2 <= v && v <= x - x * x / 2);
  }
  const bool endpoints = h(1.0) == 0.0 && h(0.0) == 0.0 && 1.0 - (1.0 + 1.0) / 2 == h(1.0 - 1.0);
  Detail d;
  d << "h1 max error " << worst << ", h2 violations " << violations << " on 10001 points, endpoints "
    << (endpoints ? "exact" : "off");
  return {worst <= 1e-12 && violations == 0 && endpoints, d.str()};
}

// 5. Lemma 3.2 and Lemma 4.1 dominate the entropy functional pointwise.
Outcome criterion5() {
  Rng rng(5);
  std::size_t trials32 = 0, bad32 = 0;
  while (trials32 < 10000) {
    const double alpha = rng.uniform();
    const double rho = rng.uniform() / alpha;
    if (!valid_binary_profile(alpha, rho)) continue;
    const int d = 3 + static_cast<int>(rng.below(1000));
    ++trials32;
    bad32 += h_upper_bound(alpha, rho, d) < entropy_functional(binary_profile(alpha, rho), d) - 1e-12;
  }
  std::size_t trials41 = 0, bad41 = 0;
  // diagnostic split: the proof's monotonicity step needs K <= J^2/e
  std::size_t inside = 0, bad_inside = 0;
  double worst_gap = 1e300;
  while (trials41 < 1000) {
    const int k = 2 + static_cast<int>(rng.below(7));
    // symmetric weights with colour 0 dominant
    std::vector<double> w(static_cast<std::size_t>(k) * k, 0.0);
    double total = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        double x = rng.uniform();
        if (i == 0 && j == 0) x *= 20 * k;
        else if (i == 0) x *= 2;
        else x *= rng.uniform() * 0.5;
        w[static_cast<std::size_t>(i) * k + j] = w[static_cast<std::size_t>(j) * k + i] = x;
        total += i == j ? x : 2 * x;
      }
    }
    ProfileMatrix m{k, w, std::vector<double>(k, 0.0)};
    for (auto& x : m.P) x /= total;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) m.pi[i] += m.at(i, j);
    }
    MaxEntropyInput in{m, {}, 0, 0};
    for (int i = 1; i < k; ++i) {
      for (int j = i; j < k; ++j) {
        if (rng.bernoulli(0.5)) {
          in.lambda.push_back({i, j});
          if (i != j) in.lambda.push_back({j, i});
        }
      }
    }
    double pmax = 0, jmax = 0;
    for (auto [i, j] : in.lambda) pmax = std::max(pmax, m.at(i, j));
    for (int i = 1; i < k; ++i) jmax = std::max(jmax, m.pi[i]);
    const double kcap = 1.0 / (std::numbers::e * (k - 1));
    if (pmax > kcap || jmax == 0) continue;
    in.K = pmax + rng.uniform() * (kcap - pmax);
    if (in.K == 0) continue;
    in.J = jmax * (1 + rng.uniform());
    const int d = 3 + static_cast<int>(rng.below(200));
    ++trials41;
    const double gap = max_entropy_bound(in, d) - entropy_functional(m, d);
    worst_gap = std::min(worst_gap, gap);
    bad41 += gap < -1e-12;
    const double kin = std::min(kcap, in.J * in.J / std::numbers::e);
    if (pmax <= kin && kin > 0) {
      MaxEntropyInput tight = in;
      tight.K = std::max(pmax, kin * 1e-3) + rng.uniform() * (kin - std::max(pmax, kin * 1e-3));
      ++inside;
      bad_inside += max_entropy_bound(tight, d) - entropy_functional(m, d) < -1e-12;
    }
  }
  Detail d;
  d << "Lemma 3.2: " << bad32 << "/" << trials32 << " violations; Lemma 4.1: " << bad41 << "/" << trials41
    << " violations (min slack " << worst_gap << "); with K <= J^2/e: " << bad_inside << "/" << inside;
  return {bad32 == 0 && bad41 == 0, d.str()};
}

// 6. Theorem 1.2 calculator: asymptotic ratio and the roots of q.
Outcome criterion6() {
  Detail d;
  double ratio = 0;
  d << "bound*d/log d at c=0:";
  for (int e = 1; e <= 9; ++e) {
    const double dd = std::pow(10.0, e);
    ratio = corr_density_bound(0.0, dd, 0.0) * dd / std::log(dd);
    if (e % 2 == 1 || e == 9) d << " 1e" << e << "->" << ratio;
  }
  const bool ratio_ok = std::abs(ratio - 2) <= 0.1;
  Rng rng(6);
  std::size_t with_roots = 0, residual_bad = 0, lower_bad = 0;
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    double c = rng.uniform() * 4;
    if (std::abs(c - 1) < 1e-3) c = 0.5;
    const double rho = rng.uniform() * 4;
    const double dd = std::pow(10.0, 0.5 + rng.uniform() * 8.5);
    const Quadratic q = q_polynomial(rho, c, dd);
    const auto roots = q_roots(rho, c, dd);
    if (roots.empty()) continue;
    ++with_roots;
    for (double r : roots) {
      const double scale = std::abs(q.a * r * r) + std::abs(q.b * r) + std::abs(q.c0);
      const double rel = std::abs(q(r)) / scale;
      worst = std::max(worst, rel);
      residual_bad += rel > 1e-9;
    }
    lower_bad += roots[1] < larger_root_lower_bound(rho, dd) * (1 - 1e-12);
  }
  d << "; deviation from 2 at 1e9 = " << std::abs(ratio - 2) / 2 * 100 << "% (limit 5%)"
    << "; q roots: " << with_roots << " cases, scaled residual max " << worst << ", " << residual_bad
    << " residual and " << lower_bad << " lower-bound violations";
  return {ratio_ok && residual_bad == 0 && lower_bad == 0 && with_roots > 0, d.str()};
}

// 7. Interpolation construction hits the predicted density factor and correlation.
Outcome criterion7() {
  const int d = 10;
  const double p = 0.9;
  const std::size_t n = 100000, trials = 50;
  bool pass = true;
  Detail out;
  for (double c : {0.25, 0.5, 0.75}) {
    const InterpolationParams ip = interpolation_params(c, p);
    const BlockFactor base = local_min_is();
    const double unit = *base.tree_density(d);
    const BlockFactor f = interpolate_factor(base, ip.x, p, d, unit);
    std::vector<double> beta(trials), corr(trials);
    parallel_for(trials, [&](std::size_t t) {
      const RegularMultigraph g = sample_configuration_model(n, d, derive_seed(7, "graph", t));
      const ColoringField y = project(f, g, LabelField::generate(n, derive_seed(7, "labels", t)));
      const PercStats s = percolation_stats(y, g);
      beta[t] = s.density / unit;
      corr[t] = s.correlation;
    });
    const double mb = summarize(beta).mean, mc = summarize(corr).mean;
    const bool ok = std::abs(mb - ip.density_factor) <= 0.1 && std::abs(mc - c) <= 0.05;
    pass = pass && ok;
    out << "c=" << c << ": beta " << mb << " vs " << ip.density_factor << ", rho " << mc << "; ";
  }
  return {pass, out.str()};
}

// 8. Stability calculus.
Outcome criterion8() {
  const int d = 5;
  const std::size_t n = 100000;
  const RegularMultigraph g = sample_configuration_model(n, d, derive_seed(8, "graph"));
  const std::vector<double> u{1, 2, 3};
  StabilityOptions opt;
  opt.trials = 50;
  bool pass = true;
  Detail out;
  const double q = 0.2;
  const std::vector<BlockFactor> factors{bernoulli_factor(q), parse_factor("nibble", d)};
  for (const BlockFactor& f : factors) {
    const Projector proj(g, f.radius());
    const StabilityEstimate e = stability_moments(f, proj, 0.5, u, derive_seed(8, f.spec()), opt);
    double zmax = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double se = std::hypot(e.direct[i].sem, e.ratio[i].sem);
      zmax = std::max(zmax, std::abs(e.direct[i].value - e.ratio[i].value) / se);
    }
    pass = pass && zmax <= 3 && !e.failed;
    out << f.name() << " max z " << zmax << "; ";

    const StabilityEstimate zero = stability_moments(f, proj, 0.0, u, derive_seed(8, "zero"), opt);
    bool exact = true;
    for (const auto& m : zero.direct) exact = exact && m.value == 1.0 && m.sem == 0.0;
    // At p = 1, Q equals the density at tree-ball vertices (the only ones Y^0 can select).
    const StabilityEstimate one = stability_moments(f, proj, 1.0, u, derive_seed(8, "one"), opt);
    double dens = 0, dens_se = 0;
    if (auto td = f.tree_density(d)) {
      dens = *td;
    } else {
      std::vector<double> per(20);
      std::size_t tree = 0;
      for (auto t : proj.tree_flags()) tree += t;
      for (std::size_t t = 0; t < per.size(); ++t) {
        const ColoringField y = proj.project(f, LabelField::generate(n, derive_seed(8, "reference", t)));
        std::size_t in = 0;
        for (auto c : y.colours) in += c;
        per[t] = static_cast<double>(in) / static_cast<double>(tree);
      }
      const Summary s = summarize(per);
      dens = s.mean;
      dens_se = s.sem;
    }
    double zone = 0;
    for (const auto& m : one.direct) {
      const double se = std::hypot(m.sem, m.u * std::pow(dens, m.u - 1) * dens_se);
      zone = std::max(zone, std::abs(m.value - std::pow(dens, m.u)) / se);
    }
    pass = pass && exact && zone <= 3;
    out << "p=0 " << (exact ? "exact" : "off") << ", p=1 max z " << zone << "; ";
  }
  const BlockFactor bern = bernoulli_factor(q);
  const Projector proj(g, 0);
  double zmax = 0;
  for (double p : {0.25, 0.5, 0.75}) {
    const std::vector<double> one{1};
    const StabilityEstimate e = stability_moments(bern, proj, p, one, derive_seed(8, "closed", static_cast<std::uint64_t>(p * 4)), opt);
    zmax = std::max(zmax, std::abs(e.direct[0].value - ((1 - p) + p * q)) / e.direct[0].sem);
  }
  pass = pass && zmax <= 3;
  out << "closed form max z " << zmax;
  return {pass, out.str()};
}

// 9. Lemma 4.8 on random exchangeable beta.
Outcome criterion9() {
  Rng rng(9);
  double worst = 0;
  for (int k = 2; k <= 6; ++k) {
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> by_size(k + 1);
      for (auto& b : by_size) b = rng.uniform() / (1 << k);
      std::vector<double> beta(std::size_t{1} << k, 0.0);
      for (std::size_t s = 1; s < beta.size(); ++s) beta[s] = by_size[std::popcount(s)];
      const IdentityCheck c = lemma_identity_check(beta, k);
      worst = std::max(worst, std::abs(c.lhs - c.rhs));
    }
  }
  Detail d;
  d << "max |lhs - rhs| = " << worst << " over 5000 vectors";
  return {worst <= 1e-10, d.str()};
}

// 10. Orientation without sources or sinks.
Outcome criterion10() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  Detail out;
  double min_rate = 1;
  std::size_t bad = 0;
  for (int d : {3, 4, 5}) {
    for (std::size_t n : {50, 100, 200}) {
      const std::size_t seeds = 200;
      std::vector<std::uint8_t> peeled(seeds, 0), certified(seeds, 0);
      parallel_for(seeds, [&](std::size_t s) {
        const RegularMultigraph g = sample_configuration_model(n, d, derive_seed(10, "graph", s * 1000 + n * 10 + d));
        try {
          const Orientation o = orient_no_source_sink(g, derive_seed(10, "orientation", s));
          peeled[s] = 1;
          certified[s] = certify(o).ok();
        } catch (const ConstructionFailure&) {
        }
      });
      std::size_t ok = 0;
      for (std::size_t s = 0; s < seeds; ++s) {
        ok += peeled[s];
        bad += peeled[s] && !certified[s];
      }
      const double rate = static_cast<double>(ok) / seeds;
      min_rate = std::min(min_rate, rate);
      pass = pass && rate >= 0.95;
    }
  }
  const double t = seconds_since(start);
  out << "min peel success " << min_rate << ", uncertified runs " << bad << ", " << t << " s";
  return {pass && bad == 0 && t < 300, out.str()};
}

// 11. Profile deviations shrink with n.
Outcome criterion11() {
  const std::vector<std::size_t> grid{1000, 4000, 16000, 64000};
  bool pass = true;
  Detail out;
  for (const BlockFactor& f : {bernoulli_factor(0.3), local_min_is()}) {
    const auto pts = concentration_experiment(f, 3, grid, 100, derive_seed(11, f.spec()));
    int inversions = 0;
    out << f.name() << ":";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out << " " << pts[i].max_deviation;
      if (i > 0 && pts[i].max_deviation >= pts[i - 1].max_deviation) ++inversions;
    }
    out << " (" << inversions << " inversions); ";
    pass = pass && inversions <= 1;
  }
  return {pass, out.str()};
}

// 12. Corollary 1.3 degree property on sampled induced forests.
Outcome criterion12() {
  std::size_t samples = 0, forests = 0, components = 0, bad = 0;
  double worst = 0;
  const int d = 3;
  const std::vector<BlockFactor> factors{bernoulli_factor(0.2), bernoulli_factor(0.3), bernoulli_factor(0.4),
                                         parse_factor("interpolate:base=local_min,p=0.9,c=0.5,unit=base", d)};
  for (const BlockFactor& f : factors) {
    for (std::size_t t = 0; t < 50; ++t) {
      const RegularMultigraph g = sample_configuration_model(2000, d, derive_seed(12, "graph", t));
      const ColoringField y = project(f, g, LabelField::generate(g.n(), derive_seed(12, f.spec(), t)));
      const ComponentDegreeReport r = component_degree_check(y.colours, g);
      ++samples;
      bad += !r.identity_holds;
      for (const Component& c : r.components) components += c.is_tree();
      if (r.all_trees) {
        ++forests;
        worst = std::max(worst, r.global_average_degree);
        bad += !(r.global_average_degree < 2.0) || !r.global_below_two;
      }
    }
  }
  Detail out;
  out << forests << " forests among " << samples << " samples, " << components
      << " tree components checked, max forest average degree " << worst << ", " << bad << " violations";
  return {bad == 0 && forests > 0, out.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10, criterion11, criterion12};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return std::min(failed, 100);
}
