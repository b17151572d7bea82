#include "fiid/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fiid/error.hpp"
#include "fiid/kernels.hpp"
#include "fiid/parallel.hpp"

namespace fiid {

ProfileMatrix EdgeProfile::matrix() const {
  ProfileMatrix m;
  m.k = k;
  m.P.resize(pair_counts.size());
  m.pi.resize(vertex_counts.size());
  for (std::size_t i = 0; i < pair_counts.size(); ++i) m.P[i] = static_cast<double>(pair_counts[i]) / nd;
  for (std::size_t i = 0; i < vertex_counts.size(); ++i) m.pi[i] = static_cast<double>(vertex_counts[i]) / n;
  return m;
}

bool EdgeProfile::consistent(int d) const {
  std::uint64_t total = 0, vertices = 0;
  for (int i = 0; i < k; ++i) {
    std::uint64_t row = 0;
    for (int j = 0; j < k; ++j) {
      if (pair_count(i, j) != pair_count(j, i)) return false;
      row += pair_count(i, j);
    }
    if (row != static_cast<std::uint64_t>(d) * vertex_counts[i]) return false;
    total += row;
    vertices += vertex_counts[i];
  }
  return total == nd && vertices == n;
}

EdgeProfile edge_profile(std::span<const Colour> colours, int max_colour, const RegularMultigraph& g) {
  if (colours.size() != g.n()) throw InvalidInput("coloring", "size must equal n");
  if (max_colour < 1 || max_colour > 255) throw InvalidInput("max_colour", "must lie in [1, 255]");
  const int k = max_colour + 1;
  EdgeProfile prof;
  prof.k = k;
  prof.n = g.n();
  prof.nd = g.half_edge_count();
  prof.pair_counts.assign(static_cast<std::size_t>(k) * k, 0);
  prof.vertex_counts.assign(k, 0);
  for (auto c : colours) {
    if (c > max_colour) throw InvalidInput("coloring", "colour exceeds max_colour");
    ++prof.vertex_counts[c];
  }
  const auto d = static_cast<std::uint64_t>(g.d());
  if (k == 2) {
    const std::uint64_t c11 = kernels::member_pair_count(colours, g.adjacency(), g.d());
    const std::uint64_t c10 = d * prof.vertex_counts[1] - c11;
    prof.pair_counts = {prof.nd - c11 - 2 * c10, c10, c10, c11};
    return prof;
  }
  const auto adj = g.adjacency();
  for (std::size_t h = 0; h < adj.size(); ++h) {
    const Colour a = colours[g.owner(static_cast<HalfEdge>(h))];
    const Colour b = colours[adj[h]];
    ++prof.pair_counts[static_cast<std::size_t>(a) * k + b];
  }
  return prof;
}

EdgeProfile edge_profile(const ColoringField& coloring, const RegularMultigraph& g) {
  return edge_profile(coloring.colours, coloring.max_colour, g);
}

std::string profile_csv(const EdgeProfile& profile, bool exact) {
  std::ostringstream out;
  out.precision(17);
  for (int i = 0; i < profile.k; ++i) {
    for (int j = 0; j < profile.k; ++j) {
      out << i << ',' << j << ',';
      if (exact) out << profile.pair_count(i, j) << '/' << profile.nd;
      else out << profile.P(i, j);
      out << '\n';
    }
  }
  for (int i = 0; i < profile.k; ++i) {
    out << i << ',';
    if (exact) out << profile.vertex_counts[i] << '/' << profile.n;
    else out << profile.pi(i);
    out << '\n';
  }
  return out.str();
}

namespace {

void check_binary(std::span<const Colour> colours, const RegularMultigraph& g) {
  if (colours.size() != g.n()) throw InvalidInput("coloring", "size must equal n");
  for (auto c : colours) {
    if (c > 1) throw InvalidInput("coloring", "binary colouring required");
  }
}

}  // namespace

ComponentDegreeReport component_degree_check(std::span<const Colour> colours, const RegularMultigraph& g) {
  check_binary(colours, g);
  ComponentDegreeReport rep;
  const std::size_t n = g.n();
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::vector<Vertex> stack;
  std::vector<Vertex> nb;
  for (Vertex s = 0; s < n; ++s) {
    if (!colours[s] || comp[s] != UINT32_MAX) continue;
    const auto id = static_cast<std::uint32_t>(rep.components.size());
    Component c;
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      ++c.size;
      nb.assign(g.neighbors(v).begin(), g.neighbors(v).end());
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      for (Vertex w : nb) {
        if (!colours[w]) continue;
        if (w == v) {
          c.has_loop = true;
          continue;
        }
        if (w > v) ++c.edges;
        if (comp[w] == UINT32_MAX) {
          comp[w] = id;
          stack.push_back(w);
        }
      }
    }
    rep.components.push_back(c);
  }
  for (const auto& c : rep.components) {
    rep.in_set += c.size;
    rep.edges += c.edges;
    if (!c.is_tree()) {
      rep.all_trees = false;
      continue;
    }
    // average degree 2e/m against 2(m-1)/m, compared as integers
    if (2 * c.edges * c.size != 2 * (c.size - 1) * c.size) rep.identity_holds = false;
  }
  rep.global_average_degree = rep.in_set ? 2.0 * static_cast<double>(rep.edges) / static_cast<double>(rep.in_set) : 0.0;
  rep.global_below_two = rep.in_set == 0 || rep.edges < rep.in_set;
  return rep;
}

PercStats percolation_stats(std::span<const Colour> colours, const RegularMultigraph& g) {
  check_binary(colours, g);
  PercStats s;
  s.in_set = static_cast<std::uint64_t>(std::count(colours.begin(), colours.end(), Colour{1}));
  s.in_set_pairs = kernels::member_pair_count(colours, g.adjacency(), g.d());
  const double n = static_cast<double>(g.n());
  const double nd = static_cast<double>(g.half_edge_count());
  s.density = s.in_set / n;
  if (s.in_set > 0) {
    const double p11 = s.in_set_pairs / nd;
    s.correlation = p11 / (s.density * s.density);
    s.avdeg = static_cast<double>(s.in_set_pairs) / static_cast<double>(s.in_set);
  }
  for (const auto& c : component_degree_check(colours, g).components) ++s.component_sizes[c.size];
  return s;
}

PercStats percolation_stats(const ColoringField& coloring, const RegularMultigraph& g) {
  return percolation_stats(coloring.colours, g);
}

double h(double x) {
  if (!(x >= 0.0)) throw InvalidInput("x", "h requires x >= 0");
  return x == 0.0 ? 0.0 : -x * std::log(x);
}

double entropy(std::span<const double> dist) {
  double sum = 0, H = 0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw InvalidInput("dist", "negative or NaN mass");
    sum += p;
    H += h(p);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidInput("dist", "masses must sum to 1");
  return H;
}

double entropy_functional(const ProfileMatrix& profile, int d) {
  return 0.5 * d * entropy(profile.P) - (d - 1) * entropy(profile.pi);
}

double entropy_functional(const EdgeProfile& profile, int d) { return entropy_functional(profile.matrix(), d); }

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sem = std::sqrt(ss / (values.size() - 1) / values.size());
  }
  return s;
}

EntropyCheckReport entropy_check(const BlockFactor& factor, int d, std::size_t n, std::size_t trials, Seed seed,
                                 ProjectionMode mode) {
  if (trials == 0) throw InvalidInput("trials", "must be positive");
  EntropyCheckReport rep;
  rep.factor = factor.spec();
  rep.d = d;
  rep.n = n;
  rep.trials.resize(trials);
  parallel_for(trials, [&](std::size_t t) {
    TrialRecord& rec = rep.trials[t];
    rec.index = t;
    rec.graph_seed = derive_seed(seed, "entropy-check/graph", t);
    rec.label_seed = derive_seed(seed, "entropy-check/labels", t);
    const RegularMultigraph g = sample_configuration_model(n, d, rec.graph_seed);
    const Projector proj(g, factor.radius(), mode);
    const ColoringField y = proj.project(factor, LabelField::generate(n, rec.label_seed));
    const EdgeProfile prof = edge_profile(y, g);
    rec.functional = entropy_functional(prof, d);
    rec.non_tree = proj.non_tree_count();
    if (y.max_colour == 1) {
      const PercStats s = percolation_stats(y, g);
      rec.density = s.density;
      rec.correlation = s.correlation;
    }
  });
  std::vector<double> values;
  for (const auto& r : rep.trials) values.push_back(r.functional);
  rep.functional = summarize(values);
  return rep;
}

std::vector<ConcentrationPoint> concentration_experiment(const BlockFactor& factor, int d,
                                                         std::span<const std::size_t> n_grid, std::size_t trials,
                                                         Seed seed, ProjectionMode mode) {
  if (trials < 2) throw InvalidInput("trials", "need at least 2 trials");
  std::vector<ConcentrationPoint> out;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    std::vector<ProfileMatrix> profiles(trials);
    parallel_for(trials, [&](std::size_t t) {
      const RegularMultigraph g = sample_configuration_model(n, d, derive_seed(seed, "concentration/graph", gi * trials + t));
      const LabelField labels = LabelField::generate(n, derive_seed(seed, "concentration/labels", gi * trials + t));
      const ColoringField y = Projector(g, factor.radius(), mode).project(factor, labels);
      profiles[t] = edge_profile(y, g).matrix();
    });
    const int k = profiles[0].k;
    std::vector<double> meanP(static_cast<std::size_t>(k) * k, 0.0), meanPi(k, 0.0);
    for (const auto& p : profiles) {
      for (std::size_t i = 0; i < meanP.size(); ++i) meanP[i] += p.P[i] / trials;
      for (int i = 0; i < k; ++i) meanPi[i] += p.pi[i] / trials;
    }
    ConcentrationPoint pt;
    pt.n = n;
    for (const auto& p : profiles) {
      double dev = 0;
      for (std::size_t i = 0; i < meanP.size(); ++i) dev = std::max(dev, std::abs(p.P[i] - meanP[i]));
      for (int i = 0; i < k; ++i) dev = std::max(dev, std::abs(p.pi[i] - meanPi[i]));
      pt.max_deviation = std::max(pt.max_deviation, dev);
      pt.mean_deviation += dev / trials;
      if (k > 1) pt.max_pi1_deviation = std::max(pt.max_pi1_deviation, std::abs(p.pi[1] - meanPi[1]));
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace fiid
