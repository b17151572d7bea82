#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fiid/factor.hpp"
#include "fiid/graph.hpp"

namespace fiid {

// Floating point edge profile (P, pi) over k colours; P is k x k row-major.
struct ProfileMatrix {
  int k = 0;
  std::vector<double> P;
  std::vector<double> pi;

  double at(int i, int j) const { return P[static_cast<std::size_t>(i) * k + j]; }
};

// Empirical edge profile kept as exact integer counts. pair_counts[i*k+j] is
// the number of directed edges (u, w) with colour(u) = i, colour(w) = j; a
// loop at v contributes two directed edges (v, v).
struct EdgeProfile {
  int k = 0;
  std::uint64_t n = 0;
  std::uint64_t nd = 0;
  std::vector<std::uint64_t> pair_counts;
  std::vector<std::uint64_t> vertex_counts;

  std::uint64_t pair_count(int i, int j) const { return pair_counts[static_cast<std::size_t>(i) * k + j]; }
  double P(int i, int j) const { return static_cast<double>(pair_count(i, j)) / static_cast<double>(nd); }
  double pi(int i) const { return static_cast<double>(vertex_counts[i]) / static_cast<double>(n); }
  ProfileMatrix matrix() const;
  // Exact invariants: symmetric counts, row sums equal d * vertex counts, totals nd and n.
  bool consistent(int d) const;
};

EdgeProfile edge_profile(std::span<const Colour> colours, int max_colour, const RegularMultigraph& g);
EdgeProfile edge_profile(const ColoringField& coloring, const RegularMultigraph& g);

// Rows "i,j,P(i,j)" then "i,pi(i)". With exact = true the values are "count/nd" and "count/n".
std::string profile_csv(const EdgeProfile& profile, bool exact = false);

struct PercStats {
  double density = 0;       // alpha
  double correlation = 0;   // rho = P(1,1) / alpha^2, 0 when alpha = 0
  double avdeg = 0;         // d * P(1,1) / alpha = in-set directed edges / in-set vertices
  std::uint64_t in_set = 0;
  std::uint64_t in_set_pairs = 0;  // directed edges with both ends in the set
  std::map<std::uint64_t, std::uint64_t> component_sizes;  // size -> number of components
};

PercStats percolation_stats(std::span<const Colour> colours, const RegularMultigraph& g);
PercStats percolation_stats(const ColoringField& coloring, const RegularMultigraph& g);

struct Component {
  std::uint64_t size = 0;
  std::uint64_t edges = 0;  // simple edges after collapsing parallel edges
  bool has_loop = false;
  bool is_tree() const { return !has_loop && edges + 1 == size; }
};

struct ComponentDegreeReport {
  std::vector<Component> components;
  std::uint64_t in_set = 0;
  std::uint64_t edges = 0;
  double global_average_degree = 0;  // 2 * edges / in_set
  bool all_trees = true;
  // Every tree component has average degree exactly 2(m-1)/m (checked as integers).
  bool identity_holds = true;
  bool global_below_two = true;      // only meaningful when all_trees
};

// Components of the subgraph induced by colour-1 vertices, multi-edges collapsed.
ComponentDegreeReport component_degree_check(std::span<const Colour> colours, const RegularMultigraph& g);

// Natural-log entropy; entries must be nonnegative and sum to 1 (within 1e-9).
double entropy(std::span<const double> dist);
// h(x) = -x log x with h(0) = 0; defined for x >= 0.
double h(double x);
// (d/2) H(P) - (d-1) H(pi).
double entropy_functional(const ProfileMatrix& profile, int d);
double entropy_functional(const EdgeProfile& profile, int d);

struct TrialRecord {
  std::size_t index = 0;
  Seed graph_seed = 0;
  Seed label_seed = 0;
  double functional = 0;
  double density = 0;
  double correlation = 0;
  std::uint64_t non_tree = 0;
};

struct Summary {
  double mean = 0, min = 0, max = 0, sem = 0;  // sem: standard error of the mean
};
Summary summarize(std::span<const double> values);

struct EntropyCheckReport {
  std::string factor;
  int d = 0;
  std::size_t n = 0;
  std::vector<TrialRecord> trials;
  Summary functional;
};

EntropyCheckReport entropy_check(const BlockFactor& factor, int d, std::size_t n, std::size_t trials, Seed seed,
                                 ProjectionMode mode = ProjectionMode::strict);

struct ConcentrationPoint {
  std::size_t n = 0;
  double max_deviation = 0;   // max over trials and entries of |P_t - mean P| and |pi_t - mean pi|
  double mean_deviation = 0;  // trial average of the per-trial max-entry deviation
  double max_pi1_deviation = 0;
};

std::vector<ConcentrationPoint> concentration_experiment(const BlockFactor& factor, int d,
                                                         std::span<const std::size_t> n_grid, std::size_t trials,
                                                         Seed seed, ProjectionMode mode = ProjectionMode::strict);

}  // namespace fiid
