#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fiid/graph.hpp"
#include "fiid/rng.hpp"

namespace fiid {

using Colour = std::uint8_t;

// iid Uniform labels, one per vertex, stored as 64 raw bits; value() maps them into (0, 1].
class LabelField {
 public:
  static LabelField generate(std::size_t n, Seed seed);
  LabelField(std::vector<std::uint64_t> bits, Seed seed) : bits_(std::move(bits)), seed_(seed) {}

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint64_t bits(Vertex v) const noexcept { return bits_[v]; }
  double value(Vertex v) const noexcept { return unit_from_bits(bits_[v]); }
  std::span<const std::uint64_t> raw() const noexcept { return bits_; }
  Seed seed() const noexcept { return seed_; }

  // The field formed by auxiliary coordinate `coordinate` of every label.
  LabelField coordinate(std::uint64_t coordinate) const;

 private:
  std::vector<std::uint64_t> bits_;
  Seed seed_ = 0;
};

// A rooted labelled tree; node 0 is the root. Typically the r-ball of T_d.
struct LabelledTree {
  std::vector<std::int32_t> parent;                 // -1 at the root
  std::vector<std::vector<std::uint32_t>> children;
  std::vector<int> depth;
  std::vector<std::uint64_t> labels;

  std::size_t size() const noexcept { return parent.size(); }
  int height() const;
  // Tree neighbours of node i: parent first (if any), then children in order.
  std::vector<std::uint32_t> neighbors(std::uint32_t i) const;
};

// The labelled r-ball of v, which must be a tree.
LabelledTree labelled_ball(const RegularMultigraph& g, Vertex v, int r, const LabelField& labels);
// The full ball T_{d,r} with fresh labels.
LabelledTree random_tree_ball(int d, int r, Rng& rng);

// The local rule behind a block factor. Implementations provide two routes
// that must agree on tree balls: evaluate_tree() reads an explicit labelled
// ball, run_local() executes the rule as a synchronous local algorithm on a
// whole graph.
class FactorRule {
 public:
  virtual ~FactorRule() = default;

  virtual std::string name() const = 0;
  // Canonical "name:key=value,..." form, parseable by parse_factor.
  virtual std::string spec() const = 0;
  virtual int radius() const = 0;
  virtual int max_colour() const { return 1; }
  virtual bool produces_independent_sets() const { return false; }
  // Density of colour 1 on T_d when known in closed form.
  virtual std::optional<double> tree_density(int d) const = 0;

  virtual Colour evaluate_tree(const LabelledTree& ball) const = 0;
  virtual void run_local(const RegularMultigraph& g, const LabelField& labels, std::span<Colour> out) const = 0;
};

class BlockFactor {
 public:
  // arity 0 means the rule is defined for every degree.
  BlockFactor(std::shared_ptr<const FactorRule> rule, int arity = 0);

  const FactorRule& rule() const noexcept { return *rule_; }
  std::string name() const { return rule_->name(); }
  std::string spec() const { return rule_->spec(); }
  int radius() const { return rule_->radius(); }
  int max_colour() const { return rule_->max_colour(); }
  int arity() const noexcept { return arity_; }
  std::optional<double> tree_density(int d) const { return rule_->tree_density(d); }

 private:
  std::shared_ptr<const FactorRule> rule_;
  int arity_;
};

// Colour of the root of a labelled tree ball. The ball must be regular of
// some degree d up to the factor's radius.
Colour evaluate_on_tree_ball(const BlockFactor& factor, const LabelledTree& ball);

// colour(v) = 1{label(v) <= p}; radius 0.
BlockFactor bernoulli_factor(double p);
// v joins iff its label is strictly below every neighbour's; radius 1.
BlockFactor local_min_is();
// `rounds` rounds of candidate/confirm growth; radius = rounds. Each round every
// vertex not yet in the set is a candidate with probability `rate`; a candidate
// joins iff no neighbour is a candidate and no neighbour has joined.
BlockFactor nibble_is(int rounds, double rate);
// Per vertex: with probability p the base independent-set factor's colour,
// otherwise Bernoulli of density x * unit; unit defaults to log(d)/d.
BlockFactor interpolate_factor(const BlockFactor& base, double x, double p, int d,
                               std::optional<double> unit = std::nullopt);

// Auxiliary label coordinates used by the built-in rules.
inline constexpr std::uint64_t kChoiceCoordinate = 1;
inline constexpr std::uint64_t kBaseCoordinate = 2;
inline constexpr std::uint64_t kBernoulliCoordinate = 3;
inline constexpr std::uint64_t kNibbleCoordinateBase = 16;

// "bernoulli:p=0.3", "local_min", "nibble:rounds=40,rate=0.05",
// "interpolate:base=local_min,p=0.9,c=0.5,unit=base" (x=... instead of c=...;
// base parameters as base.rounds=..., base.rate=..., base.p=...).
BlockFactor parse_factor(std::string_view spec, int d);

struct Provenance {
  std::string factor;
  Seed graph_seed = 0;
  Seed label_seed = 0;
};

struct ColoringField {
  std::vector<Colour> colours;
  int max_colour = 1;
  Provenance provenance;

  std::size_t size() const noexcept { return colours.size(); }
};

enum class ProjectionMode {
  strict,  // colour 0 wherever the r-ball is not a tree
  local,   // the rule's local algorithm evaluated on the graph everywhere
};

// Projection onto one graph. Tree flags are computed once per (graph, radius)
// and reused across label fields. Holds a reference to `g`.
class Projector {
 public:
  Projector(const RegularMultigraph& g, int radius, ProjectionMode mode = ProjectionMode::strict);

  ColoringField project(const BlockFactor& factor, const LabelField& labels) const;
  void project_into(const BlockFactor& factor, const LabelField& labels, std::span<Colour> out) const;

  const RegularMultigraph& graph() const noexcept { return *graph_; }
  int radius() const noexcept { return radius_; }
  ProjectionMode mode() const noexcept { return mode_; }
  std::span<const std::uint8_t> tree_flags() const noexcept { return tree_flags_; }
  std::size_t non_tree_count() const noexcept { return non_tree_; }

 private:
  const RegularMultigraph* graph_;
  int radius_;
  ProjectionMode mode_;
  std::vector<std::uint8_t> tree_flags_;
  std::size_t non_tree_ = 0;
};

ColoringField project(const BlockFactor& factor, const RegularMultigraph& g, const LabelField& labels,
                      ProjectionMode mode = ProjectionMode::strict);

}  // namespace fiid
