#include "fiid/factor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "fiid/error.hpp"
#include "fiid/kernels.hpp"

namespace fiid {

LabelField LabelField::generate(std::size_t n, Seed seed) {
  std::vector<std::uint64_t> bits(n);
  Rng rng(derive_seed(seed, "labels"));
  for (auto& b : bits) b = rng.bits();
  return LabelField(std::move(bits), seed);
}

LabelField LabelField::coordinate(std::uint64_t coordinate) const {
  std::vector<std::uint64_t> out(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = sub_bits(bits_[i], coordinate);
  return LabelField(std::move(out), seed_);
}

int LabelledTree::height() const {
  int h = 0;
  for (int x : depth) h = std::max(h, x);
  return h;
}

std::vector<std::uint32_t> LabelledTree::neighbors(std::uint32_t i) const {
  std::vector<std::uint32_t> out;
  out.reserve(children[i].size() + 1);
  if (parent[i] >= 0) out.push_back(static_cast<std::uint32_t>(parent[i]));
  out.insert(out.end(), children[i].begin(), children[i].end());
  return out;
}

LabelledTree labelled_ball(const RegularMultigraph& g, Vertex v, int r, const LabelField& labels) {
  if (labels.size() != g.n()) throw InvalidInput("labels", "size must equal n");
  const RootedBall ball = neighborhood(g, v, r);
  if (!ball.is_tree) throw InvalidInput("ball", "r-ball of vertex " + std::to_string(v) + " is not a tree");
  LabelledTree t;
  const std::size_t m = ball.vertices.size();
  t.parent.assign(m, -1);
  t.children.assign(m, {});
  t.depth = ball.depth;
  t.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) t.labels[i] = labels.bits(ball.vertices[i]);
  for (auto [a, b] : ball.edges) {
    if (ball.depth[a] > ball.depth[b]) std::swap(a, b);
    t.parent[b] = static_cast<std::int32_t>(a);
    t.children[a].push_back(b);
  }
  return t;
}

LabelledTree random_tree_ball(int d, int r, Rng& rng) {
  if (d < 1) throw InvalidInput("d", "must be positive");
  if (r < 0) throw InvalidInput("r", "must be nonnegative");
  LabelledTree t;
  t.parent.push_back(-1);
  t.children.emplace_back();
  t.depth.push_back(0);
  for (std::size_t i = 0; i < t.parent.size(); ++i) {
    if (t.depth[i] >= r) continue;
    const int kids = i == 0 ? d : d - 1;
    for (int c = 0; c < kids; ++c) {
      const auto id = static_cast<std::uint32_t>(t.parent.size());
      t.parent.push_back(static_cast<std::int32_t>(i));
      t.children.emplace_back();
      t.depth.push_back(t.depth[i] + 1);
      t.children[i].push_back(id);
    }
  }
  t.labels.resize(t.parent.size());
  for (auto& l : t.labels) l = rng.bits();
  return t;
}

BlockFactor::BlockFactor(std::shared_ptr<const FactorRule> rule, int arity) : rule_(std::move(rule)), arity_(arity) {
  if (!rule_) throw InvalidInput("rule", "must not be null");
}

Colour evaluate_on_tree_ball(const BlockFactor& factor, const LabelledTree& ball) {
  const std::size_t m = ball.size();
  if (m == 0 || ball.parent[0] != -1) throw InvalidInput("ball", "node 0 must be the root");
  if (ball.children.size() != m || ball.depth.size() != m || ball.labels.size() != m) {
    throw InvalidInput("ball", "inconsistent array sizes");
  }
  const int r = factor.radius();
  const int d = static_cast<int>(ball.children[0].size());
  if (factor.arity() != 0 && r > 0 && d != factor.arity()) {
    throw InvalidInput("ball", "root degree " + std::to_string(d) + " does not match factor arity");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) {
      const auto p = ball.parent[i];
      if (p < 0 || static_cast<std::size_t>(p) >= i || ball.depth[i] != ball.depth[p] + 1) {
        throw InvalidInput("ball", "not a rooted tree in BFS order");
      }
    }
    if (ball.depth[i] < r) {
      const int deg = static_cast<int>(ball.children[i].size()) + (i > 0 ? 1 : 0);
      if (deg != d) throw InvalidInput("ball", "not d-regular within the factor radius");
    }
  }
  return factor.rule().evaluate_tree(ball);
}

namespace {

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void check_probability(const char* field, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput(field, "must lie in [0, 1]");
}

bool below(std::uint64_t bits, std::uint64_t cutoff) { return (bits >> 11) < cutoff; }

class BernoulliRule final : public FactorRule {
 public:
  explicit BernoulliRule(double p) : p_(p), cutoff_(threshold_cutoff(p)) {}
  std::string name() const override { return "bernoulli"; }
  std::string spec() const override { return "bernoulli:p=" + format_number(p_); }
  int radius() const override { return 0; }
  std::optional<double> tree_density(int) const override { return p_; }
  Colour evaluate_tree(const LabelledTree& ball) const override { return below(ball.labels[0], cutoff_); }
  void run_local(const RegularMultigraph&, const LabelField& labels, std::span<Colour> out) const override {
    kernels::threshold_below(labels.raw(), cutoff_, out);
  }

 private:
  double p_;
  std::uint64_t cutoff_;
};

class LocalMinRule final : public FactorRule {
 public:
  std::string name() const override { return "local_min"; }
  std::string spec() const override { return "local_min"; }
  int radius() const override { return 1; }
  bool produces_independent_sets() const override { return true; }
  std::optional<double> tree_density(int d) const override { return 1.0 / (d + 1); }
  Colour evaluate_tree(const LabelledTree& ball) const override {
    for (auto c : ball.children[0]) {
      if (!(ball.labels[0] < ball.labels[c])) return 0;
    }
    return 1;
  }
  void run_local(const RegularMultigraph& g, const LabelField& labels, std::span<Colour> out) const override {
    kernels::strict_local_min(labels.raw(), g.adjacency(), g.d(), out);
  }
};

// Synchronous candidate/confirm rounds. nbrs(v) yields the neighbour list of v.
template <class Neighbours>
void nibble_rounds(std::size_t count, std::span<const std::uint64_t> labels, const Neighbours& nbrs, int rounds,
                   std::uint64_t cutoff, std::span<Colour> joined) {
  std::vector<std::uint8_t> cand(count);
  std::vector<std::size_t> joining;
  std::fill(joined.begin(), joined.end(), Colour{0});
  for (int t = 1; t <= rounds; ++t) {
    const std::uint64_t coord = kNibbleCoordinateBase + static_cast<std::uint64_t>(t);
    for (std::size_t v = 0; v < count; ++v) cand[v] = !joined[v] && below(sub_bits(labels[v], coord), cutoff);
    joining.clear();
    for (std::size_t v = 0; v < count; ++v) {
      if (!cand[v]) continue;
      bool ok = true;
      for (auto w : nbrs(v)) {
        if (cand[w] || joined[w]) {
          ok = false;
          break;
        }
      }
      if (ok) joining.push_back(v);
    }
    for (auto v : joining) joined[v] = 1;
  }
}

class NibbleRule final : public FactorRule {
 public:
  NibbleRule(int rounds, double rate) : rounds_(rounds), rate_(rate), cutoff_(threshold_cutoff(rate)) {}
  std::string name() const override { return "nibble"; }
  std::string spec() const override {
    return "nibble:rounds=" + std::to_string(rounds_) + ",rate=" + format_number(rate_);
  }
  int radius() const override { return rounds_; }
  bool produces_independent_sets() const override { return true; }
  std::optional<double> tree_density(int d) const override {
    if (rounds_ == 1) return rate_ * std::pow(1.0 - rate_, d);
    return std::nullopt;
  }
  Colour evaluate_tree(const LabelledTree& ball) const override {
    std::vector<Colour> joined(ball.size());
    nibble_rounds(
        ball.size(), ball.labels, [&](std::size_t v) { return ball.neighbors(static_cast<std::uint32_t>(v)); },
        rounds_, cutoff_, joined);
    return joined[0];
  }
  void run_local(const RegularMultigraph& g, const LabelField& labels, std::span<Colour> out) const override {
    nibble_rounds(
        g.n(), labels.raw(), [&](std::size_t v) { return g.neighbors(static_cast<Vertex>(v)); }, rounds_, cutoff_,
        out);
  }

 private:
  int rounds_;
  double rate_;
  std::uint64_t cutoff_;
};

class InterpolateRule final : public FactorRule {
 public:
  InterpolateRule(BlockFactor base, double x, double p, double unit)
      : base_(std::move(base)),
        x_(x),
        p_(p),
        unit_(unit),
        density_(x * unit),
        choice_cutoff_(threshold_cutoff(p)),
        density_cutoff_(threshold_cutoff(x * unit)) {}

  std::string name() const override { return "interpolate"; }
  std::string spec() const override {
    std::string s = "interpolate:base=" + base_.name();
    const std::string base_spec = base_.spec();
    const auto colon = base_spec.find(':');
    if (colon != std::string::npos) {
      std::string rest = base_spec.substr(colon + 1);
      std::size_t start = 0;
      while (start <= rest.size()) {
        const auto comma = rest.find(',', start);
        const auto item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        s += ",base." + item;
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    return s + ",p=" + format_number(p_) + ",x=" + format_number(x_) + ",unit=" + format_number(unit_);
  }
  int radius() const override { return base_.radius(); }
  std::optional<double> tree_density(int d) const override {
    const auto b = base_.tree_density(d);
    if (!b) return std::nullopt;
    return p_ * *b + (1.0 - p_) * density_;
  }
  Colour evaluate_tree(const LabelledTree& ball) const override {
    const std::uint64_t root = ball.labels[0];
    if (below(sub_bits(root, kChoiceCoordinate), choice_cutoff_)) {
      LabelledTree derived = ball;
      for (auto& l : derived.labels) l = sub_bits(l, kBaseCoordinate);
      return base_.rule().evaluate_tree(derived);
    }
    return below(sub_bits(root, kBernoulliCoordinate), density_cutoff_);
  }
  void run_local(const RegularMultigraph& g, const LabelField& labels, std::span<Colour> out) const override {
    std::vector<Colour> base_out(g.n());
    base_.rule().run_local(g, labels.coordinate(kBaseCoordinate), base_out);
    for (std::size_t v = 0; v < g.n(); ++v) {
      const std::uint64_t l = labels.bits(static_cast<Vertex>(v));
      out[v] = below(sub_bits(l, kChoiceCoordinate), choice_cutoff_) ? base_out[v]
                                                                      : below(sub_bits(l, kBernoulliCoordinate), density_cutoff_);
    }
  }

 private:
  BlockFactor base_;
  double x_, p_, unit_, density_;
  std::uint64_t choice_cutoff_, density_cutoff_;
};

}  // namespace

BlockFactor bernoulli_factor(double p) {
  check_probability("p", p);
  return BlockFactor(std::make_shared<BernoulliRule>(p));
}

BlockFactor local_min_is() { return BlockFactor(std::make_shared<LocalMinRule>()); }

BlockFactor nibble_is(int rounds, double rate) {
  if (rounds < 1) throw InvalidInput("rounds", "must be at least 1");
  if (!(rate > 0.0 && rate < 1.0)) throw InvalidInput("rate", "must lie in (0, 1)");
  return BlockFactor(std::make_shared<NibbleRule>(rounds, rate));
}

BlockFactor interpolate_factor(const BlockFactor& base, double x, double p, int d, std::optional<double> unit) {
  if (!base.rule().produces_independent_sets()) throw InvalidInput("base", "must produce independent sets");
  if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("x", "must be a nonnegative real");
  check_probability("p", p);
  double u;
  if (unit) {
    u = *unit;
    if (!(u > 0.0 && u <= 1.0)) throw InvalidInput("unit", "must lie in (0, 1]");
  } else {
    if (d < 2) throw InvalidInput("d", "log(d)/d unit needs d >= 2");
    u = std::log(static_cast<double>(d)) / d;
  }
  if (x * u > 1.0) throw InvalidInput("x", "Bernoulli density x*unit = " + format_number(x * u) + " exceeds 1");
  return BlockFactor(std::make_shared<InterpolateRule>(base, x, p, u), d);
}

// ---------------------------------------------------------------------------

namespace {

struct ParsedSpec {
  std::string name;
  std::map<std::string, std::string> params;
};

ParsedSpec split_spec(std::string_view spec) {
  ParsedSpec out;
  const auto colon = spec.find(':');
  out.name = std::string(spec.substr(0, colon));
  if (out.name.empty()) throw InvalidInput("factor", "empty factor name");
  if (colon == std::string_view::npos) return out;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw InvalidInput("factor", "expected key=value, got '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    if (!out.params.emplace(key, std::string(item.substr(eq + 1))).second) {
      throw InvalidInput("factor", "duplicate parameter '" + key + "'");
    }
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

double take_number(std::map<std::string, std::string>& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) throw InvalidInput(key, "missing parameter");
  const std::string text = it->second;
  params.erase(it);
  double value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw InvalidInput(key, "not a number: " + text);
  return value;
}

int take_int(std::map<std::string, std::string>& params, const std::string& key) {
  const double v = take_number(params, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InvalidInput(key, "must be an integer");
  return static_cast<int>(v);
}

void reject_leftovers(const std::map<std::string, std::string>& params) {
  if (!params.empty()) throw InvalidInput(params.begin()->first, "unknown parameter");
}

// A short nibble whose radius keeps most balls of G_{n,d}, n ~ 10^5, tree-like.
BlockFactor default_nibble(int d) {
  const int rounds = d <= 3 ? 4 : d <= 5 ? 3 : 2;
  return nibble_is(rounds, 1.0 / std::max(d, 2));
}

BlockFactor build_simple(const std::string& name, std::map<std::string, std::string>& params, int d) {
  if (name == "bernoulli") {
    const double p = take_number(params, "p");
    reject_leftovers(params);
    return bernoulli_factor(p);
  }
  if (name == "local_min" || name == "local_min_is") {
    reject_leftovers(params);
    return local_min_is();
  }
  if (name == "nibble" || name == "nibble_is") {
    if (params.empty()) return default_nibble(d);
    const int rounds = take_int(params, "rounds");
    const double rate = params.count("rate") ? take_number(params, "rate") : 1.0 / std::max(d, 2);
    reject_leftovers(params);
    return nibble_is(rounds, rate);
  }
  throw InvalidInput("factor", "unknown factor '" + name + "'");
}

}  // namespace

BlockFactor parse_factor(std::string_view spec, int d) {
  ParsedSpec parsed = split_spec(spec);
  if (parsed.name != "interpolate") return build_simple(parsed.name, parsed.params, d);

  auto& params = parsed.params;
  const auto base_it = params.find("base");
  if (base_it == params.end()) throw InvalidInput("base", "missing parameter");
  const std::string base_name = base_it->second;
  params.erase(base_it);
  std::map<std::string, std::string> base_params;
  for (auto it = params.begin(); it != params.end();) {
    if (it->first.rfind("base.", 0) == 0) {
      base_params.emplace(it->first.substr(5), it->second);
      it = params.erase(it);
    } else {
      ++it;
    }
  }
  if (base_name == "interpolate") throw InvalidInput("base", "nested interpolation is not supported");
  const BlockFactor base = build_simple(base_name, base_params, d);
  const double p = take_number(params, "p");
  std::optional<double> unit;
  if (const auto it = params.find("unit"); it != params.end()) {
    const std::string u = it->second;
    params.erase(it);
    if (u == "base") {
      unit = base.tree_density(d);
      if (!unit) throw InvalidInput("unit", "base factor has no closed-form density at this d");
    } else if (u != "logd") {
      std::map<std::string, std::string> tmp{{"unit", u}};
      unit = take_number(tmp, "unit");
    }
  }
  double x;
  if (params.count("c")) {
    if (params.count("x")) throw InvalidInput("c", "give either c or x, not both");
    const double c = take_number(params, "c");
    if (!(c >= 0.0 && c < 1.0)) throw InvalidInput("c", "must lie in [0, 1)");
    if (!(p > 0.0 && p < 1.0)) throw InvalidInput("p", "must lie in (0, 1) when c is given");
    x = p / (1.0 - p) * (1.0 / std::sqrt(1.0 - c) - 1.0);
  } else {
    x = take_number(params, "x");
  }
  reject_leftovers(params);
  return interpolate_factor(base, x, p, d, unit);
}

// ---------------------------------------------------------------------------

Projector::Projector(const RegularMultigraph& g, int radius, ProjectionMode mode)
    : graph_(&g), radius_(radius), mode_(mode) {
  if (radius < 0) throw InvalidInput("radius", "must be nonnegative");
  tree_flags_ = tree_ball_flags(g, radius);
  non_tree_ = static_cast<std::size_t>(std::count(tree_flags_.begin(), tree_flags_.end(), std::uint8_t{0}));
}

void Projector::project_into(const BlockFactor& factor, const LabelField& labels, std::span<Colour> out) const {
  const RegularMultigraph& g = *graph_;
  if (labels.size() != g.n()) throw InvalidInput("labels", "size must equal n");
  if (out.size() != g.n()) throw InvalidInput("out", "size must equal n");
  if (factor.arity() != 0 && factor.arity() != g.d()) {
    throw InvalidInput("d", "graph degree " + std::to_string(g.d()) + " does not match factor arity " +
                                std::to_string(factor.arity()));
  }
  if (factor.radius() != radius_) throw InvalidInput("radius", "projector radius differs from factor radius");
  factor.rule().run_local(g, labels, out);
  if (mode_ == ProjectionMode::strict) {
    for (std::size_t v = 0; v < g.n(); ++v) {
      if (!tree_flags_[v]) out[v] = 0;
    }
  }
}

ColoringField Projector::project(const BlockFactor& factor, const LabelField& labels) const {
  ColoringField field;
  field.colours.resize(graph_->n());
  project_into(factor, labels, field.colours);
  field.max_colour = factor.max_colour();
  field.provenance.factor = factor.spec();
  field.provenance.label_seed = labels.seed();
  return field;
}

ColoringField project(const BlockFactor& factor, const RegularMultigraph& g, const LabelField& labels,
                      ProjectionMode mode) {
  return Projector(g, factor.radius(), mode).project(factor, labels);
}

}  // namespace fiid
