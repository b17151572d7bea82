// fiid_lab: command-line front end. Every subcommand prints one JSON report
// (schema "fiid-lab/1") and exits 0 iff all of its checks pass.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fiid/bounds.hpp"
#include "fiid/coupling.hpp"
#include "fiid/error.hpp"
#include "fiid/factor.hpp"
#include "fiid/graph.hpp"
#include "fiid/kernels.hpp"
#include "fiid/orient.hpp"
#include "fiid/parallel.hpp"
#include "fiid/profile.hpp"

using json = nlohmann::ordered_json;
using namespace fiid;

namespace {

constexpr const char* kSchema = "fiid-lab/1";

struct Common {
  Seed seed = 1;
  std::string out;
  std::string format = "json";
  bool timing = false;
};

struct Report {
  json config = json::object();
  json body = json::object();
  json checks = json::array();
  std::string csv;  // set by commands that support --format csv

  void check(const std::string& name, bool passed, json detail = json::object()) {
    json c = {{"name", name}, {"passed", passed}};
    for (auto& [k, v] : detail.items()) c[k] = v;
    checks.push_back(std::move(c));
  }
};

json summary_json(const Summary& s) { return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"sem", s.sem}}; }

ProjectionMode parse_mode(const std::string& m) {
  if (m == "strict") return ProjectionMode::strict;
  if (m == "local") return ProjectionMode::local;
  throw InvalidInput("mode", "expected strict or local, got '" + m + "'");
}

void write_output(const Common& common, const std::string& text) {
  if (common.out.empty() || common.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(common.out, std::ios::binary);
  if (!f) throw InvalidInput("out", "cannot open '" + common.out + "' for writing");
  f << text;
}

int emit(const std::string& command, const Common& common, Report& rep, double seconds) {
  bool ok = true;
  json failures = json::array();
  for (const auto& c : rep.checks) {
    if (!c["passed"].get<bool>()) {
      ok = false;
      failures.push_back(c["name"]);
    }
  }
  if (common.format == "csv") {
    if (rep.csv.empty()) throw InvalidInput("format", "csv output is not available for '" + command + "'");
    write_output(common, rep.csv);
    if (!ok) std::cerr << json{{"schema", kSchema}, {"failures", failures}}.dump() << '\n';
    return ok ? 0 : 1;
  }
  if (common.format != "json") throw InvalidInput("format", "expected json or csv");
  json doc;
  doc["schema"] = kSchema;
  doc["command"] = command;
  rep.config["seed"] = common.seed;
  doc["config"] = rep.config;
  for (auto& [k, v] : rep.body.items()) doc[k] = v;
  doc["checks"] = rep.checks;
  doc["failures"] = failures;
  doc["passed"] = ok;
  if (common.timing) {
    doc["timing"] = {{"seconds", seconds},
                     {"threads", worker_count()},
                     {"isa", std::string(kernels::isa_name(kernels::active_isa()))}};
  }
  write_output(common, doc.dump(2) + "\n");
  return ok ? 0 : 1;
}

std::string trials_csv(const json& trials) {
  if (trials.empty()) return "";
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (auto& [k, v] : trials[0].items()) {
    out << (first ? "" : ",") << k;
    first = false;
  }
  out << '\n';
  for (const auto& row : trials) {
    first = true;
    for (auto& [k, v] : row.items()) {
      out << (first ? "" : ",");
      first = false;
      if (v.is_number_float()) out << v.get<double>();
      else if (v.is_string()) out << v.get<std::string>();
      else out << v.dump();
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

struct GenGraphArgs {
  std::size_t n = 1000;
  int d = 3;
  int cycles = 0;
};

void run_gen_graph(const GenGraphArgs& a, const Common& common, Report& rep) {
  const RegularMultigraph g = sample_configuration_model(a.n, a.d, common.seed);
  rep.config = {{"n", a.n}, {"d", a.d}, {"cycles", a.cycles}};
  if (common.format == "text") return;
  std::uint64_t loops = 0;
  for (HalfEdge h = 0; h < g.half_edge_count(); ++h) {
    if (g.partner(h) > h && g.owner(h) == g.owner(g.partner(h))) ++loops;
  }
  rep.body["edges"] = g.edge_count();
  rep.body["loops"] = loops;
  if (a.cycles > 0) {
    const auto counts = count_cycles_up_to(g, a.cycles);
    rep.body["cycle_counts"] = std::vector<std::uint64_t>(counts.begin() + 1, counts.end());
  }
  std::uint64_t degree_sum = 0;
  for (Vertex v = 0; v < g.n(); ++v) degree_sum += g.neighbors(v).size();
  rep.check("degree_sum", degree_sum == g.half_edge_count(), {{"value", degree_sum}});
}

struct FactorArgs {
  std::string factor = "local_min";
  std::size_t n = 100000;
  int d = 3;
  std::size_t trials = 1;
  std::string mode = "strict";
};

void run_simulate(const FactorArgs& a, const Common& common, Report& rep) {
  const BlockFactor f = parse_factor(a.factor, a.d);
  const ProjectionMode mode = parse_mode(a.mode);
  if (a.trials == 0) throw InvalidInput("trials", "must be positive");
  rep.config = {{"factor", f.spec()}, {"n", a.n}, {"d", a.d}, {"trials", a.trials}, {"mode", a.mode}};
  const bool is_factor = f.rule().produces_independent_sets();
  std::vector<json> rows(a.trials);
  std::vector<std::uint8_t> identity(a.trials, 1), independent(a.trials, 1);
  parallel_for(a.trials, [&](std::size_t t) {
    const Seed gs = derive_seed(common.seed, "simulate/graph", t);
    const Seed ls = derive_seed(common.seed, "simulate/labels", t);
    const RegularMultigraph g = sample_configuration_model(a.n, a.d, gs);
    const Projector proj(g, f.radius(), mode);
    const ColoringField y = proj.project(f, LabelField::generate(a.n, ls));
    const PercStats s = percolation_stats(y, g);
    const ComponentDegreeReport comp = component_degree_check(y.colours, g);
    identity[t] = comp.identity_holds;
    std::uint64_t violations = 0;
    if (is_factor) {
      const auto wide = tree_ball_flags(g, f.radius() + 1);
      for (Vertex v = 0; v < g.n(); ++v) {
        if (!y.colours[v] || !wide[v]) continue;
        for (Vertex w : g.neighbors(v)) violations += y.colours[w] && wide[w];
      }
      independent[t] = violations == 0;
    }
    std::uint64_t largest = s.component_sizes.empty() ? 0 : s.component_sizes.rbegin()->first;
    rows[t] = {{"trial", t},
               {"graph_seed", gs},
               {"label_seed", ls},
               {"density", s.density},
               {"correlation", s.correlation},
               {"avdeg", s.avdeg},
               {"in_set", s.in_set},
               {"non_tree", proj.non_tree_count()},
               {"components", comp.components.size()},
               {"largest_component", largest},
               {"forest", comp.all_trees},
               {"forest_average_degree", comp.global_average_degree},
               {"independence_violations", violations}};
  });
  json trials = rows;
  std::vector<double> dens, corr, avd;
  for (const auto& r : rows) {
    dens.push_back(r["density"]);
    corr.push_back(r["correlation"]);
    avd.push_back(r["avdeg"]);
  }
  rep.body["trials"] = trials;
  rep.body["aggregates"] = {{"density", summary_json(summarize(dens))},
                            {"correlation", summary_json(summarize(corr))},
                            {"avdeg", summary_json(summarize(avd))}};
  if (auto td = f.tree_density(a.d)) rep.body["tree_density"] = *td;
  rep.check("component_degree_identity", std::all_of(identity.begin(), identity.end(), [](auto x) { return x != 0; }));
  if (is_factor) {
    rep.check("independent_on_tree_balls",
              std::all_of(independent.begin(), independent.end(), [](auto x) { return x != 0; }));
  }
  rep.csv = trials_csv(trials);
}

struct ProfileArgs {
  FactorArgs f;
  std::string graph;
  bool exact = false;
};

void run_profile(const ProfileArgs& a, const Common& common, Report& rep) {
  std::optional<RegularMultigraph> loaded;
  if (!a.graph.empty()) {
    std::ifstream in(a.graph);
    if (!in) throw InvalidInput("graph", "cannot open '" + a.graph + "'");
    loaded = read_graph(in);
  }
  const int d = loaded ? loaded->d() : a.f.d;
  const std::size_t n = loaded ? loaded->n() : a.f.n;
  const BlockFactor f = parse_factor(a.f.factor, d);
  const RegularMultigraph g = loaded ? *loaded : sample_configuration_model(n, d, derive_seed(common.seed, "profile/graph"));
  const ColoringField y = Projector(g, f.radius(), parse_mode(a.f.mode))
                              .project(f, LabelField::generate(n, derive_seed(common.seed, "profile/labels")));
  const EdgeProfile p = edge_profile(y, g);
  rep.config = {{"factor", f.spec()}, {"n", n}, {"d", d}, {"mode", a.f.mode}, {"graph", a.graph}, {"exact", a.exact}};
  json P = json::array(), pi = json::array();
  for (int i = 0; i < p.k; ++i) {
    json row = json::array();
    for (int j = 0; j < p.k; ++j) {
      if (a.exact) row.push_back(std::to_string(p.pair_count(i, j)) + "/" + std::to_string(p.nd));
      else row.push_back(p.P(i, j));
    }
    P.push_back(row);
    if (a.exact) pi.push_back(std::to_string(p.vertex_counts[i]) + "/" + std::to_string(p.n));
    else pi.push_back(p.pi(i));
  }
  rep.body["P"] = P;
  rep.body["pi"] = pi;
  rep.body["entropy_functional"] = entropy_functional(p, d);
  rep.check("profile_invariants", p.consistent(d));
  rep.csv = profile_csv(p, a.exact);
}

struct EntropyArgs {
  FactorArgs f;
  double tolerance = 0.01;
};

void run_entropy_check(const EntropyArgs& a, const Common& common, Report& rep) {
  const BlockFactor f = parse_factor(a.f.factor, a.f.d);
  const EntropyCheckReport r = entropy_check(f, a.f.d, a.f.n, a.f.trials, common.seed, parse_mode(a.f.mode));
  rep.config = {{"factor", f.spec()},
                {"n", a.f.n},
                {"d", a.f.d},
                {"trials", a.f.trials},
                {"mode", a.f.mode},
                {"tolerance", a.tolerance}};
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"trial", t.index},
                      {"graph_seed", t.graph_seed},
                      {"label_seed", t.label_seed},
                      {"functional", t.functional},
                      {"density", t.density},
                      {"correlation", t.correlation},
                      {"non_tree", t.non_tree}});
  }
  rep.body["trials"] = trials;
  rep.body["aggregates"] = {{"functional", summary_json(r.functional)}};
  rep.check("functional_nonnegative", r.functional.min >= -a.tolerance,
            {{"value", r.functional.min}, {"tolerance", a.tolerance}});
  rep.csv = trials_csv(trials);
}

struct BoundArgs {
  double c = 0;
  double d = 1000;
  double eps = 0;
  std::optional<double> rho;
};

void run_bound(const BoundArgs& a, const Common&, Report& rep) {
  const BoundReport b = bound_report(a.c, a.d, a.eps, a.rho);
  rep.config = {{"c", a.c}, {"d", a.d}, {"eps", a.eps}};
  if (a.rho) rep.config["rho"] = *a.rho;
  rep.body["psi_c"] = b.psi_c;
  rep.body["psi_rho"] = b.psi_rho;
  rep.body["q"] = {{"a", b.q.a}, {"b", b.q.b}, {"c0", b.q.c0}};
  rep.body["discriminant"] = b.discriminant;
  rep.body["roots"] = b.roots;
  rep.body["bracket"] = b.bracket;
  rep.body["density_bound"] = b.density_bound;
  rep.body["beta_bound"] = b.beta_bound;
  rep.body["larger_root_lower_bound"] = b.larger_root_lower_bound;
  if (!b.roots.empty()) {
    double worst = 0;
    for (double r : b.roots) worst = std::max(worst, std::abs(b.q(r)) / std::max({std::abs(b.q.c0), std::abs(b.q.b * r), 1e-300}));
    rep.check("roots_vanish", worst <= 1e-9, {{"value", worst}, {"tolerance", 1e-9}});
    rep.check("larger_root_lower_bound", b.roots[1] >= b.larger_root_lower_bound * (1 - 1e-12));
  }
}

struct InterpArgs {
  double c = 0.5;
  double p = 0.9;
  int d = 10;
  std::size_t n = 100000;
  std::size_t trials = 50;
  std::string base = "local_min";
  std::string unit = "base";
  std::string mode = "strict";
  double tol_beta = 0.1;
  double tol_corr = 0.05;
};

void run_interpolate(const InterpArgs& a, const Common& common, Report& rep) {
  const InterpolationParams ip = interpolation_params(a.c, a.p);
  const BlockFactor base = parse_factor(a.base, a.d);
  std::optional<double> unit;
  if (a.unit == "base") {
    unit = base.tree_density(a.d);
    if (!unit) throw InvalidInput("unit", "base factor has no closed-form density at this d");
  } else if (a.unit != "logd") {
    throw InvalidInput("unit", "expected base or logd");
  }
  const BlockFactor f = interpolate_factor(base, ip.x, a.p, a.d, unit);
  const double u = unit.value_or(std::log(static_cast<double>(a.d)) / a.d);
  const ProjectionMode mode = parse_mode(a.mode);
  rep.config = {{"c", a.c}, {"p", a.p}, {"d", a.d}, {"n", a.n}, {"trials", a.trials}, {"base", base.spec()},
                {"unit", a.unit}, {"mode", a.mode}, {"tol_beta", a.tol_beta}, {"tol_corr", a.tol_corr}};
  if (a.trials == 0) throw InvalidInput("trials", "must be positive");
  std::vector<double> beta(a.trials), corr(a.trials);
  json trials = json::array();
  parallel_for(a.trials, [&](std::size_t t) {
    const RegularMultigraph g = sample_configuration_model(a.n, a.d, derive_seed(common.seed, "interpolate/graph", t));
    const ColoringField y = Projector(g, f.radius(), mode)
                                .project(f, LabelField::generate(a.n, derive_seed(common.seed, "interpolate/labels", t)));
    const PercStats s = percolation_stats(y, g);
    beta[t] = s.density / u;
    corr[t] = s.correlation;
  });
  for (std::size_t t = 0; t < a.trials; ++t) trials.push_back({{"trial", t}, {"density_factor", beta[t]}, {"correlation", corr[t]}});
  const Summary sb = summarize(beta), sc = summarize(corr);
  rep.body["factor"] = f.spec();
  rep.body["x"] = ip.x;
  rep.body["unit_value"] = u;
  rep.body["predicted"] = {{"density_factor", ip.density_factor}, {"correlation", a.c}};
  rep.body["trials"] = trials;
  rep.body["aggregates"] = {{"density_factor", summary_json(sb)}, {"correlation", summary_json(sc)}};
  rep.check("density_factor", std::abs(sb.mean - ip.density_factor) <= a.tol_beta,
            {{"value", sb.mean}, {"expected", ip.density_factor}, {"tolerance", a.tol_beta}});
  rep.check("correlation", std::abs(sc.mean - a.c) <= a.tol_corr,
            {{"value", sc.mean}, {"expected", a.c}, {"tolerance", a.tol_corr}});
  rep.csv = trials_csv(trials);
}

struct CoupleArgs {
  FactorArgs f;
  double p = 0.5;
  int k = 4;
  std::vector<double> u{1, 2, 3};
  int resamples = 64;
};

void run_couple(const CoupleArgs& a, const Common& common, Report& rep) {
  const BlockFactor f = parse_factor(a.f.factor, a.f.d);
  const ProjectionMode mode = parse_mode(a.f.mode);
  if (a.k < 1 || a.k > 10) throw InvalidInput("k", "must lie in [1, 10]");
  if (a.f.trials < 2) throw InvalidInput("trials", "need at least 2 trials");
  rep.config = {{"factor", f.spec()}, {"n", a.f.n},    {"d", a.f.d}, {"p", a.p},
                {"k", a.k},           {"u", a.u},      {"trials", a.f.trials},
                {"resamples", a.resamples}, {"mode", a.f.mode}};
  const RegularMultigraph g = sample_configuration_model(a.f.n, a.f.d, derive_seed(common.seed, "couple/graph"));
  const Projector proj(g, f.radius(), mode);
  const CouplingEnsemble e = sample_ensemble(f, proj, a.p, a.k, derive_seed(common.seed, "couple/ensemble"));
  const IntersectionDensities id = intersection_densities(e, std::max(a.f.d, 2));

  StabilityOptions opt;
  opt.trials = a.f.trials;
  opt.resamples = a.resamples;
  const StabilityEstimate st = stability_moments(f, proj, a.p, a.u, derive_seed(common.seed, "couple/stability"), opt);

  // Empirical beta(S), symmetrized over subsets of equal size so that it is exchangeable.
  const auto counts = membership_counts(e);
  const std::size_t size = counts.size();
  std::vector<double> by_size(a.k + 1, 0.0), members(a.k + 1, 0.0);
  for (std::size_t s = 1; s < size; ++s) {
    const int c = std::popcount(s);
    by_size[c] += static_cast<double>(counts[s]) / static_cast<double>(a.f.n);
    members[c] += 1;
  }
  std::vector<double> beta(size, 0.0);
  for (std::size_t s = 1; s < size; ++s) beta[s] = by_size[std::popcount(s)] / members[std::popcount(s)];
  const IdentityCheck ic = lemma_identity_check(beta, a.k);

  rep.body["p"] = a.p;
  rep.body["k"] = a.k;
  rep.body["alpha"] = id.normalized;
  rep.body["alpha_raw"] = id.raw;
  json stab = json::object();
  bool agree = true, monotone = true;
  for (std::size_t q = 0; q < a.u.size(); ++q) {
    std::ostringstream key;
    key << a.u[q];
    json entry = {{"direct", {{"value", st.direct[q].value}, {"sem", st.direct[q].sem}}}};
    if (st.ratio_available[q]) {
      entry["ratio"] = {{"value", st.ratio[q].value}, {"sem", st.ratio[q].sem}};
      const double se = std::hypot(st.direct[q].sem, st.ratio[q].sem);
      const double diff = std::abs(st.direct[q].value - st.ratio[q].value);
      entry["z"] = se > 0 ? diff / se : 0.0;
      if (diff > 3 * se + 1e-12) agree = false;
    }
    stab[key.str()] = entry;
  }
  for (std::size_t i = 1; i < id.counts.size(); ++i) monotone = monotone && id.counts[i] <= id.counts[i - 1];
  rep.body["stability"] = stab;
  rep.body["density"] = st.density;
  rep.body["identity_check"] = {{"lhs", ic.lhs}, {"rhs", ic.rhs}};
  rep.check("alpha_monotone", monotone);
  rep.check("estimators_agree", agree && !st.failed);
  rep.check("lemma_4_8_identity", std::abs(ic.lhs - ic.rhs) <= 1e-10, {{"value", std::abs(ic.lhs - ic.rhs)}});
}

struct OrientArgs {
  std::size_t n = 100;
  int d = 3;
  std::size_t trials = 1;
  std::string edges;
  double min_success = 0.95;
};

void run_orient(const OrientArgs& a, const Common& common, Report& rep) {
  if (a.trials == 0) throw InvalidInput("trials", "must be positive");
  rep.config = {{"n", a.n}, {"d", a.d}, {"trials", a.trials}, {"min_success", a.min_success}};
  std::vector<json> rows(a.trials);
  std::vector<std::uint8_t> peeled(a.trials, 0), certified(a.trials, 0);
  std::vector<Orientation> first(1);
  parallel_for(a.trials, [&](std::size_t t) {
    const Seed gs = derive_seed(common.seed, "orient/graph", t);
    const RegularMultigraph g = sample_configuration_model(a.n, a.d, gs);
    json row = {{"trial", t}, {"graph_seed", gs}};
    try {
      Orientation o = orient_no_source_sink(g, derive_seed(common.seed, "orient/orientation", t));
      const Certificate c = certify(o);
      peeled[t] = 1;
      certified[t] = c.ok();
      row["peel_attempts"] = o.peel_attempts;
      row["cycles"] = o.cycles.size();
      row["sources"] = c.sources;
      row["sinks"] = c.sinks;
      row["outside_theorem"] = o.outside_theorem;
      if (t == 0) first[0] = std::move(o);
    } catch (const ConstructionFailure& e) {
      row["failure"] = e.what();
    }
    rows[t] = std::move(row);
  });
  std::size_t ok_peel = 0, bad = 0;
  for (std::size_t t = 0; t < a.trials; ++t) {
    ok_peel += peeled[t];
    bad += peeled[t] && !certified[t];
  }
  rep.body["trials"] = rows;
  rep.body["peel_success_rate"] = static_cast<double>(ok_peel) / a.trials;
  rep.check("no_sources_or_sinks", bad == 0, {{"value", bad}});
  if (a.trials > 1) {
    rep.check("peel_success_rate", static_cast<double>(ok_peel) / a.trials >= a.min_success,
              {{"value", static_cast<double>(ok_peel) / a.trials}, {"tolerance", a.min_success}});
  } else {
    rep.check("peel_succeeded", ok_peel == 1);
  }
  if (!a.edges.empty() && peeled[0]) {
    std::ofstream f(a.edges);
    if (!f) throw InvalidInput("edges", "cannot open '" + a.edges + "'");
    for (std::size_t e = 0; e < first[0].tail.size(); ++e) f << first[0].tail[e] << ' ' << first[0].head[e] << '\n';
  }
}

struct OracleArgs {
  std::size_t n = 2;
  int d = 3;
  int k = 2;
  bool list = false;
};

std::string rational_string(const Rational& r) {
  std::ostringstream s;
  s << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) s << '/' << boost::multiprecision::denominator(r);
  return s.str();
}

void run_oracle(const OracleArgs& a, const Common&, Report& rep) {
  rep.config = {{"n", a.n}, {"d", a.d}, {"k", a.k}};
  PairingEnumerator en(a.n, a.d);
  const std::uint64_t expected = double_factorial_odd(static_cast<long>(a.n * a.d) - 1);
  json pairings = json::array();
  std::uint64_t count = 0;
  const bool list = a.list || expected <= 1000;
  while (en.next()) {
    ++count;
    if (list) pairings.push_back(std::vector<HalfEdge>(en.pairing().begin(), en.pairing().end()));
  }
  rep.body["pairing_count"] = count;
  if (list) rep.body["pairings"] = pairings;
  rep.check("pairing_count", count == expected, {{"value", count}, {"expected", expected}});

  const auto table = brute_force_partition_table(a.n, a.d, a.k);
  const auto profiles = enumerate_integer_profiles(a.n, a.d, a.k);
  json rows = json::array();
  bool all_match = true;
  for (const auto& p : profiles) {
    const Rational exact = expected_partition_count_exact(p, a.n, a.d);
    const auto it = table.find(p);
    const Rational brute = it == table.end() ? Rational(0) : it->second;
    all_match = all_match && exact == brute;
    rows.push_back({{"vertex_counts", p.vertex_counts},
                    {"pair_counts", p.pair_counts},
                    {"formula", rational_string(exact)},
                    {"brute_force", rational_string(brute)},
                    {"match", exact == brute}});
  }
  bool covered = true;
  for (const auto& [p, v] : table) covered = covered && valid_integer_profile(p, a.n, a.d);
  rep.body["profiles"] = rows;
  rep.check("formula_matches_enumeration", all_match, {{"profiles", profiles.size()}});
  rep.check("observed_profiles_valid", covered);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiid_lab: factor-of-iid percolation on random regular graphs"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "64-bit seed");
    sub->add_option("--out", common.out, "output path (default stdout)");
    sub->add_option("--format", common.format, "json or csv");
    sub->add_flag("--timing", common.timing, "include wall time (reports are then not byte-stable)");
  };
  auto add_factor = [](CLI::App* sub, FactorArgs& f) {
    sub->add_option("--factor", f.factor, "factor spec, e.g. bernoulli:p=0.3");
    sub->add_option("--n", f.n, "vertices");
    sub->add_option("--d", f.d, "degree");
    sub->add_option("--trials", f.trials, "independent trials");
    sub->add_option("--mode", f.mode, "strict or local projection");
  };

  GenGraphArgs gen;
  auto* s_gen = app.add_subcommand("gen-graph", "sample a configuration-model graph");
  add_common(s_gen);
  s_gen->add_option("--n", gen.n);
  s_gen->add_option("--d", gen.d);
  s_gen->add_option("--cycles", gen.cycles, "count cycles up to this length (json format)");

  FactorArgs sim;
  auto* s_sim = app.add_subcommand("simulate", "project a factor and report percolation statistics");
  add_common(s_sim);
  add_factor(s_sim, sim);

  ProfileArgs prof;
  auto* s_prof = app.add_subcommand("profile", "edge profile of one projected colouring");
  add_common(s_prof);
  add_factor(s_prof, prof.f);
  s_prof->add_option("--graph", prof.graph, "read the graph from this file");
  s_prof->add_flag("--exact", prof.exact, "report count/nd rationals");

  EntropyArgs ent;
  ent.f.trials = 50;
  auto* s_ent = app.add_subcommand("entropy-check", "entropy functional of empirical profiles");
  add_common(s_ent);
  add_factor(s_ent, ent.f);
  s_ent->add_option("--tolerance", ent.tolerance);

  BoundArgs bnd;
  std::optional<double> rho;
  auto* s_bnd = app.add_subcommand("bound", "Theorem 1.2 bound and the quadratic q");
  add_common(s_bnd);
  s_bnd->add_option("--c", bnd.c);
  s_bnd->add_option("--d", bnd.d);
  s_bnd->add_option("--eps", bnd.eps);
  s_bnd->add_option("--rho", rho);

  InterpArgs itp;
  auto* s_itp = app.add_subcommand("interpolate", "interpolation between an independent set and Bernoulli");
  add_common(s_itp);
  s_itp->add_option("--c", itp.c);
  s_itp->add_option("--p", itp.p);
  s_itp->add_option("--d", itp.d);
  s_itp->add_option("--n", itp.n);
  s_itp->add_option("--trials", itp.trials);
  s_itp->add_option("--base", itp.base);
  s_itp->add_option("--unit", itp.unit, "base or logd");
  s_itp->add_option("--mode", itp.mode);
  s_itp->add_option("--tol-beta", itp.tol_beta);
  s_itp->add_option("--tol-corr", itp.tol_corr);

  CoupleArgs cpl;
  cpl.f.factor = "bernoulli:p=0.2";
  cpl.f.d = 5;
  cpl.f.n = 10000;
  cpl.f.trials = 20;
  auto* s_cpl = app.add_subcommand("couple", "resampling coupling, intersection densities and stability");
  add_common(s_cpl);
  add_factor(s_cpl, cpl.f);
  s_cpl->add_option("--p", cpl.p);
  s_cpl->add_option("--k", cpl.k);
  s_cpl->add_option("--u", cpl.u)->delimiter(',');
  s_cpl->add_option("--resamples", cpl.resamples);

  OrientArgs ori;
  auto* s_ori = app.add_subcommand("orient", "orientation without sources or sinks");
  add_common(s_ori);
  s_ori->add_option("--n", ori.n);
  s_ori->add_option("--d", ori.d);
  s_ori->add_option("--trials", ori.trials);
  s_ori->add_option("--edges", ori.edges, "write the first orientation as 'u v' lines");
  s_ori->add_option("--min-success", ori.min_success);

  OracleArgs orc;
  auto* s_orc = app.add_subcommand("oracle", "exhaustive pairing enumeration and exact E[Z] table");
  add_common(s_orc);
  s_orc->add_option("--n", orc.n);
  s_orc->add_option("--d", orc.d);
  s_orc->add_option("--k", orc.k, "number of colours");
  s_orc->add_flag("--list-pairings", orc.list);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Report rep;
  std::string command;
  try {
    if (s_gen->parsed()) {
      command = "gen-graph";
      if (common.format == "text") {
        const RegularMultigraph g = sample_configuration_model(gen.n, gen.d, common.seed);
        std::ostringstream out;
        write_graph(out, g);
        write_output(common, out.str());
        return 0;
      }
      run_gen_graph(gen, common, rep);
    } else if (s_sim->parsed()) {
      command = "simulate";
      run_simulate(sim, common, rep);
    } else if (s_prof->parsed()) {
      command = "profile";
      run_profile(prof, common, rep);
    } else if (s_ent->parsed()) {
      command = "entropy-check";
      run_entropy_check(ent, common, rep);
    } else if (s_bnd->parsed()) {
      command = "bound";
      bnd.rho = rho;
      run_bound(bnd, common, rep);
    } else if (s_itp->parsed()) {
      command = "interpolate";
      run_interpolate(itp, common, rep);
    } else if (s_cpl->parsed()) {
      command = "couple";
      run_couple(cpl, common, rep);
    } else if (s_ori->parsed()) {
      command = "orient";
      run_orient(ori, common, rep);
    } else if (s_orc->parsed()) {
      command = "oracle";
      run_oracle(orc, common, rep);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit(command, common, rep, seconds);
  } catch (const InvalidInput& e) {
    std::cerr << json{{"schema", kSchema}, {"error", {{"field", e.field()}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  } catch (const OracleGuard& e) {
    std::cerr << json{{"schema", kSchema}, {"error", {{"field", "oracle"}, {"message", e.what()}}}}.dump() << '\n';
    return 2;
  } catch (const ConstructionFailure& e) {
    std::cerr << json{{"schema", kSchema}, {"error", {{"field", "construction"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
}
