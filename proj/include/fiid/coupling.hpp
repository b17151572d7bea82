#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fiid/factor.hpp"

namespace fiid {

// Y^0 from the base labels X^0 and k copies Y^1..Y^k whose labels W^i agree
// with X^0 off the resample mask and are fresh on it. The mask is shared by all copies.
struct CouplingEnsemble {
  double p = 0;
  int k = 0;
  std::vector<std::uint8_t> mask;
  std::vector<Colour> base;                 // Y^0
  std::vector<std::vector<Colour>> copies;  // Y^1..Y^k
};

// Labels W^i for copy i >= 1 given the base field, mask and fresh field.
LabelField resampled_labels(const LabelField& base, std::span<const std::uint8_t> mask, const LabelField& fresh);

CouplingEnsemble sample_ensemble(const BlockFactor& factor, const Projector& projector, double p, int k, Seed seed);

struct IntersectionDensities {
  std::vector<double> raw;         // raw[i-1] = fraction of vertices in all of Y^1..Y^i
  std::vector<double> normalized;  // raw * d / log d
  std::vector<std::uint64_t> counts;
};
IntersectionDensities intersection_densities(const CouplingEnsemble& ensemble, int d);

// membership_counts()[S] = number of vertices whose set of containing copies
// (among Y^1..Y^k, bit i-1 for copy i) is exactly S. Requires k <= 20.
std::vector<std::uint64_t> membership_counts(const CouplingEnsemble& ensemble);

struct MomentEstimate {
  double u = 0;
  double value = 0;
  double sem = 0;
};

struct StabilityEstimate {
  double p = 0;
  std::vector<MomentEstimate> direct;  // conditional estimator from m resamples per base field
  std::vector<MomentEstimate> ratio;   // alpha_{u+1}/alpha_1 for integer u (empty entries otherwise)
  std::vector<bool> ratio_available;
  double density = 0;                  // mean density of Y^0 over trials
  std::size_t trials = 0;
  int resamples = 0;
  bool failed = false;                 // some trial had an empty Y^0
};

struct StabilityOptions {
  std::size_t trials = 20;
  int resamples = 64;
  bool direct = true;
  bool ratio = true;
};

// E*[Q^u] by two independent estimators; u entries must be >= 0.
StabilityEstimate stability_moments(const BlockFactor& factor, const Projector& projector, double p,
                                    std::span<const double> u, Seed seed, const StabilityOptions& options = {});

struct TuneResult {
  double p = 0;
  double achieved = 0;
  int evaluations = 0;
  bool used_grid = false;
};

// Bisection for E*[Q^u] = target, with the direct estimator under common random numbers.
TuneResult tune_p(const BlockFactor& factor, const Projector& projector, double u, double target, double tolerance,
                  Seed seed, const StabilityOptions& options = {});

// Subset maps are indexed by bitmask (bit i-1 for element i); entry 0 is unused.
std::vector<double> alpha_from_beta(std::span<const double> beta, int k);
std::vector<double> beta_from_alpha(std::span<const double> alpha, int k);

struct IdentityCheck {
  double lhs = 0;
  double rhs = 0;
};
// Lemma 4.8 for an exchangeable beta (beta(S) depends only on #S).
IdentityCheck lemma_identity_check(std::span<const double> beta, int k);

// (1 - (1-x)^k) / x, with s_k(0) = k.
double s_k(double x, int k);

// alpha_1 mean(s_k(Q)) - (alpha_1^2 / 2) mean(s_k(Q R)); Q and R paired by index.
double qinq_functional(double alpha1, std::span<const double> Q, std::span<const double> R, int k);

}  // namespace fiid
