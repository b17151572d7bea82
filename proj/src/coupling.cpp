#include "fiid/coupling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fiid/error.hpp"
#include "fiid/kernels.hpp"
#include "fiid/parallel.hpp"
#include "fiid/profile.hpp"

namespace fiid {

namespace {

std::vector<std::uint8_t> bernoulli_mask(std::size_t n, double p, Seed seed) {
  std::vector<std::uint64_t> bits(n);
  Rng rng(seed);
  for (auto& b : bits) b = rng.bits();
  std::vector<std::uint8_t> mask(n);
  kernels::threshold_below(bits, threshold_cutoff(p), mask);
  return mask;
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("p", "must lie in [0, 1]");
}

// C(K, u) / C(m, u), the unbiased estimate of Q^u from K successes in m draws.
double binomial_ratio(int K, int m, int u) {
  if (u > K) return 0.0;
  double r = 1.0;
  for (int j = 0; j < u; ++j) r *= static_cast<double>(K - j) / static_cast<double>(m - j);
  return r;
}

bool is_integer(double u) { return u == std::floor(u); }

}  // namespace

LabelField resampled_labels(const LabelField& base, std::span<const std::uint8_t> mask, const LabelField& fresh) {
  if (base.size() != mask.size() || fresh.size() != mask.size()) throw InvalidInput("mask", "sizes differ");
  std::vector<std::uint64_t> w(base.size());
  for (std::size_t v = 0; v < w.size(); ++v) w[v] = mask[v] ? fresh.bits(static_cast<Vertex>(v)) : base.bits(static_cast<Vertex>(v));
  return LabelField(std::move(w), fresh.seed());
}

CouplingEnsemble sample_ensemble(const BlockFactor& factor, const Projector& projector, double p, int k, Seed seed) {
  check_p(p);
  if (k < 1) throw InvalidInput("k", "must be at least 1");
  const std::size_t n = projector.graph().n();
  CouplingEnsemble e;
  e.p = p;
  e.k = k;
  const LabelField x0 = LabelField::generate(n, derive_seed(seed, "coupling/base"));
  e.mask = bernoulli_mask(n, p, derive_seed(seed, "coupling/mask"));
  e.base = projector.project(factor, x0).colours;
  e.copies.resize(k);
  for (int i = 0; i < k; ++i) {
    const LabelField fresh = LabelField::generate(n, derive_seed(seed, "coupling/fresh", static_cast<std::uint64_t>(i)));
    e.copies[i] = projector.project(factor, resampled_labels(x0, e.mask, fresh)).colours;
  }
  return e;
}

IntersectionDensities intersection_densities(const CouplingEnsemble& ensemble, int d) {
  if (d < 2) throw InvalidInput("d", "normalization log(d)/d needs d >= 2");
  IntersectionDensities out;
  if (ensemble.copies.empty()) return out;
  const double n = static_cast<double>(ensemble.copies[0].size());
  const double scale = d / std::log(static_cast<double>(d));
  std::vector<std::uint8_t> acc(ensemble.copies[0].begin(), ensemble.copies[0].end());
  std::uint64_t count = static_cast<std::uint64_t>(std::count(acc.begin(), acc.end(), std::uint8_t{1}));
  for (std::size_t i = 0; i < ensemble.copies.size(); ++i) {
    if (i > 0) count = kernels::and_accumulate(acc, ensemble.copies[i]);
    out.counts.push_back(count);
    out.raw.push_back(count / n);
    out.normalized.push_back(count / n * scale);
  }
  return out;
}

std::vector<std::uint64_t> membership_counts(const CouplingEnsemble& ensemble) {
  const int k = static_cast<int>(ensemble.copies.size());
  if (k > 20) throw InvalidInput("k", "membership counts need k <= 20");
  std::vector<std::uint64_t> counts(std::size_t{1} << k, 0);
  if (k == 0) return counts;
  const std::size_t n = ensemble.copies[0].size();
  for (std::size_t v = 0; v < n; ++v) {
    std::uint32_t s = 0;
    for (int i = 0; i < k; ++i) s |= static_cast<std::uint32_t>(ensemble.copies[i][v] != 0) << i;
    ++counts[s];
  }
  return counts;
}

StabilityEstimate stability_moments(const BlockFactor& factor, const Projector& projector, double p,
                                    std::span<const double> u, Seed seed, const StabilityOptions& options) {
  check_p(p);
  for (double x : u) {
    if (!(x >= 0.0)) throw InvalidInput("u", "exponents must be nonnegative");
  }
  if (options.trials < 2) throw InvalidInput("trials", "need at least 2 trials for standard errors");
  if (options.resamples < 1) throw InvalidInput("resamples", "must be positive");
  const std::size_t n = projector.graph().n();
  const std::size_t T = options.trials;
  const int m = options.resamples;
  const std::size_t nu = u.size();

  StabilityEstimate est;
  est.p = p;
  est.trials = T;
  est.resamples = m;
  est.ratio_available.assign(nu, false);

  std::vector<std::vector<double>> direct(nu, std::vector<double>(T, 0.0));
  std::vector<double> density(T, 0.0);
  std::vector<std::uint8_t> empty(T, 0);

  if (options.direct) {
    parallel_for(T, [&](std::size_t t) {
      const Seed ts = derive_seed(seed, "stability/direct", t);
      const LabelField x0 = LabelField::generate(n, derive_seed(ts, "base"));
      const auto mask = bernoulli_mask(n, p, derive_seed(ts, "mask"));
      const auto y0 = projector.project(factor, x0).colours;
      std::vector<Vertex> in_set;
      for (std::size_t v = 0; v < n; ++v) {
        if (y0[v]) in_set.push_back(static_cast<Vertex>(v));
      }
      density[t] = static_cast<double>(in_set.size()) / n;
      if (in_set.empty()) {
        empty[t] = 1;
        return;
      }
      std::vector<int> K(in_set.size(), 0);
      std::vector<Colour> y(n);
      for (int j = 0; j < m; ++j) {
        const LabelField fresh = LabelField::generate(n, derive_seed(ts, "fresh", static_cast<std::uint64_t>(j)));
        projector.project_into(factor, resampled_labels(x0, mask, fresh), y);
        for (std::size_t a = 0; a < in_set.size(); ++a) K[a] += y[in_set[a]];
      }
      for (std::size_t q = 0; q < nu; ++q) {
        double s = 0;
        for (int k : K) {
          s += is_integer(u[q]) && u[q] <= m ? binomial_ratio(k, m, static_cast<int>(u[q]))
                                             : std::pow(static_cast<double>(k) / m, u[q]);
        }
        direct[q][t] = s / static_cast<double>(K.size());
      }
    });
  }

  std::vector<std::vector<double>> ratio(nu, std::vector<double>(T, 0.0));
  int max_copies = 1;
  for (std::size_t q = 0; q < nu; ++q) {
    if (is_integer(u[q]) && u[q] <= 16) {
      est.ratio_available[q] = true;
      max_copies = std::max(max_copies, static_cast<int>(u[q]) + 1);
    }
  }
  if (options.ratio) {
    parallel_for(T, [&](std::size_t t) {
      const CouplingEnsemble e =
          sample_ensemble(factor, projector, p, max_copies, derive_seed(seed, "stability/ratio", t));
      const IntersectionDensities a = intersection_densities(e, std::max(projector.graph().d(), 2));
      if (a.counts[0] == 0) {
        empty[t] = 1;
        return;
      }
      for (std::size_t q = 0; q < nu; ++q) {
        if (!est.ratio_available[q]) continue;
        ratio[q][t] = static_cast<double>(a.counts[static_cast<std::size_t>(u[q])]) / static_cast<double>(a.counts[0]);
      }
    });
  }

  est.failed = std::any_of(empty.begin(), empty.end(), [](std::uint8_t x) { return x != 0; });
  est.density = summarize(density).mean;
  for (std::size_t q = 0; q < nu; ++q) {
    if (options.direct) {
      const Summary s = summarize(direct[q]);
      est.direct.push_back({u[q], s.mean, s.sem});
    }
    if (options.ratio) {
      const Summary s = est.ratio_available[q] ? summarize(ratio[q]) : Summary{};
      est.ratio.push_back({u[q], s.mean, s.sem});
    }
  }
  return est;
}

TuneResult tune_p(const BlockFactor& factor, const Projector& projector, double u, double target, double tolerance,
                  Seed seed, const StabilityOptions& options) {
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance", "must be positive");
  StabilityOptions opt = options;
  opt.direct = true;
  opt.ratio = false;
  TuneResult res;
  const double us[1] = {u};
  // Same seed at every p: masks are nested thresholds of one uniform field.
  auto eval = [&](double p) {
    ++res.evaluations;
    const StabilityEstimate e = stability_moments(factor, projector, p, us, seed, opt);
    if (e.failed) throw ConstructionFailure("tune_p: empty percolation in some trial");
    return e.direct[0].value;
  };
  const double f_lo = 1.0;  // Lemma 4.6: exact at p = 0
  if (std::abs(target - f_lo) <= tolerance) return {0.0, f_lo, res.evaluations, false};
  const double f_hi = eval(1.0);
  if (target > f_lo || target < f_hi - tolerance) {
    throw InvalidInput("target", "outside the attainable range [" + std::to_string(f_hi) + ", 1]");
  }
  if (std::abs(target - f_hi) <= tolerance) return {1.0, f_hi, res.evaluations, false};

  double lo = 0.0, hi = 1.0, flo = f_lo, fhi = f_hi;
  double best_p = 0.0, best_f = f_lo;
  for (int it = 0; it < 40 && hi - lo > 1e-9; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid);
    if (std::abs(fm - target) < std::abs(best_f - target)) best_p = mid, best_f = fm;
    if (std::abs(fm - target) <= tolerance) break;
    if (fm > flo + tolerance || fm < fhi - tolerance) {
      // not bracketed monotonically: grid search inside the current bracket
      res.used_grid = true;
      for (int g = 1; g < 20; ++g) {
        const double pg = lo + (hi - lo) * g / 20.0;
        const double fg = eval(pg);
        if (std::abs(fg - target) < std::abs(best_f - target)) best_p = pg, best_f = fg;
      }
      break;
    }
    if (fm > target) lo = mid, flo = fm;
    else hi = mid, fhi = fm;
  }
  res.p = best_p;
  res.achieved = best_f;
  return res;
}

std::vector<double> alpha_from_beta(std::span<const double> beta, int k) {
  if (k < 1 || k > 12) throw InvalidInput("k", "subset maps need 1 <= k <= 12");
  const std::size_t size = std::size_t{1} << k;
  if (beta.size() != size) throw InvalidInput("beta", "size must be 2^k");
  std::vector<double> a(beta.begin(), beta.end());
  a[0] = 0.0;
  for (int i = 0; i < k; ++i) {
    for (std::size_t s = 0; s < size; ++s) {
      if (!(s >> i & 1)) a[s] += a[s | (std::size_t{1} << i)];
    }
  }
  a[0] = 0.0;
  return a;
}

std::vector<double> beta_from_alpha(std::span<const double> alpha, int k) {
  if (k < 1 || k > 12) throw InvalidInput("k", "subset maps need 1 <= k <= 12");
  const std::size_t size = std::size_t{1} << k;
  if (alpha.size() != size) throw InvalidInput("alpha", "size must be 2^k");
  std::vector<double> b(alpha.begin(), alpha.end());
  b[0] = 0.0;
  for (int i = 0; i < k; ++i) {
    for (std::size_t s = 0; s < size; ++s) {
      if (!(s >> i & 1)) b[s] -= b[s | (std::size_t{1} << i)];
    }
  }
  b[0] = 0.0;
  return b;
}

IdentityCheck lemma_identity_check(std::span<const double> beta, int k) {
  if (k < 1 || k > 10) throw InvalidInput("k", "Lemma 4.8 check needs 1 <= k <= 10");
  const std::size_t size = std::size_t{1} << k;
  if (beta.size() != size) throw InvalidInput("beta", "size must be 2^k");
  std::vector<double> by_size(k + 1, 0.0);
  std::vector<bool> seen(k + 1, false);
  for (std::size_t s = 1; s < size; ++s) {
    const int c = std::popcount(s);
    if (!seen[c]) {
      seen[c] = true;
      by_size[c] = beta[s];
    } else if (std::abs(beta[s] - by_size[c]) > 1e-12 * std::max(1.0, std::abs(by_size[c]))) {
      throw InvalidInput("beta", "not exchangeable: beta(S) must depend only on #S");
    }
  }
  IdentityCheck r;
  double pairs = 0;
  for (std::size_t s = 1; s < size; ++s) {
    r.lhs += beta[s];
    for (std::size_t t = 1; t < size; ++t) {
      if (s & t) pairs += beta[s] * beta[t];
    }
  }
  r.lhs -= 0.5 * pairs;
  const std::vector<double> alpha = alpha_from_beta(beta, k);
  double binom = 1;
  for (int i = 1; i <= k; ++i) {
    binom = binom * (k - i + 1) / i;
    const double a = alpha[(std::size_t{1} << i) - 1];
    r.rhs += (i % 2 == 1 ? 1.0 : -1.0) * binom * (a - 0.5 * a * a);
  }
  return r;
}

double s_k(double x, int k) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("x", "must lie in [0, 1]");
  if (k < 1) throw InvalidInput("k", "must be at least 1");
  if (x == 0.0) return k;
  return -std::expm1(k * std::log1p(-x)) / x;
}

double qinq_functional(double alpha1, std::span<const double> Q, std::span<const double> R, int k) {
  if (Q.empty() || Q.size() != R.size()) throw InvalidInput("Q", "Q and R must be nonempty and of equal size");
  double sq = 0, sqr = 0;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    sq += s_k(Q[i], k);
    sqr += s_k(Q[i] * R[i], k);
  }
  const double m = static_cast<double>(Q.size());
  return alpha1 * sq / m - 0.5 * alpha1 * alpha1 * sqr / m;
}

}  // namespace fiid
