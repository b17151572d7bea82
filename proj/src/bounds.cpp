#include "fiid/bounds.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "fiid/error.hpp"

namespace fiid {

double psi(double c) {
  if (!(c >= 0.0)) throw InvalidInput("c", "Psi requires c >= 0");
  if (c == 0.0) return 1.0;
  return 1.0 - c + c * std::log(c);
}

double corr_density_bound(double c, double d, double eps) {
  if (!(c >= 0.0)) throw InvalidInput("c", "must be nonnegative");
  if (c == 1.0) throw InvalidInput("c", "c = 1 makes Psi(c) vanish (Theorem 1.2 needs c != 1)");
  if (!(d >= 3.0)) throw InvalidInput("d", "Theorem 1.2 needs d >= 3");
  if (!(eps >= 0.0)) throw InvalidInput("eps", "must be nonnegative");
  const double ps = psi(c);
  const double L = std::log(d);
  return 2.0 / (ps * d) * (L - std::log(L) + 1.0 + std::log(ps) + eps);
}

double corr_density_bound(double c, int d, double eps) { return corr_density_bound(c, static_cast<double>(d), eps); }

Quadratic q_polynomial(double rho, double c, double d) {
  if (!(rho >= 0.0)) throw InvalidInput("rho", "must be nonnegative");
  if (!(c >= 0.0) || c == 1.0) throw InvalidInput("c", "need c >= 0 and c != 1 so that Psi(c) > 0");
  if (!(d >= 3.0)) throw InvalidInput("d", "need d >= 3 for log log d");
  const double L = std::log(d);
  Quadratic q;
  q.a = (2 * rho + 1) * L / (2 * d);
  q.b = -psi(rho) / 2;
  q.c0 = 1 + (1 + std::log(psi(c)) - std::log(L)) / L;
  return q;
}

std::vector<double> q_roots(double rho, double c, double d) {
  const Quadratic q = q_polynomial(rho, c, d);
  const double disc = q.discriminant();
  if (disc < 0) return {};
  // Citardauq form for the root that would otherwise cancel.
  const double s = -0.5 * (q.b + (q.b > 0 ? 1.0 : -1.0) * std::sqrt(disc));
  double r1 = s / q.a;
  double r2 = s != 0.0 ? q.c0 / s : r1;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

double larger_root_lower_bound(double rho, double d) {
  return d / ((2 * rho + 1) * std::log(d)) * psi(rho) / 2;
}

PsiRatioReport psi_ratio_bounds(double rho, double c) {
  if (!(rho >= 0.0)) throw InvalidInput("rho", "must be nonnegative");
  const bool below = rho <= c && c < 1.0;
  const bool above = rho >= c && c > 1.0;
  if (!below && !above) throw InvalidInput("rho", "Lemma 3.3 needs rho <= c < 1 or rho >= c > 1");
  PsiRatioReport r;
  r.psi_rho = psi(rho);
  r.psi_c = psi(c);
  r.ratio = r.psi_rho / (2 * rho + 1);
  r.ratio_bound = below ? r.psi_c / 3 : r.psi_c / (3 * c);
  r.psi_dominates = r.psi_rho >= r.psi_c;
  r.ratio_dominates = r.ratio >= r.ratio_bound;
  return r;
}

bool valid_binary_profile(double alpha, double rho) {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(rho >= 0.0)) return false;
  const double p11 = rho * alpha * alpha;
  return p11 <= alpha && 2 * alpha - p11 <= 1.0;
}

ProfileMatrix binary_profile(double alpha, double rho) {
  if (!valid_binary_profile(alpha, rho)) throw InvalidInput("alpha", "(alpha, rho) is not a valid binary profile");
  const double p11 = rho * alpha * alpha;
  ProfileMatrix m;
  m.k = 2;
  m.P = {1 - 2 * alpha + p11, alpha - p11, alpha - p11, p11};
  m.pi = {1 - alpha, alpha};
  return m;
}

double h_upper_bound(double alpha, double rho, int d) {
  if (!valid_binary_profile(alpha, rho)) throw InvalidInput("alpha", "(alpha, rho) is not a valid binary profile");
  if (d < 1) throw InvalidInput("d", "must be positive");
  return -0.5 * d * psi(rho) * alpha * alpha + alpha + h(alpha) + (2 * rho + 1) * d / 2.0 * alpha * alpha * alpha;
}

void validate(const MaxEntropyInput& in) {
  const ProfileMatrix& m = in.profile;
  const int k = m.k;
  if (k < 2) throw InvalidInput("profile", "need at least two colours");
  if (m.P.size() != static_cast<std::size_t>(k) * k || m.pi.size() != static_cast<std::size_t>(k)) {
    throw InvalidInput("profile", "array sizes do not match k");
  }
  for (int i = 0; i < k; ++i) {
    double row = 0;
    for (int j = 0; j < k; ++j) {
      if (!(m.at(i, j) >= 0.0)) throw InvalidInput("profile", "negative entry in P");
      if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-12) throw InvalidInput("profile", "P is not symmetric");
      row += m.at(i, j);
    }
    if (std::abs(row - m.pi[i]) > 1e-12) throw InvalidInput("profile", "row marginals of P differ from pi");
  }
  std::set<std::pair<int, int>> set;
  for (auto [i, j] : in.lambda) {
    if (i < 0 || j < 0 || i >= k || j >= k) throw InvalidInput("lambda", "pair out of range");
    if (!set.insert({i, j}).second) throw InvalidInput("lambda", "duplicate pair");
  }
  for (auto [i, j] : set) {
    if (!set.count({j, i})) throw InvalidInput("lambda", "hypothesis 1 violated: Lambda is not symmetric");
    if (i == 0 || j == 0) throw InvalidInput("lambda", "hypothesis 2 violated: Lambda contains a pair with colour 0");
  }
  if (!(in.K > 0.0) || !(in.J > 0.0)) throw InvalidInput("K", "hypothesis 3 violated: K and J must be positive");
  if (in.K > 1.0 / (std::numbers::e * (k - 1))) throw InvalidInput("K", "hypothesis 3 violated: K > 1/(e q)");
  for (auto [i, j] : set) {
    if (m.at(i, j) > in.K) throw InvalidInput("K", "hypothesis 3 violated: P(i,j) > K on Lambda");
  }
  for (int i = 1; i < k; ++i) {
    if (m.pi[i] > in.J) throw InvalidInput("J", "hypothesis 3 violated: pi(i) > J for some i != 0");
  }
}

double pi2_lambda_rows(const MaxEntropyInput& in) {
  const int k = in.profile.k;
  std::vector<double> row(k, 0.0);
  for (auto [i, j] : in.lambda) row[i] += in.profile.pi[j];
  double s = 0;
  for (int i = 0; i < k; ++i) s += in.profile.pi[i] * row[i];
  return s;
}

double pi2_lambda_pairs(const MaxEntropyInput& in) {
  double s = 0;
  for (auto [i, j] : in.lambda) s += in.profile.pi[i] * in.profile.pi[j];
  return s;
}

double max_entropy_bound(const MaxEntropyInput& in, int d) {
  validate(in);
  const double q = in.profile.k - 1;
  const double dK = d * in.K;
  return entropy(in.profile.pi) - 0.5 * d * pi2_lambda_rows(in) + q * q * (dK + dK * std::log(in.J * in.J / in.K));
}

InterpolationParams interpolation_params(double c, double p) {
  if (!(c >= 0.0 && c < 1.0)) throw InvalidInput("c", "must lie in [0, 1)");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("p", "must lie in (0, 1)");
  const double s = std::sqrt(1.0 - c);
  return {p / (1.0 - p) * (1.0 / s - 1.0), p / s};
}

BoundReport bound_report(double c, double d, double eps, std::optional<double> rho) {
  BoundReport r;
  r.c = c;
  r.d = d;
  r.eps = eps;
  r.rho = rho;
  r.density_bound = corr_density_bound(c, d, eps);
  const double rr = rho.value_or(c);
  r.psi_c = psi(c);
  r.psi_rho = psi(rr);
  r.q = q_polynomial(rr, c, d);
  r.discriminant = r.q.discriminant();
  r.roots = q_roots(rr, c, d);
  const double L = std::log(d);
  r.bracket = L - std::log(L) + 1 + std::log(r.psi_c) + eps;
  r.beta_bound = r.density_bound * d / L;
  r.larger_root_lower_bound = larger_root_lower_bound(rr, d);
  return r;
}

}  // namespace fiid
