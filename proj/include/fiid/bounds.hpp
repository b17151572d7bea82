#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fiid/profile.hpp"

namespace fiid {

// Psi(c) = 1 - c + c log c, Psi(0) = 1.
double psi(double c);

// Theorem 1.2: 2/(Psi(c) d) * (log d - log log d + 1 + log Psi(c) + eps).
double corr_density_bound(double c, int d, double eps);
double corr_density_bound(double c, double d, double eps);

// q(x) = a x^2 + b x + c0 with a = (2 rho + 1) log d / (2d), b = -Psi(rho)/2,
// c0 = 1 + (1 + log Psi(c) - log log d) / log d.
struct Quadratic {
  double a = 0, b = 0, c0 = 0;
  double operator()(double x) const { return (a * x + b) * x + c0; }
  double discriminant() const { return b * b - 4 * a * c0; }
};

Quadratic q_polynomial(double rho, double c, double d);
// Sorted roots of q; empty when the discriminant is negative.
std::vector<double> q_roots(double rho, double c, double d);
// d / ((2 rho + 1) log d) * Psi(rho) / 2, the lower bound on the larger root.
double larger_root_lower_bound(double rho, double d);

struct PsiRatioReport {
  double psi_rho = 0;
  double psi_c = 0;
  double ratio = 0;         // Psi(rho) / (2 rho + 1)
  double ratio_bound = 0;   // Psi(c)/3 or Psi(c)/(3c)
  bool psi_dominates = false;
  bool ratio_dominates = false;
};
// Lemma 3.3; requires rho <= c < 1 or rho >= c > 1.
PsiRatioReport psi_ratio_bounds(double rho, double c);

// Binary edge profile with density alpha and correlation ratio rho.
ProfileMatrix binary_profile(double alpha, double rho);
bool valid_binary_profile(double alpha, double rho);
// Lemma 3.2: -(d/2) Psi(rho) alpha^2 + alpha + h(alpha) + ((2 rho + 1) d / 2) alpha^3.
double h_upper_bound(double alpha, double rho, int d);

struct MaxEntropyInput {
  ProfileMatrix profile;
  std::vector<std::pair<int, int>> lambda;  // symmetric set of colour pairs
  double K = 0;
  double J = 0;
};
// Throws InvalidInput naming the violated hypothesis of Lemma 4.1.
void validate(const MaxEntropyInput& in);
double pi2_lambda_rows(const MaxEntropyInput& in);   // sum_i pi(i) pi(Lambda_i)
double pi2_lambda_pairs(const MaxEntropyInput& in);  // sum_{(i,j) in Lambda} pi(i) pi(j)
// Lemma 4.1: H(pi) - (d/2) pi^2(Lambda) + q^2 (dK + dK log(J^2/K)).
double max_entropy_bound(const MaxEntropyInput& in, int d);

struct InterpolationParams {
  double x = 0;
  double density_factor = 0;  // p / sqrt(1 - c)
};
// Section 3.1: x = p/(1-p) (1/sqrt(1-c) - 1).
InterpolationParams interpolation_params(double c, double p);

struct BoundReport {
  double c = 0, d = 0, eps = 0;
  std::optional<double> rho;  // defaults to c when absent
  double psi_c = 0;
  double psi_rho = 0;
  Quadratic q;
  double discriminant = 0;
  std::vector<double> roots;
  double bracket = 0;  // log d - log log d + 1 + log Psi(c) + eps
  double density_bound = 0;
  double beta_bound = 0;  // density_bound * d / log d
  double larger_root_lower_bound = 0;
};
BoundReport bound_report(double c, double d, double eps, std::optional<double> rho = std::nullopt);

// ---------------------------------------------------------------------------
// Lemma 2.1 counting.

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Integer edge profile: pair_counts[i*k+j] = n d P(i,j) (directed edge counts),
// vertex_counts[i] = n pi(i).
struct IntegerProfile {
  int k = 0;
  std::vector<std::uint64_t> pair_counts;
  std::vector<std::uint64_t> vertex_counts;

  auto operator<=>(const IntegerProfile&) const = default;
  std::uint64_t pair(int i, int j) const { return pair_counts[static_cast<std::size_t>(i) * k + j]; }
  ProfileMatrix matrix(std::uint64_t n, int d) const;
};

// Symmetric, diagonal counts even, row sums d * n_i, totals n and nd.
bool valid_integer_profile(const IntegerProfile& p, std::uint64_t n, int d);
// All valid integer profiles over k colours.
std::vector<IntegerProfile> enumerate_integer_profiles(std::uint64_t n, int d, int k);

// Eq. (expectation), exactly.
Rational expected_partition_count_exact(const IntegerProfile& p, std::uint64_t n, int d);
// Exhaustive oracle: average over all (nd-1)!! pairings of the number of
// colourings with each profile. Guarded by nd <= 16 and k^n <= 2^20.
std::map<IntegerProfile, Rational> brute_force_partition_table(std::uint64_t n, int d, int k);
// log of Eq. (expectation), exact for nd <= 4096 and via lgamma beyond.
double log_expected_partition_count(const IntegerProfile& p, std::uint64_t n, int d);
// n [(d/2) H(P) - (d-1) H(pi)].
double partition_count_log_bound(const ProfileMatrix& m, std::uint64_t n, int d);

}  // namespace fiid
