#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// Log-space evaluation of the explicit moment formulas: the small-k
// deficient-pair bound, the exact first-moment machinery behind the m = 0
// non-matching result (Stirling numbers, the falling-factorial sum S_k, its
// rate function, the growth constant lambda), and the connectivity bound.
// Every value that drops a paper-style error term is flagged as main-term
// only in the corresponding report.

namespace bnm {

using BigInt = boost::multiprecision::cpp_int;

// Stirling numbers of the second kind via the triangle recurrence
// S(v, u) = u S(v-1, u) + S(v-1, u-1).  Exact path for v <= 60.
BigInt stirling2_exact(int v, int u);
// log S(v, u) by the same recurrence in log space (any v); -inf when
// S(v, u) = 0.
double stirling2_log(int v, int u);

// log of the (u, v) slice of the expected count of deficient pairs of size
// k in the m = 0 model: rows of the tagged block keep all selections inside
// the deficient neighborhood, v tagged columns select into the block
// covering exactly u rows.  Requires 0 <= u <= v <= k-1 < k <= n.
double log_first_moment_term(double n, std::int64_t k, std::int64_t u,
                             std::int64_t v);

// log S_k, S_k = sum_{v<=k-1} (k)_v / (k-1)^v * C(k-1, v), by stable
// log-space summation.  Requires k >= 2.
double log_sk(std::int64_t k);

// Exponential rate function of the S_k terms:
// -z - 2(1-z) log(1-z) - z log z on (0, 1); maximized at (3 - sqrt 5)/2.
double rate_function(double z);

// Maximizer sigma and the growth constant lambda = 1 - 1/e + rate(sigma).
double rate_maximizer();
double growth_constant();

// log of the explicit main term of the expected number of deficient pairs
// of size k: (k-1)^{2k} / (k! (k-1)! n) * e^{-k(1+1/e)} * S_k.
double log_e_yn_at_k(double n, std::int64_t k);
// Same with k = floor(n^delta); requires the resulting k >= 2.
double log_e_yn(double n, double delta);

// log of the explicit small-k product bound for the expected number of
// minimal deficient pairs: log(k/n) + 2 log C(n,k) + 2k log(k/n)
// - k(2m+1)/(m+1); error terms omitted.
double log_enk_small_k(double n, double k, int m);

// Connectivity bound -(2m/(m+1)) log C(n,k) on the log expected number of
// balanced separating pairs; vacuous (throws) for m = 0.
double log_xk_bound(double n, double k, int m);

// Stable helpers shared by the log-space sums.
double log_binomial(double n, double k);
double log_falling_factorial(double n, std::int64_t count);
double log_sum_exp(std::span<const double> terms);

// Named log-space values with flags for each omitted error term.
struct MomentReport {
  double n = 0;
  std::optional<int> m;
  std::optional<std::int64_t> k;
  std::optional<double> delta;
  std::optional<double> log_enk_bound;
  std::optional<double> log_sk_value;
  std::optional<double> log_e_yn_value;
  std::optional<double> h_sigma;
  std::optional<double> lambda;
  std::optional<double> log_xk_bound_value;
  std::vector<std::string> omitted_terms;
};

// Fills every value computable from the given inputs; exactly one of k and
// delta must be provided.
MomentReport moment_report(double n, std::optional<int> m,
                           std::optional<std::int64_t> k,
                           std::optional<double> delta);

}  // namespace bnm
