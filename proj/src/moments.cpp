#include "bnm/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bnm {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_stirling_args(int v, int u) {
  if (v < 0 || u < 0 || u > v) {
    throw std::invalid_argument("stirling2: need 0 <= u <= v");
  }
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

BigInt stirling2_exact(int v, int u) {
  check_stirling_args(v, u);
  if (v > 60) {
    throw std::invalid_argument("stirling2_exact: v <= 60; use stirling2_log");
  }
  // Row-by-row triangle; row[j] = S(row_index, j).
  std::vector<BigInt> row(v + 1, 0);
  row[0] = 1;  // S(0, 0)
  for (int i = 1; i <= v; ++i) {
    for (int j = std::min(i, v); j >= 1; --j) {
      row[j] = j * row[j] + row[j - 1];
    }
    row[0] = 0;
  }
  return row[u];
}

double stirling2_log(int v, int u) {
  check_stirling_args(v, u);
  std::vector<double> row(v + 1, kNegInf);
  row[0] = 0.0;  // log S(0, 0)
  for (int i = 1; i <= v; ++i) {
    for (int j = std::min(i, v); j >= 1; --j) {
      row[j] = log_add(std::log(static_cast<double>(j)) + row[j], row[j - 1]);
    }
    row[0] = kNegInf;
  }
  return row[u];
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_falling_factorial(double n, std::int64_t count) {
  return std::lgamma(n + 1.0) - std::lgamma(n - static_cast<double>(count) + 1.0);
}

double log_sum_exp(std::span<const double> terms) {
  double mx = kNegInf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - mx);
  return mx + std::log(sum);
}

double log_first_moment_term(double n, std::int64_t k, std::int64_t u,
                             std::int64_t v) {
  if (!(0 <= u && u <= v && v <= k - 1 && static_cast<double>(k) <= n)) {
    throw std::invalid_argument("log_first_moment_term: need 0 <= u <= v <= k-1 < k <= n");
  }
  const double kd = static_cast<double>(k);
  const double t = kd / n;
  return static_cast<double>(2 * k - u) * std::log(kd - 1.0) +
         log_falling_factorial(kd, u) -
         static_cast<double>(2 * k - u + v) * std::log(n) +
         log_binomial(kd - 1.0, static_cast<double>(v)) +
         static_cast<double>(k - 1 - v) * std::log1p(-t) +
         stirling2_log(static_cast<int>(v), static_cast<int>(u));
}

double log_sk(std::int64_t k) {
  if (k < 2) throw std::invalid_argument("log_sk: k >= 2");
  const double kd = static_cast<double>(k);
  std::vector<double> terms(static_cast<std::size_t>(k));
  for (std::int64_t v = 0; v <= k - 1; ++v) {
    terms[static_cast<std::size_t>(v)] =
        log_falling_factorial(kd, v) - static_cast<double>(v) * std::log(kd - 1.0) +
        log_binomial(kd - 1.0, static_cast<double>(v));
  }
  return log_sum_exp(terms);
}

double rate_function(double z) {
  if (!(z > 0.0 && z < 1.0)) {
    throw std::domain_error("rate_function: z in (0, 1)");
  }
  return -z - 2.0 * (1.0 - z) * std::log1p(-z) - z * std::log(z);
}

double rate_maximizer() { return (3.0 - std::sqrt(5.0)) / 2.0; }

double growth_constant() {
  return 1.0 - std::exp(-1.0) + rate_function(rate_maximizer());
}

double log_e_yn_at_k(double n, std::int64_t k) {
  if (k < 2) throw std::invalid_argument("log_e_yn_at_k: k >= 2");
  const double kd = static_cast<double>(k);
  return 2.0 * kd * std::log(kd - 1.0) - std::lgamma(kd + 1.0) -
         std::lgamma(kd) - std::log(n) - kd * (1.0 + std::exp(-1.0)) +
         log_sk(k);
}

double log_e_yn(double n, double delta) {
  if (!(n >= 1000.0) || !(delta > 0.0 && delta < 0.5)) {
    throw std::invalid_argument("log_e_yn: need n >= 1e3 and delta in (0, 1/2)");
  }
  const auto k = static_cast<std::int64_t>(std::floor(std::pow(n, delta)));
  if (k < 2) throw std::invalid_argument("log_e_yn: floor(n^delta) < 2");
  return log_e_yn_at_k(n, k);
}

double log_enk_small_k(double n, double k, int m) {
  if (!(k >= 1.0) || !(k <= std::sqrt(n)) || m < 0) {
    throw std::invalid_argument("log_enk_small_k: need 1 <= k <= sqrt(n), m >= 0");
  }
  return std::log(k / n) + 2.0 * log_binomial(n, k) + 2.0 * k * std::log(k / n) -
         k * (2.0 * m + 1.0) / (m + 1.0);
}

double log_xk_bound(double n, double k, int m) {
  if (m < 1) {
    throw std::domain_error("log_xk_bound: vacuous for m = 0");
  }
  if (!(k >= 1.0) || !(k <= n / 2.0)) {
    throw std::invalid_argument("log_xk_bound: need 1 <= k <= n/2");
  }
  return -(2.0 * m / (m + 1.0)) * log_binomial(n, k);
}

MomentReport moment_report(double n, std::optional<int> m,
                           std::optional<std::int64_t> k,
                           std::optional<double> delta) {
  if (k.has_value() == delta.has_value()) {
    throw std::invalid_argument("moment_report: provide exactly one of k, delta");
  }
  MomentReport report;
  report.n = n;
  report.m = m;
  report.delta = delta;
  std::int64_t kk = k ? *k : static_cast<std::int64_t>(std::floor(std::pow(n, *delta)));
  report.k = kk;

  report.h_sigma = rate_function(rate_maximizer());
  report.lambda = growth_constant();
  if (kk >= 2) {
    report.log_sk_value = log_sk(kk);
    report.log_e_yn_value = log_e_yn_at_k(n, kk);
    report.omitted_terms.push_back(
        "log_E_Yn: main term only; (1+O(n^(-1/2+delta+eps))) factor dropped");
  }
  if (m && *m >= 0 && static_cast<double>(kk) <= std::sqrt(n)) {
    report.log_enk_bound = log_enk_small_k(n, static_cast<double>(kk), *m);
    report.omitted_terms.push_back(
        "log_Enk_bound: O(k^(m/(m+1)) + k^2/n) exponent terms dropped");
  }
  if (m && *m >= 1 && static_cast<double>(kk) <= n / 2.0) {
    report.log_xk_bound_value = log_xk_bound(n, static_cast<double>(kk), *m);
  }
  return report;
}

}  // namespace bnm
