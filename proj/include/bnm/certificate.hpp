#pragma once

#include <array>
#include <cstdint>

#include "bnm/model.hpp"

// Closed-form analytic machinery: the scaled-log certificate H_{n,m}(t; r)
// whose negativity over t in (0, 1/2] bounds the expected number of minimal
// deficient pairs, its small-t decay rates gamma_m, the resulting failure
// exponent c_m, the explicit small-k envelope, and the component-count
// exponent for the m = 0 model.

namespace bnm {

// Optimization variables r = (x, y, z, u).  The certificate has log
// singularities at x, y, z = 0 and u = 0, so feasibility is the open region
// x, y, z > 0, u in (0, 1]; the value diverges to +inf as u -> 1 (rho -> 0).
struct CertVars {
  double x = 0;
  double y = 0;
  double z = 0;
  double u = 0;
};

struct CertParams {
  std::uint64_t n = 0;  // side size; the -log(u)/n term uses this exactly
  int m = 0;            // finite unpopularity threshold
  double t = 0;         // k/n, relative size of the deficient set
};

// t * e^(t-1): the chance that one extra uniform selection lands in a tagged
// block of relative size t, times the Poisson-tail normalizer.
double hit_rate(double t);

// Partial sums of the exponential series.
// head(w, k) = sum_{j<=k} w^j/j!   (zero for k < 0)
// tail(w, k) = sum_{j>=k} w^j/j! = e^w - head(w, k-1), computed by direct
// series summation when the subtraction would cancel more than one decimal
// digit (small w, larger k).
double exp_series_head(double w, int k);
double exp_series_tail(double w, int k);

// The ratio g_m(t; y, z) of the two generating-function factors; > 0 on the
// feasible region.  Throws std::domain_error if the denominator is not
// positive (cannot happen for feasible inputs).
double generating_ratio(int m, double t, double y, double z);

// rho recovered from u: (1-t)(1-u)x / g_m(t; y, z).  Zero iff u = 1.
double rho_value(int m, double t, const CertVars& vars);

// The certificate H_{n,m}(t; x, y, z, u), evaluated term by term.  Finite
// for feasible vars with u in (0, 1); +inf at u = 1.  Throws
// std::domain_error when x, y, z <= 0 or u <= 0 (or u > 1).
double certificate_value(const CertParams& params, const CertVars& vars);

// n = infinity variant: the -log(u)/n term is dropped.  Used for asymptotic
// small-t slope checks.
double certificate_value_limit(int m, double t, const CertVars& vars);

// Analytic gradient of certificate_value in (x, y, z, u).
std::array<double, 4> certificate_gradient(const CertParams& params,
                                           const CertVars& vars);

// Small-t decay rate gamma_m(b1, b2, c) of the certificate along the scaled
// ray (x, y, z) ~ t^sigma, rho = c t; maximized by decay_rate(m).
double decay_rate_general(int m, double b1, double b2, double c);

// Closed-form maximum: 1 + 1/e - log(sqrt(3)+2) for m = 0;
// 1 + e^{-1} sum_{j<=m} 1/j! - log 2 for m > 0; 2 - log 2 for m = inf.
double decay_rate(Threshold m);

// Failure-probability exponent c_m = 1 - 1.5/(1 + (m+1) gamma_m); requires
// m >= 1 (throws std::domain_error for m = 0); equals 1 for m = inf.
double failure_exponent(Threshold m);

// Location k_n of the maximum of the explicit small-k envelope.
double envelope_peak_k(int m, double n);

// Explicit envelope min{ -log n + k/(m+1), 0.5 log n - gamma_m k } for the
// log expected count of deficient pairs of size k <= sqrt(n); error terms
// omitted.
double bad_pair_envelope(double n, double k, int m);

// Exponent bounding the expected number of two-sided components of relative
// sizes (x, y) in the m = 0 model; domain 0 < y <= x, x + y <= 1.
double component_exponent(double x, double y);

// sup over relative shapes of the linear coefficient of component_exponent
// as the component size tends to zero; known to be <= -0.648.  Dense-grid
// scan with one Newton refinement.
double component_slope_bound();

}  // namespace bnm
