#include "bnm/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace bnm {
namespace {

constexpr double kE = 2.718281828459045235;

void check_vars(const CertVars& v) {
  if (!(v.x > 0.0) || !(v.y > 0.0) || !(v.z > 0.0)) {
    throw std::domain_error("certificate: x, y, z must be > 0");
  }
  if (!(v.u > 0.0) || v.u > 1.0) {
    throw std::domain_error("certificate: u must be in (0, 1]");
  }
}

// Shared sub-expressions of the certificate and its gradient at one point.
struct Pieces {
  double f;        // hit_rate(t)
  double qa;       // head(1-t, m)
  double qb;       // head(1-t, m-1)
  double tail1;    // tail(y+z, 1)
  double tail2;    // tail(y+z, 2)
  double num;      // tail1 + qa*f
  double den;      // tail2 + (y*qb + z*qa)*f
  double g;        // num/den
  double rho;      // (1-t)(1-u)x/g
  double qx;       // head(x, m)
  double qx1;      // head(x, m-1)
  double tx;       // tail(x, m+1)
  double tx1;      // tail(x, m)
  double pw;       // (1-u)^(m+1)
};

Pieces make_pieces(int m, double t, const CertVars& v) {
  Pieces p;
  p.f = hit_rate(t);
  p.qa = exp_series_head(1.0 - t, m);
  p.qb = exp_series_head(1.0 - t, m - 1);
  const double eta = v.y + v.z;
  p.tail1 = exp_series_tail(eta, 1);
  p.tail2 = exp_series_tail(eta, 2);
  p.num = p.tail1 + p.qa * p.f;
  p.den = p.tail2 + (v.y * p.qb + v.z * p.qa) * p.f;
  if (!(p.den > 0.0)) {
    throw std::domain_error("certificate: nonpositive denominator");
  }
  p.g = p.num / p.den;
  p.rho = (1.0 - t) * (1.0 - v.u) * v.x / p.g;
  p.qx = exp_series_head(v.x, m);
  p.qx1 = exp_series_head(v.x, m - 1);
  p.tx = exp_series_tail(v.x, m + 1);
  p.tx1 = exp_series_tail(v.x, m);
  p.pw = std::pow(1.0 - v.u, m + 1);
  return p;
}

// All terms except -log(u)/n.  The constant-in-r part uses log1p so that the
// t ~ 1e-12 regime keeps full relative accuracy.
double value_without_size_term(int m, double t, const CertVars& v,
                               const Pieces& p) {
  double h = -2.0 * t +
             (1.0 - t) * (std::log1p(-p.qa * p.f) - std::log1p(-t)) +
             t * std::log1p(-t);
  h += t * std::log(p.den / (v.y * v.z));
  h += t * std::log(t * p.qx / (kE * p.rho)) + p.rho;
  h += v.z * (p.tx / p.qx) * p.pw;
  return h;
}

}  // namespace

double hit_rate(double t) { return t * std::exp(t - 1.0); }

double exp_series_head(double w, int k) {
  if (k < 0) return 0.0;
  double sum = 1.0, term = 1.0;
  for (int j = 1; j <= k; ++j) {
    term *= w / j;
    sum += term;
  }
  return sum;
}

double exp_series_tail(double w, int k) {
  if (k <= 0) return std::exp(w);
  const double ew = std::exp(w);
  const double head = exp_series_head(w, k - 1);
  if (std::abs(ew - head) >= 0.1 * std::abs(ew)) return ew - head;
  // Cancellation past one decimal digit: sum the series from j = k directly.
  double term = 1.0;
  for (int j = 1; j <= k; ++j) term *= w / j;
  double sum = term;
  for (int j = k + 1; j <= k + 600; ++j) {
    term *= w / j;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double generating_ratio(int m, double t, double y, double z) {
  const double f = hit_rate(t);
  const double num = exp_series_tail(y + z, 1) + exp_series_head(1.0 - t, m) * f;
  const double den =
      exp_series_tail(y + z, 2) +
      (y * exp_series_head(1.0 - t, m - 1) + z * exp_series_head(1.0 - t, m)) * f;
  if (!(den > 0.0)) {
    throw std::domain_error("certificate: nonpositive denominator");
  }
  return num / den;
}

double rho_value(int m, double t, const CertVars& vars) {
  return (1.0 - t) * (1.0 - vars.u) * vars.x / generating_ratio(m, t, vars.y, vars.z);
}

double certificate_value(const CertParams& params, const CertVars& vars) {
  check_vars(vars);
  const Pieces p = make_pieces(params.m, params.t, vars);
  return value_without_size_term(params.m, params.t, vars, p) -
         std::log(vars.u) / static_cast<double>(params.n);
}

double certificate_value_limit(int m, double t, const CertVars& vars) {
  check_vars(vars);
  const Pieces p = make_pieces(m, t, vars);
  return value_without_size_term(m, t, vars, p);
}

std::array<double, 4> certificate_gradient(const CertParams& params,
                                           const CertVars& vars) {
  check_vars(vars);
  const int m = params.m;
  const double t = params.t;
  const CertVars& v = vars;
  const Pieces p = make_pieces(m, t, v);

  // d(tail2)/d(eta) = tail1, d(tail1)/d(eta) = e^eta.
  const double e_eta = exp_series_tail(v.y + v.z, 0);
  const double den_y = p.tail1 + p.qb * p.f;
  const double den_z = p.tail1 + p.qa * p.f;  // equals p.num
  const double g_y = (e_eta * p.den - p.num * den_y) / (p.den * p.den);
  const double g_z = (e_eta * p.den - p.num * den_z) / (p.den * p.den);

  // rho = (1-t)(1-u)x/g:  d(rho)/dx = rho/x, d(rho)/du = -rho/(1-u),
  // d(rho)/dy = -rho g_y/g.  The t*log(1/rho) term turns these into the
  // g'/g contributions below.
  const double tq_ratio = p.tx1 * p.qx - p.tx * p.qx1;  // d(tx/qx)/dx * qx^2

  const double dx = t * (p.qx1 / p.qx - 1.0 / v.x) + p.rho / v.x +
                    v.z * p.pw * tq_ratio / (p.qx * p.qx);
  const double dy =
      t * (den_y / p.den - 1.0 / v.y + g_y / p.g) - p.rho * g_y / p.g;
  const double dz = t * (den_z / p.den - 1.0 / v.z + g_z / p.g) -
                    p.rho * g_z / p.g + (p.tx / p.qx) * p.pw;
  const double du = (t - p.rho) / (1.0 - v.u) -
                    (m + 1) * v.z * (p.tx / p.qx) * std::pow(1.0 - v.u, m) -
                    1.0 / (static_cast<double>(params.n) * v.u);
  return {dx, dy, dz, du};
}

double decay_rate_general(int m, double b1, double b2, double c) {
  const double poisson_tail = std::exp(-1.0) * exp_series_head(1.0, m);
  double rate = 1.0 + poisson_tail -
                std::log((b1 + b2) * (b1 + b2) / (2.0 * b1 * b2)) -
                (std::log(1.0 / (kE * c)) + c);
  if (m == 0) rate -= 2.0 * b2 * c / (b1 + b2);
  return rate;
}

double decay_rate(Threshold m) {
  if (m.is_infinite()) return 2.0 - std::log(2.0);
  if (m.value() == 0) {
    return 1.0 + std::exp(-1.0) - std::log(std::sqrt(3.0) + 2.0);
  }
  const double head = exp_series_head(1.0, static_cast<int>(std::min<std::uint64_t>(m.value(), 170)));
  return 1.0 + std::exp(-1.0) * head - std::log(2.0);
}

double failure_exponent(Threshold m) {
  if (m.is_infinite()) return 1.0;
  if (m.value() == 0) {
    throw std::domain_error("failure_exponent: defined for m >= 1 only");
  }
  const double md = static_cast<double>(m.value());
  return 1.0 - 1.5 / (1.0 + (md + 1.0) * decay_rate(m));
}

double envelope_peak_k(int m, double n) {
  const double md = static_cast<double>(m);
  const double gamma = decay_rate(Threshold::finite(static_cast<std::uint64_t>(m)));
  // gamma_m = 1 + e^{-1} q_m(1) - log 2 for m >= 1, so the denominator is
  // (m+1) gamma_m + 1.
  return 1.5 * (md + 1.0) * std::log(n) / ((md + 1.0) * gamma + 1.0);
}

double bad_pair_envelope(double n, double k, int m) {
  const double gamma = decay_rate(Threshold::finite(static_cast<std::uint64_t>(m)));
  const double small = -std::log(n) + k / (m + 1.0);
  const double large = 0.5 * std::log(n) - gamma * k;
  return std::min(small, large);
}

double component_exponent(double x, double y) {
  if (!(y > 0.0) || !(y <= x) || !(x + y <= 1.0)) {
    throw std::domain_error("component_exponent: need 0 < y <= x, x + y <= 1");
  }
  const double lx = std::log(x), ly = std::log(y);
  const double l1x = std::log1p(-x), l1y = std::log1p(-y);
  return -x * lx - (1.0 - x) * l1x - y * ly - (1.0 - y) * l1y + y * lx +
         (1.0 - x) * l1y + (2.0 * x - y) * ly + (1.0 + x - 2.0 * y) * l1x +
         y * std::log1p(-std::exp(-x / y) * (1.0 - x)) +
         (1.0 - x) * std::log1p(-std::exp(-(1.0 - y) / (1.0 - x)) * y);
}

namespace {

// Linear coefficient of component_exponent along y = z x as x -> 0.
double slope_at(double z) {
  return 2.0 * (1.0 - z) * std::log(z) +
         z * (std::log1p(-std::exp(-1.0 / z)) - std::exp(-1.0));
}

}  // namespace

double component_slope_bound() {
  // 1e5-point grid over (0, 1]; the z -> 0 limit is -inf, so the grid start
  // is safe.
  constexpr int kPoints = 100000;
  double best_z = 1.0, best = slope_at(1.0);
  for (int i = 1; i < kPoints; ++i) {
    const double z = static_cast<double>(i) / kPoints;
    const double s = slope_at(z);
    if (s > best) {
      best = s;
      best_z = z;
    }
  }
  // One Newton step on the derivative, via central differences.
  const double h = 1e-6;
  const double d1 = (slope_at(best_z + h) - slope_at(best_z - h)) / (2.0 * h);
  const double d2 = (slope_at(best_z + h) - 2.0 * slope_at(best_z) +
                     slope_at(best_z - h)) / (h * h);
  if (d2 < 0.0) {
    const double refined = best_z - d1 / d2;
    if (refined > 0.0 && refined <= 1.0) best = std::max(best, slope_at(refined));
  }
  return best;
}

}  // namespace bnm
