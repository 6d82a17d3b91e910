#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bnm/certificate.hpp"

// Penalty-constrained Nelder-Mead minimization of the certificate over
// (x, y, z, u) and warm-start continuation over the t = k/n grid.

namespace bnm {

using Vec4 = std::array<double, 4>;
using ScalarFn = std::function<double(const Vec4&)>;
using GradientFn = std::function<Vec4(const Vec4&)>;

struct SimplexConfig {
  double func_tol = 1e-8;   // simplex value-spread tolerance
  double opt_tol = 1e-8;    // simplex diameter tolerance
  long max_iters = 100000;  // total across restarts
  double penalty_p = 1e4;   // weight of the quadratic feasibility penalty
  int restart_count = 1;    // fresh simplexes seeded around the incumbent
};

struct MinimizeResult {
  Vec4 point{};
  double value = 0.0;
  bool converged = false;
  long iterations = 0;
};

// Nelder-Mead with standard coefficients (reflection 1, expansion 2,
// contractions 0.5, shrink 0.5).  Converged when both the simplex value
// spread and the simplex diameter fall below the tolerances; on iteration
// exhaustion returns converged = false with the best point seen.  The
// result value never exceeds objective(start).
MinimizeResult minimize(const ScalarFn& objective, const Vec4& start,
                        const SimplexConfig& config = {});

// Same; the gradient is accepted for signature parity with gradient-based
// methods and ignored by the simplex search.
MinimizeResult minimize(const ScalarFn& objective, const GradientFn& gradient,
                        const Vec4& start, const SimplexConfig& config = {});

// Quadratic one-sided penalty keeping iterates essentially feasible:
// P * (sum of negative coordinates)^2.
double feasibility_penalty(const Vec4& v, double penalty_p);

// certificate_value clamped to a large finite value outside its domain,
// plus the feasibility penalty: the total objective handed to the simplex.
ScalarFn penalized_certificate(const CertParams& params, double penalty_p);

// Continuation start point at the first grid t (scaled-ray shape with
// exponent 1/3; the m = 0 ray uses the asymmetric optimal constants).
CertVars sweep_initial_vars(int m, double t);

struct SweepPoint {
  double t = 0.0;
  CertVars vars;
  double rho = 0.0;
  double h_min = 0.0;
  bool converged = false;
};

struct SweepTrajectory {
  std::uint64_t n = 0;
  int m = 0;
  std::vector<SweepPoint> points;
};

// Minimizes the certificate at t = k/n for k = k_from, k_from + stride, ...
// and always at k_to, warm-starting each point from the previous solution.
// Preconditions: 1 <= k_from <= k_to <= ceil(n/2), stride >= 1.
SweepTrajectory sweep(std::uint64_t n, int m, std::uint64_t k_from,
                      std::uint64_t k_to, std::uint64_t stride = 1,
                      const SimplexConfig& config = {});

// Convenience overload taking t bounds; k = round(t * n).
SweepTrajectory sweep_t(std::uint64_t n, int m, double t_from, double t_to,
                        std::uint64_t stride = 1,
                        const SimplexConfig& config = {});

// Smallest grid t where the minimized certificate switches from negative to
// nonnegative between consecutive points.
std::optional<double> zero_crossing(const SweepTrajectory& traj);

// Ordinary least-squares slope of h_min against t over the first `count`
// trajectory points.
double slope_fit(const SweepTrajectory& traj, std::size_t count = 100);

}  // namespace bnm
