#include "bnm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bnm {
namespace {

constexpr double kInfeasibleValue = 1e12;

struct Vertex {
  Vec4 x;
  double f;
};

Vec4 initial_offsets(const Vec4& start) {
  Vec4 d;
  for (int i = 0; i < 4; ++i) {
    d[i] = std::max(0.05 * std::abs(start[i]), 1e-3);
  }
  return d;
}

// One Nelder-Mead run from a fresh simplex around `start`.  `iters` counts
// against config.max_iters across runs.
MinimizeResult run_simplex(const ScalarFn& objective, const Vec4& start,
                           const SimplexConfig& config, long& iters) {
  const Vec4 offsets = initial_offsets(start);
  std::array<Vertex, 5> simplex;
  simplex[0] = {start, objective(start)};
  for (int i = 0; i < 4; ++i) {
    Vec4 v = start;
    v[i] += offsets[i];
    simplex[i + 1] = {v, objective(v)};
  }

  auto order = [&simplex] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  MinimizeResult result;
  bool converged = false;
  while (iters < config.max_iters) {
    ++iters;
    order();
    const double spread = simplex[4].f - simplex[0].f;
    double diameter = 0.0;
    for (int i = 1; i < 5; ++i) {
      for (int c = 0; c < 4; ++c) {
        diameter = std::max(diameter, std::abs(simplex[i].x[c] - simplex[0].x[c]));
      }
    }
    if (spread <= config.func_tol && diameter <= config.opt_tol) {
      converged = true;
      break;
    }

    Vec4 centroid{};  // of the four best vertices
    for (int i = 0; i < 4; ++i) {
      for (int c = 0; c < 4; ++c) centroid[c] += simplex[i].x[c] / 4.0;
    }
    const Vec4& worst = simplex[4].x;
    auto along = [&](double coef) {
      Vec4 p;
      for (int c = 0; c < 4; ++c) p[c] = centroid[c] + coef * (centroid[c] - worst[c]);
      return p;
    };

    const Vec4 xr = along(1.0);
    const double fr = objective(xr);
    if (fr < simplex[0].f) {
      const Vec4 xe = along(2.0);
      const double fe = objective(xe);
      simplex[4] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
      continue;
    }
    if (fr < simplex[3].f) {
      simplex[4] = {xr, fr};
      continue;
    }
    if (fr < simplex[4].f) {
      const Vec4 xc = along(0.5);  // outside contraction
      const double fc = objective(xc);
      if (fc <= fr) {
        simplex[4] = {xc, fc};
        continue;
      }
    } else {
      const Vec4 xc = along(-0.5);  // inside contraction
      const double fc = objective(xc);
      if (fc < simplex[4].f) {
        simplex[4] = {xc, fc};
        continue;
      }
    }
    // Shrink toward the best vertex.
    for (int i = 1; i < 5; ++i) {
      for (int c = 0; c < 4; ++c) {
        simplex[i].x[c] = simplex[0].x[c] + 0.5 * (simplex[i].x[c] - simplex[0].x[c]);
      }
      simplex[i].f = objective(simplex[i].x);
    }
  }
  order();
  result.point = simplex[0].x;
  result.value = simplex[0].f;
  result.converged = converged;
  return result;
}

}  // namespace

MinimizeResult minimize(const ScalarFn& objective, const Vec4& start,
                        const SimplexConfig& config) {
  long iters = 0;
  MinimizeResult best = run_simplex(objective, start, config, iters);
  bool all_converged = best.converged;
  for (int r = 0; r < config.restart_count; ++r) {
    const MinimizeResult next = run_simplex(objective, best.point, config, iters);
    all_converged = all_converged && next.converged;
    if (next.value <= best.value) best = next;
  }
  best.converged = all_converged;
  best.iterations = iters;
  return best;
}

MinimizeResult minimize(const ScalarFn& objective, const GradientFn&,
                        const Vec4& start, const SimplexConfig& config) {
  return minimize(objective, start, config);
}

double feasibility_penalty(const Vec4& v, double penalty_p) {
  double s = 0.0;
  for (double c : v) {
    if (c < 0.0) s += c;  // Heaviside h(-c) * c
  }
  return penalty_p * s * s;
}

ScalarFn penalized_certificate(const CertParams& params, double penalty_p) {
  return [params, penalty_p](const Vec4& v) {
    double core = kInfeasibleValue;
    if (v[0] > 0.0 && v[1] > 0.0 && v[2] > 0.0 && v[3] > 0.0 && v[3] < 1.0) {
      const double h = certificate_value(params, {v[0], v[1], v[2], v[3]});
      if (std::isfinite(h)) core = h;
    }
    return core + feasibility_penalty(v, penalty_p);
  };
}

CertVars sweep_initial_vars(int m, double t) {
  const double scale = std::cbrt(t);
  CertVars vars;
  double rho;
  if (m == 0) {
    vars.x = scale;
    vars.y = std::sqrt(3.0) * scale;
    vars.z = scale;
    rho = t / std::sqrt(3.0);
  } else {
    vars.x = vars.y = vars.z = scale;
    rho = t;
  }
  vars.u = 1.0 - generating_ratio(m, t, vars.y, vars.z) * rho / ((1.0 - t) * vars.x);
  return vars;
}

SweepTrajectory sweep(std::uint64_t n, int m, std::uint64_t k_from,
                      std::uint64_t k_to, std::uint64_t stride,
                      const SimplexConfig& config) {
  const std::uint64_t k_max = (n + 1) / 2;
  if (k_from < 1 || k_from > k_to || k_to > k_max || stride < 1) {
    throw std::invalid_argument("sweep: need 1 <= k_from <= k_to <= ceil(n/2), stride >= 1");
  }
  SweepTrajectory traj;
  traj.n = n;
  traj.m = m;
  CertVars warm = sweep_initial_vars(m, static_cast<double>(k_from) / static_cast<double>(n));
  for (std::uint64_t k = k_from;;) {
    const double t = static_cast<double>(k) / static_cast<double>(n);
    const CertParams params{n, m, t};
    const MinimizeResult res = minimize(penalized_certificate(params, config.penalty_p),
                                        {warm.x, warm.y, warm.z, warm.u}, config);
    warm = {res.point[0], res.point[1], res.point[2], res.point[3]};
    traj.points.push_back({t, warm, rho_value(m, t, warm), res.value, res.converged});
    if (k == k_to) break;
    k = std::min(k + stride, k_to);
  }
  return traj;
}

SweepTrajectory sweep_t(std::uint64_t n, int m, double t_from, double t_to,
                        std::uint64_t stride, const SimplexConfig& config) {
  const auto k_from = static_cast<std::uint64_t>(std::llround(t_from * static_cast<double>(n)));
  const auto k_to = static_cast<std::uint64_t>(std::llround(t_to * static_cast<double>(n)));
  return sweep(n, m, k_from, k_to, stride, config);
}

std::optional<double> zero_crossing(const SweepTrajectory& traj) {
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    if (traj.points[i - 1].h_min < 0.0 && traj.points[i].h_min >= 0.0) {
      return traj.points[i].t;
    }
  }
  return std::nullopt;
}

double slope_fit(const SweepTrajectory& traj, std::size_t count) {
  if (traj.points.size() < count || count < 2) {
    throw std::invalid_argument("slope_fit: trajectory shorter than the fit window");
  }
  double mean_t = 0.0, mean_h = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    mean_t += traj.points[i].t;
    mean_h += traj.points[i].h_min;
  }
  mean_t /= static_cast<double>(count);
  mean_h /= static_cast<double>(count);
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dt = traj.points[i].t - mean_t;
    cov += dt * (traj.points[i].h_min - mean_h);
    var += dt * dt;
  }
  return cov / var;
}

}  // namespace bnm
