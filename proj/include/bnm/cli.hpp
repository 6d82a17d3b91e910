#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bnm/matching.hpp"
#include "bnm/model.hpp"
#include "bnm/moments.hpp"
#include "bnm/optimizer.hpp"

// Command implementations behind the bnm executable.  Each command validates
// its inputs (std::invalid_argument on violation; the driver maps that to
// exit code 2), writes '#'-headed CSV files under `out_dir`, and returns 0
// on full success or 1 when some computation failed to converge.  Outputs
// are deterministic: identical configs produce byte-identical files.

namespace bnm {

struct RunConfig {
  std::uint64_t n = 1000;
  Threshold m = Threshold::finite(1);
  std::uint64_t seed = 1;
  std::uint64_t trials = 100;
  std::optional<double> t_from;  // default 1/n
  std::optional<double> t_to;    // default 1/2
  std::uint64_t stride = 1;
  std::optional<double> delta;
  std::optional<std::int64_t> k;
  std::filesystem::path out_dir = ".";
  SimplexConfig simplex;
  bool svg = false;
  std::string analytic_m = "all";  // "all", "inf", or a number
};

// One row per trial plus a trailing summary row; see the column comment in
// the file header.
int cmd_simulate(const RunConfig& config, std::ostream& log);

// sweep.csv (t,x,y,z,u,rho,H_min,converged), sweep_plot.csv (t,H_min),
// sweep_summary.csv (key,value), optionally sweep.svg.
int cmd_sweep(const RunConfig& config, std::ostream& log);

// Analytic table (decay rates, failure exponents, expected out-degrees,
// envelope peaks, the first-moment constants) to `log`; also analytic.csv
// when out_dir is set explicitly.
int cmd_analytic(const RunConfig& config, std::ostream& log);

// MomentReport as name,value CSV with omitted-term flags.
int cmd_moments(const RunConfig& config, std::ostream& log);

// Serialization shared with the tests.
std::string format_double(double value);  // 17 significant digits
void write_sweep_files(const SweepTrajectory& traj, const RunConfig& config);
SweepTrajectory read_sweep_csv(const std::filesystem::path& file);
void write_svg_line_chart(const std::filesystem::path& file,
                          const std::vector<std::pair<double, double>>& points,
                          const std::string& title);

struct TrialOutcome {
  std::uint64_t derived_seed = 0;
  std::uint32_t matching_size = 0;
  bool has_pm = false;
  std::uint32_t witness_k_size = 0;  // meaningful only when !has_pm
  std::uint32_t n_components = 0;
  std::uint32_t largest_component = 0;
};

// Independent per-trial seeds; trials run on a worker pool, results are
// ordered by trial index.
std::vector<TrialOutcome> run_trials(std::uint64_t n, Threshold m,
                                     std::uint64_t trials, std::uint64_t seed);

}  // namespace bnm
