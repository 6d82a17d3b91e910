#include "bnm/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bnm/prng.hpp"
#include "bnm/version.hpp"

namespace bnm {
namespace {

namespace fs = std::filesystem;

// Removes the file unless commit() was reached, so failed runs leave no
// partial output behind.
class FileGuard {
 public:
  explicit FileGuard(fs::path path) : path_(std::move(path)), out_(path_) {
    if (!out_) throw std::runtime_error("cannot open " + path_.string());
  }
  ~FileGuard() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  std::ofstream& stream() { return out_; }
  void commit() {
    out_.close();
    committed_ = true;
  }

 private:
  fs::path path_;
  std::ofstream out_;
  bool committed_ = false;
};

std::string threshold_str(Threshold m) {
  return m.is_infinite() ? "inf" : std::to_string(m.value());
}

void write_version_line(std::ostream& out) {
  out << "# bnm " << kVersion << "\n";
}

int require_finite_m(Threshold m, const char* command) {
  if (m.is_infinite()) {
    throw std::invalid_argument(std::string(command) + ": m must be finite");
  }
  return static_cast<int>(m.value());
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::vector<TrialOutcome> run_trials(std::uint64_t n, Threshold m,
                                     std::uint64_t trials, std::uint64_t seed) {
  std::vector<TrialOutcome> results(trials);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= trials || failed.load()) break;
      try {
        TrialOutcome& r = results[i];
        r.derived_seed = derive_trial_seed(seed, i);
        const BipartiteDigraph g = generate({n, m, r.derived_seed});
        const MatchingResult match = max_matching(g);
        r.matching_size = match.size;
        r.has_pm = match.size == g.n;
        if (!r.has_pm) {
          const auto witness = hall_witness(g, match);
          r.witness_k_size = static_cast<std::uint32_t>(witness->deficient_set.size());
        }
        const auto comps = components(g);
        r.n_components = static_cast<std::uint32_t>(comps.size());
        r.largest_component = comps.empty() ? 0 : comps.front().size;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
        break;
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto nthreads = static_cast<unsigned>(
      std::min<std::uint64_t>(hw, std::max<std::uint64_t>(trials, 1)));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  if (config.trials < 1) throw std::invalid_argument("simulate: trials >= 1");
  if (config.n < 1) throw std::invalid_argument("simulate: n >= 1");
  fs::create_directories(config.out_dir);

  const auto results = run_trials(config.n, config.m, config.trials, config.seed);

  FileGuard file(config.out_dir / "simulate.csv");
  std::ofstream& out = file.stream();
  write_version_line(out);
  out << "# command=simulate n=" << config.n << " m=" << threshold_str(config.m)
      << " seed=" << config.seed << " trials=" << config.trials << "\n";
  out << "# columns: trial,derived_seed,matching_size,has_pm,witness_K_size,"
         "n_components,largest_component_size\n";
  std::uint64_t pm_count = 0;
  double ratio_sum = 0.0;
  for (std::uint64_t i = 0; i < config.trials; ++i) {
    const TrialOutcome& r = results[i];
    out << i << ',' << r.derived_seed << ',' << r.matching_size << ','
        << (r.has_pm ? 1 : 0) << ',';
    if (!r.has_pm) out << r.witness_k_size;
    out << ',' << r.n_components << ',' << r.largest_component << "\n";
    pm_count += r.has_pm ? 1 : 0;
    ratio_sum += static_cast<double>(r.matching_size) / static_cast<double>(config.n);
  }
  const double pm_fraction =
      static_cast<double>(pm_count) / static_cast<double>(config.trials);
  const double mean_ratio = ratio_sum / static_cast<double>(config.trials);
  out << "summary,pm_fraction," << format_double(pm_fraction)
      << ",mean_matching_ratio," << format_double(mean_ratio) << "\n";
  file.commit();

  log << "simulate: n=" << config.n << " m=" << threshold_str(config.m)
      << " trials=" << config.trials << " pm_fraction=" << pm_fraction
      << " mean_matching_ratio=" << mean_ratio << "\n";
  return 0;
}

void write_sweep_files(const SweepTrajectory& traj, const RunConfig& config) {
  fs::create_directories(config.out_dir);
  const auto k_from =
      static_cast<std::uint64_t>(std::llround(traj.points.front().t * static_cast<double>(traj.n)));
  const auto k_to =
      static_cast<std::uint64_t>(std::llround(traj.points.back().t * static_cast<double>(traj.n)));

  std::ostringstream header;
  write_version_line(header);
  header << "# command=sweep n=" << traj.n << " m=" << traj.m
         << " k_from=" << k_from << " k_to=" << k_to
         << " stride=" << config.stride
         << " func_tol=" << format_double(config.simplex.func_tol)
         << " opt_tol=" << format_double(config.simplex.opt_tol)
         << " max_iters=" << config.simplex.max_iters
         << " penalty_P=" << format_double(config.simplex.penalty_p)
         << " restarts=" << config.simplex.restart_count << "\n";

  {
    FileGuard file(config.out_dir / "sweep.csv");
    std::ofstream& out = file.stream();
    out << header.str();
    out << "# columns: t,x,y,z,u,rho,H_min,converged\n";
    for (const SweepPoint& p : traj.points) {
      out << format_double(p.t) << ',' << format_double(p.vars.x) << ','
          << format_double(p.vars.y) << ',' << format_double(p.vars.z) << ','
          << format_double(p.vars.u) << ',' << format_double(p.rho) << ','
          << format_double(p.h_min) << ',' << (p.converged ? 1 : 0) << "\n";
    }
    file.commit();
  }
  {
    FileGuard file(config.out_dir / "sweep_plot.csv");
    std::ofstream& out = file.stream();
    out << header.str();
    out << "# columns: t,H_min\n";
    for (const SweepPoint& p : traj.points) {
      out << format_double(p.t) << ',' << format_double(p.h_min) << "\n";
    }
    file.commit();
  }
  {
    const auto min_it = std::min_element(
        traj.points.begin(), traj.points.end(),
        [](const SweepPoint& a, const SweepPoint& b) { return a.h_min < b.h_min; });
    const auto crossing = zero_crossing(traj);
    bool all_converged = true;
    for (const SweepPoint& p : traj.points) all_converged = all_converged && p.converged;

    FileGuard file(config.out_dir / "sweep_summary.csv");
    std::ofstream& out = file.stream();
    out << header.str();
    out << "# columns: key,value\n";
    out << "min_H," << format_double(min_it->h_min) << "\n";
    out << "argmin_t," << format_double(min_it->t) << "\n";
    out << "t_last," << format_double(traj.points.back().t) << "\n";
    out << "H_last," << format_double(traj.points.back().h_min) << "\n";
    out << "zero_crossing," << (crossing ? format_double(*crossing) : "") << "\n";
    out << "slope_fit_first_100,"
        << (traj.points.size() >= 100 ? format_double(slope_fit(traj, 100)) : "")
        << "\n";
    out << "all_converged," << (all_converged ? 1 : 0) << "\n";
    file.commit();
  }
  if (config.svg) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(traj.points.size());
    for (const SweepPoint& p : traj.points) pts.emplace_back(p.t, p.h_min);
    std::ostringstream title;
    title << "minimized certificate, n=" << traj.n << ", m=" << traj.m;
    write_svg_line_chart(config.out_dir / "sweep.svg", pts, title.str());
  }
}

int cmd_sweep(const RunConfig& config, std::ostream& log) {
  const int m = require_finite_m(config.m, "sweep");
  if (config.n < 2) throw std::invalid_argument("sweep: n >= 2");
  const double n_d = static_cast<double>(config.n);
  const double t_from = config.t_from.value_or(1.0 / n_d);
  const double t_to = config.t_to.value_or(0.5);
  const SweepTrajectory traj =
      sweep_t(config.n, m, t_from, t_to, config.stride, config.simplex);
  write_sweep_files(traj, config);

  bool all_converged = true;
  for (const SweepPoint& p : traj.points) all_converged = all_converged && p.converged;
  log << "sweep: n=" << config.n << " m=" << m << " points=" << traj.points.size()
      << " H_last=" << traj.points.back().h_min
      << (all_converged ? "" : " (some points did not converge)") << "\n";
  return all_converged ? 0 : 1;
}

int cmd_analytic(const RunConfig& config, std::ostream& log) {
  std::vector<Threshold> ms;
  if (config.analytic_m == "all") {
    for (std::uint64_t m : {0ull, 1ull, 2ull, 3ull, 5ull, 10ull}) {
      ms.push_back(Threshold::finite(m));
    }
    ms.push_back(Threshold::infinity());
  } else if (config.analytic_m == "inf") {
    ms.push_back(Threshold::infinity());
  } else {
    try {
      ms.push_back(Threshold::finite(std::stoull(config.analytic_m)));
    } catch (const std::exception&) {
      throw std::invalid_argument("analytic: m must be a number, 'inf', or 'all'");
    }
  }

  std::ostringstream table;
  table << "m        gamma_m       c_m           out_degree    k_n(n=" << config.n
        << ")\n";
  std::vector<std::array<std::string, 5>> rows;
  for (Threshold m : ms) {
    std::array<std::string, 5> row;
    row[0] = threshold_str(m);
    row[1] = format_double(decay_rate(m));
    const bool has_exponent = m.is_infinite() || m.value() >= 1;
    row[2] = has_exponent ? format_double(failure_exponent(m)) : "-";
    row[3] = format_double(expected_out_degree(m));
    row[4] = (!m.is_infinite() && m.value() >= 1)
                 ? format_double(envelope_peak_k(static_cast<int>(m.value()),
                                                 static_cast<double>(config.n)))
                 : "-";
    rows.push_back(row);
    table << std::left << std::setw(9) << row[0] << std::setw(14) << row[1]
          << std::setw(14) << row[2] << std::setw(14) << row[3] << row[4] << "\n";
  }
  table << "H_sigma  " << format_double(rate_function(rate_maximizer())) << "\n";
  table << "lambda   " << format_double(growth_constant()) << "\n";
  log << table.str();

  if (config.out_dir != ".") {
    fs::create_directories(config.out_dir);
    FileGuard file(config.out_dir / "analytic.csv");
    std::ofstream& out = file.stream();
    write_version_line(out);
    out << "# command=analytic m=" << config.analytic_m << " n=" << config.n << "\n";
    out << "# columns: m,gamma,c,out_degree,k_n\n";
    for (const auto& row : rows) {
      out << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << ','
          << row[4] << "\n";
    }
    out << "H_sigma," << format_double(rate_function(rate_maximizer())) << "\n";
    out << "lambda," << format_double(growth_constant()) << "\n";
    file.commit();
  }
  return 0;
}

int cmd_moments(const RunConfig& config, std::ostream& log) {
  std::optional<int> m;
  if (!config.m.is_infinite()) m = static_cast<int>(config.m.value());
  const MomentReport report =
      moment_report(static_cast<double>(config.n), m, config.k, config.delta);

  fs::create_directories(config.out_dir);
  FileGuard file(config.out_dir / "moments.csv");
  std::ofstream& out = file.stream();
  write_version_line(out);
  out << "# command=moments n=" << config.n << " m=" << threshold_str(config.m);
  if (config.k) out << " k=" << *config.k;
  if (config.delta) out << " delta=" << format_double(*config.delta);
  out << "\n# columns: name,value\n";
  out << "n," << format_double(report.n) << "\n";
  if (report.m) out << "m," << *report.m << "\n";
  if (report.k) out << "k," << *report.k << "\n";
  auto emit = [&out](const char* name, const std::optional<double>& v) {
    if (v) out << name << ',' << format_double(*v) << "\n";
  };
  emit("log_Enk_bound", report.log_enk_bound);
  emit("log_Sk", report.log_sk_value);
  emit("log_E_Yn", report.log_e_yn_value);
  emit("H_sigma", report.h_sigma);
  emit("lambda", report.lambda);
  emit("log_Xk_bound", report.log_xk_bound_value);
  for (const std::string& flag : report.omitted_terms) {
    out << "omitted," << flag << "\n";
  }
  file.commit();

  log << "moments: n=" << config.n << " k=" << (report.k ? *report.k : -1);
  if (report.log_e_yn_value) log << " log_E_Yn=" << *report.log_e_yn_value;
  log << "\n";
  return 0;
}

SweepTrajectory read_sweep_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  SweepTrajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto npos = line.find(" n=");
      if (npos != std::string::npos) {
        traj.n = std::stoull(line.substr(npos + 3));
        const auto mpos = line.find(" m=");
        if (mpos != std::string::npos) traj.m = std::stoi(line.substr(mpos + 3));
      }
      continue;
    }
    SweepPoint p;
    int converged = 0;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg,%lg,%lg,%d", &p.t,
                    &p.vars.x, &p.vars.y, &p.vars.z, &p.vars.u, &p.rho,
                    &p.h_min, &converged) != 8) {
      throw std::runtime_error("malformed sweep row: " + line);
    }
    p.converged = converged != 0;
    traj.points.push_back(p);
  }
  return traj;
}

void write_svg_line_chart(const std::filesystem::path& file,
                          const std::vector<std::pair<double, double>>& points,
                          const std::string& title) {
  if (points.empty()) throw std::invalid_argument("svg: no points");
  constexpr int kWidth = 720, kHeight = 480, kMargin = 60;
  double x_min = points.front().first, x_max = points.front().first;
  double y_min = points.front().second, y_max = points.front().second;
  for (const auto& [x, y] : points) {
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  }
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;
  const double x_span = x_max - x_min, y_span = y_max - y_min;
  auto px = [&](double x) {
    return kMargin + (x - x_min) / x_span * (kWidth - 2 * kMargin);
  };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - y_min) / y_span * (kHeight - 2 * kMargin);
  };

  FileGuard guard(file);
  std::ofstream& out = guard.stream();
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  // Axes.
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin
      << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
      << kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  // Zero line when it is inside the range.
  if (y_min < 0.0 && y_max > 0.0) {
    out << "<line x1=\"" << kMargin << "\" y1=\"" << py(0.0) << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << py(0.0)
        << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  }
  // Range labels.
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(x_min)
      << "</text>\n";
  out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(x_max) << "</text>\n";
  out << "<text x=\"" << kMargin - 6 << "\" y=\"" << py(y_min)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(y_min) << "</text>\n";
  out << "<text x=\"" << kMargin - 6 << "\" y=\"" << py(y_max)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(y_max) << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : points) out << px(x) << ',' << py(y) << ' ';
  out << "\"/>\n</svg>\n";
  guard.commit();
}

}  // namespace bnm
