#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "bnm/cli.hpp"
#include "bnm/version.hpp"

namespace {

bnm::Threshold parse_threshold(const std::string& text) {
  if (text == "inf" || text == "infinity") return bnm::Threshold::infinity();
  try {
    return bnm::Threshold::finite(std::stoull(text));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--m", "expected a non-negative integer or 'inf'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random bipartite digraph experiments: simulation, certificate "
               "sweeps, analytic constants, moment bounds"};
  app.set_version_flag("--version", std::string("bnm ") + bnm::kVersion);
  app.require_subcommand(1);

  bnm::RunConfig config;
  std::string m_text = "1";
  double t_from = -1.0, t_to = -1.0, delta = -1.0;
  std::int64_t k = -1;
  std::string out_dir = ".";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--n", config.n, "side size");
    cmd->add_option("--m", m_text, "unpopularity threshold (integer or 'inf')");
    cmd->add_option("--seed", config.seed, "base seed");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo matching trials");
  add_common(simulate);
  simulate->add_option("--trials", config.trials, "number of trials");

  CLI::App* sweep = app.add_subcommand("sweep", "minimize the certificate over the t-grid");
  add_common(sweep);
  sweep->add_option("--t-from", t_from, "first grid t (default 1/n)");
  sweep->add_option("--t-to", t_to, "last grid t (default 1/2)");
  sweep->add_option("--stride", config.stride, "grid stride in k");
  sweep->add_option("--func-tol", config.simplex.func_tol, "simplex value tolerance");
  sweep->add_option("--opt-tol", config.simplex.opt_tol, "simplex diameter tolerance");
  sweep->add_option("--max-iters", config.simplex.max_iters, "iteration budget");
  sweep->add_option("--penalty", config.simplex.penalty_p, "penalty weight");
  sweep->add_flag("--svg", config.svg, "also write an SVG line chart");

  CLI::App* analytic = app.add_subcommand("analytic", "closed-form constants table");
  analytic->add_option("--m", config.analytic_m, "threshold, 'inf', or 'all'");
  analytic->add_option("--n", config.n, "side size used for the envelope peak");
  analytic->add_option("--out", out_dir, "output directory for analytic.csv");

  CLI::App* moments = app.add_subcommand("moments", "log-space moment report");
  add_common(moments);
  moments->add_option("--k", k, "deficient-set size");
  moments->add_option("--delta", delta, "size exponent, k = floor(n^delta)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  config.out_dir = out_dir;
  if (t_from >= 0.0) config.t_from = t_from;
  if (t_to >= 0.0) config.t_to = t_to;
  if (delta >= 0.0) config.delta = delta;
  if (k >= 0) config.k = k;

  try {
    if (!app.get_subcommands().empty() && app.get_subcommands()[0] != analytic) {
      config.m = parse_threshold(m_text);
    }
    if (simulate->parsed()) return bnm::cmd_simulate(config, std::cout);
    if (sweep->parsed()) return bnm::cmd_sweep(config, std::cout);
    if (analytic->parsed()) return bnm::cmd_analytic(config, std::cout);
    if (moments->parsed()) return bnm::cmd_moments(config, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
