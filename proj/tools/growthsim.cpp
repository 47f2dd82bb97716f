// growthsim: run a growth scenario and emit worldline tracks, balance
// residual reports, and current-balance reports.
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "xcal/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"growthsim: worldlines, balance residuals, current balances"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario;
  double ode_step = 0.0;
  int quad_order = 0;
  int subcells = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  int bump_count = 0;
  int sample_count = 0;
  double perturb_sigma = 0.0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--scenario", scenario, "scenario name");
    cmd->add_option("--ode-step", ode_step, "worldline integrator step");
    cmd->add_option("--quad-order", quad_order, "Gauss points per axis");
    cmd->add_option("--subcells", subcells, "quadrature subdivisions per axis");
    cmd->add_option("--seed", seed, "RNG seed for sampling and probes");
    cmd->add_option("--out-dir", out_dir, "output directory");
    cmd->add_option("--bump-count", bump_count, "number of probe bumps");
    cmd->add_option("--sample-count", sample_count, "residual sample points");
    cmd->add_option("--perturb-sigma", perturb_sigma,
                    "deliberate defect added to the supply");
  };
  CLI::App* wl =
      app.add_subcommand("worldlines", "integrate worldlines to CSV and SVG");
  CLI::App* bal =
      app.add_subcommand("balance", "pointwise and region balance report");
  CLI::App* cur = app.add_subcommand("currents", "current-balance report");
  add_common(wl);
  add_common(bal);
  add_common(cur);

  CLI11_PARSE(app, argc, argv);
  CLI::App* active = app.get_subcommands().front();

  xcal::cli::RunConfig cfg;
  try {
    if (active->count("--config")) cfg = xcal::cli::load_config_file(config_path);
    if (active->count("--scenario")) cfg.scenario = scenario;
    if (active->count("--ode-step")) cfg.ode_step = ode_step;
    if (active->count("--quad-order")) {
      cfg.quad_order = quad_order;
      cfg.quad_order_given = true;
    }
    if (active->count("--subcells")) {
      cfg.subcells = subcells;
      cfg.subcells_given = true;
    }
    if (active->count("--seed")) cfg.rng_seed = seed;
    if (active->count("--out-dir")) cfg.out_dir = out_dir;
    if (active->count("--bump-count")) cfg.bump_count = bump_count;
    if (active->count("--sample-count")) cfg.sample_count = sample_count;
    if (active->count("--perturb-sigma")) cfg.perturb_sigma = perturb_sigma;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  xcal::cli::CommandResult res;
  if (active == wl) res = xcal::cli::cmd_worldlines(cfg);
  else if (active == bal) res = xcal::cli::cmd_balance(cfg);
  else res = xcal::cli::cmd_currents(cfg);

  std::cout << res.report.dump(2) << "\n";
  return res.exit_code;
}
