// Command-line front end: exponents, simulate, probe, sweep.

#include "ggp/commands.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the generalized Gross-Pitaevskii equation with non-vanishing boundary condition"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");

  ggp::ExponentsArgs ex;
  auto* exponents = app.add_subcommand("exponents", "Exact exponents, pair points and identity checks");
  exponents->add_option("--n", ex.n, "Spatial dimension")->required()->check(CLI::IsMember({1, 2}));
  exponents->add_option("--p", ex.p, "Power as a rational, e.g. 7/2")->required();
  exponents->add_option("--mu", ex.mu, "Sign of the nonlinearity")->check(CLI::IsMember({1, -1}));
  exponents->add_flag("--json", ex.json, "Emit JSON");
  exponents->add_flag("--allow-out-of-range", ex.allow_out_of_range, "Report p outside the admissible range");

  std::string config;
  std::string out = "run";
  auto* simulate = app.add_subcommand("simulate", "Run one configuration and write ledger, increments and report");
  simulate->add_option("config", config, "Run configuration (JSON)")->required();
  simulate->add_option("-o,--out", out, "Output directory");

  auto* probe = app.add_subcommand("probe", "Smallness certificate and scattering verdict as JSON");
  probe->add_option("config", config, "Run configuration (JSON)")->required();

  std::string sweep_out = "sweep.csv";
  auto* sweep = app.add_subcommand("sweep", "Cross-product sweep, one CSV row per run");
  sweep->add_option("config", config, "Sweep configuration (JSON)")->required();
  sweep->add_option("-o,--out", sweep_out, "Aggregated CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ggp::kExitConfig;
  }
  if (quiet) spdlog::set_level(spdlog::level::err);

  if (*exponents) return ggp::cmd_exponents(ex, std::cout, std::cerr);
  if (*simulate) return ggp::cmd_simulate(config, out, std::cerr);
  if (*probe) return ggp::cmd_probe(config, std::cout, std::cerr);
  if (*sweep) return ggp::cmd_sweep(config, sweep_out, std::cerr);
  return ggp::kExitConfig;
}
