#pragma once

// Subcommand bodies shared by the ggp executable and the tests. Exit codes:
// 0 success, 1 check failed or parameters rejected, 2 configuration or usage
// error, 3 runtime failure.

#include "ggp/config.hpp"
#include "ggp/diagnostics.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace ggp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct ExponentsArgs {
  int n = 1;
  std::string p = "5";
  int mu = 1;
  bool json = false;
  bool allow_out_of_range = false;
};

int cmd_exponents(const ExponentsArgs& args, std::ostream& out, std::ostream& err);

/// Everything a single run produces.
struct RunResult {
  Trajectory trajectory;
  std::optional<ScatteringReport> scattering;
  std::string scattering_error;
  BlowupReport blowup;
  SmallnessCertificate certificate;
  double mass_drift = 0.0;    // max_t |M(t) - M(0)| / M(0)
  double energy_drift = 0.0;  // max_t |E(t) - E(0)| / |E(0)|, absolute when E(0) = 0
};

RunResult execute_run(const RunConfig& config);

std::string ledger_csv(const Trajectory& traj);
/// Columns t_k, inc_Hs0, inc_Hs1, xnorm_tail; row k holds the increment
/// ending at checkpoint t_k.
std::string increments_csv(const RunResult& result);
nlohmann::json report_json(const RunConfig& config, const RunResult& result);
nlohmann::json probe_json(const RunConfig& config, const RunResult& result);

/// Writes ledger.csv, report.json, increments.csv and optionally
/// checkpoint.bin into out_dir. Nothing is written unless the run succeeds.
int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir, std::ostream& err);
int cmd_probe(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);
/// Aggregated CSV, one row per run in axis order. Parallel width is
/// min(parallelism, GGP_THREADS) when the variable is set.
int cmd_sweep(const std::filesystem::path& config_path, const std::filesystem::path& out_csv, std::ostream& err);

std::string sweep_csv_header();
std::string sweep_csv_row(std::size_t index, const RunConfig& config, const RunResult& result);

}  // namespace ggp
