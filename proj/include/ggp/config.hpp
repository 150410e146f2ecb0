#pragma once

// JSON run and sweep configurations. Parsing is strict: unknown keys,
// wrong types, non-finite numbers and out-of-range values are errors.

#include "ggp/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ggp {

/// Any schema or value violation; the message starts with the JSON path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitType { gaussian, plane_wave_perturbation, theta_constant };
std::string_view name_of(InitType t);

/// gaussian:                  A exp(-|x|²/(2w²)) exp(i(ξ x_0 + φ))
/// plane_wave_perturbation:   A exp(i(ξ x_0 + φ)), ξ a grid wavenumber
/// theta_constant:            exp(iφ) - 1
struct InitSpec {
  InitType type = InitType::gaussian;
  double amplitude = 0.05;
  double width = 2.0;
  double frequency = 0.0;
  double phase = 0.0;
};

struct RunConfig {
  int n = 1;
  Rational p{5};
  int mu = 1;
  double length = 0.0;
  int samples = 0;
  InitSpec init;
  SolverConfig solver;
  std::vector<double> sigma_list;
  int checkpoints = 5;
  std::uint64_t seed = 1;
  bool write_checkpoint = false;

  ProblemParams params() const;
  GridPtr grid() const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
/// Reads and parses; malformed JSON is reported as ConfigError.
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

Field initial_field(const RunConfig& config, const GridPtr& grid);

struct SweepConfig {
  nlohmann::json base;  // run-config document the axes are applied to
  std::vector<std::string> p_axis;
  std::vector<int> mu_axis;
  std::vector<double> amplitude_axis;
  int parallelism = 1;
  int max_runs = 1024;

  /// Cross product in axis order p, mu, amplitude (amplitude fastest).
  std::vector<RunConfig> expand() const;
  std::size_t size() const;
};

SweepConfig parse_sweep_config(const nlohmann::json& doc);
SweepConfig load_sweep_config(const std::filesystem::path& path);

}  // namespace ggp
