#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nvodmr/dynamics.hpp"
#include "nvodmr/params.hpp"
#include "nvodmr/spectroscopy.hpp"

namespace nvodmr::workbench {

// Bad or unreadable configuration. The message carries "source:line:column: " when
// the problem is tied to a place in the file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NoiseConfig {
  bool enabled = false;
  double scale = 1.0;
};

struct AnalysisConfig {
  int max_dips = 4;
};

struct SensitivityConfig {
  std::string mode = "fixed-frequency";  // or "splitting"
  std::optional<double> f_mw_hz;         // default D - Ex
  std::vector<double> amplitudes_t;      // response curve for the quadratic fit
  double operating_b_ac_t = 1e-6;
  std::vector<double> durations_s = {0.1, 1.0, 10.0, 100.0};
  int repeats = 400;
};

struct ValidateConfig {
  std::vector<std::string> checks = {"frame-identity", "resonances", "rwa-oracle", "conservation"};
  int rwa_grid_points = 21;
  int frame_samples = 100;
  int conservation_scenarios = 50;
};

struct ExperimentConfig {
  NvParams nv;
  RelaxationModel relaxation;
  DriveParams drive;
  SweepPlan sweep;
  Backend backend = Backend::RwaSteadyState;
  std::optional<std::uint64_t> seed;
  NoiseConfig noise;
  std::optional<LorentzianShape> lorentzian;
  OracleOptions oracle;
  AnalysisConfig analysis;
  SensitivityConfig sensitivity;
  ValidateConfig validate_checks;
  std::string output_dir = ".";

  // Sub-records valid; a seed is present whenever noise is enabled.
  void validate() const;
  SimulationOptions simulation_options() const;
};

// Parses YAML text. Unknown keys and wrong types are errors naming the line.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
// `name_or_path` is a file path, or the name of a bundled preset (e.g. "paper-fig2").
ExperimentConfig load_config(const std::string& name_or_path);
std::string preset_path(const std::string& name);

// Every resolved field as ("config.section.key", YAML scalar or flow sequence).
std::vector<std::pair<std::string, std::string>> flatten(const ExperimentConfig& c);
// Inverse of flatten: rebuilds the config from the embedded keys of an output file.
ExperimentConfig config_from_entries(const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace nvodmr::workbench
