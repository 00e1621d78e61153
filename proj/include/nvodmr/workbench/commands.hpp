#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nvodmr/analysis.hpp"
#include "nvodmr/workbench/config.hpp"
#include "nvodmr/workbench/validation.hpp"

namespace nvodmr::workbench {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidationFailed = 2;
inline constexpr int kExitNumerical = 3;

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend;
};

// Applies command-line overrides and re-validates.
void apply_overrides(ExperimentConfig& c, const Overrides& o);

struct SpectrumOutcome {
  Spectrum spectrum;
  std::vector<Dip> dips;
  std::optional<FitResult> fit;
  std::optional<AcEstimate> estimate;
  Report report;
  std::string csv_path;
  std::string report_path;
};

// spectrum.csv and spectrum_report.txt in c.output_dir.
SpectrumOutcome cmd_spectrum(const ExperimentConfig& c);

struct SweepRow {
  double b_ac_t = 0.0;
  int n_dips = 0;
  double splitting_hz = 0.0;  // mean splitting of the two line pairs, NaN unless 4 dips
};

struct SweepOutcome {
  std::vector<AmplitudeSpectrum> spectra;
  std::vector<SweepRow> rows;  // ascending amplitude
  std::optional<double> slope_hz_per_tesla;
  Report report;
  std::string heatmap_path;
  std::string report_path;
};

// sweep_heatmap.csv (b_ac_tesla,f_mw_hz,signal) and sweep_report.txt.
SweepOutcome cmd_sweep(const ExperimentConfig& c);

struct SensitivityOutcome {
  SensitivityReport result;
  std::vector<std::pair<double, double>> response;  // (B, S)
  std::vector<std::pair<double, double>> noise;     // (T, delta S)
  Report report;
  std::string report_path;
};

// sensitivity_report.txt. Needs noise enabled with a positive scale.
SensitivityOutcome cmd_sensitivity(const ExperimentConfig& c);

struct ValidateOutcome {
  std::vector<CheckResult> checks;
  bool passed = true;
  Report report;
  std::string report_path;
};

// validate_report.txt with one pass/fail entry per selected check.
ValidateOutcome cmd_validate(const ExperimentConfig& c);

struct FitOutcome {
  Spectrum spectrum;
  FitResult fit;
  std::optional<AcEstimate> estimate;
  std::string inference_error;
  Report report;
  std::string report_path;
};

// Fits an existing spectrum CSV. NV parameters come from `nv` when given, otherwise
// from the file's d_hz / ex_hz metadata. Writes fit_report.txt into out_dir.
FitOutcome cmd_fit(const std::string& csv_path, int n_dips, const std::optional<NvParams>& nv,
                   const std::string& out_dir);

}  // namespace nvodmr::workbench
