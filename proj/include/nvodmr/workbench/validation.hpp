#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nvodmr/workbench/config.hpp"

namespace nvodmr::workbench {

struct CheckResult {
  std::string name;
  bool passed = false;
  double metric = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

// Numerical U H U^dagger - (i/2pi) U dU^dagger/dt against the closed-form frame
// transform, for the microwave frame on the lab Hamiltonian and the strain-split
// frame on rwa_first. Metric: max element error relative to max(|U H U^dagger|, |G|).
CheckResult check_frame_identity(const ExperimentConfig& c, int samples, std::uint64_t seed,
                                 double tolerance = 1e-6);

// rwa-steady-state spectrum over the configured sweep, four-dip fit against
// predict_resonances. Metric: worst center error in Hz.
CheckResult check_resonances(const ExperimentConfig& c, double tolerance_hz = 5e3);

// rwa_second steady state against time-averaged lab-frame propagation on a uniform
// grid over the sweep range. Metric: worst absolute population difference.
CheckResult check_rwa_oracle(const ExperimentConfig& c, int grid_points,
                             double tolerance = 1e-2);

// Randomized propagate and steady_state scenarios; every output must satisfy the
// density-matrix tolerances. Metric: number of failing scenarios.
CheckResult check_conservation(int scenarios, std::uint64_t seed);

// Runs c.validate_checks.checks in order.
std::vector<CheckResult> run_validation(const ExperimentConfig& c);

// Random inputs for property tests and the conservation check.
struct ScenarioGenerator {
  explicit ScenarioGenerator(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi);
  Operator hermitian(double scale_hz);
  Ket ket();
  DensityMatrix density_matrix();
  RelaxationModel relaxation();
  TimeDependentOperator time_dependent(double static_scale_hz, double max_freq_hz, int harmonics);

  std::mt19937_64 rng;
};

}  // namespace nvodmr::workbench
