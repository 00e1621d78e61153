#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nvodmr/dynamics.hpp"
#include "nvodmr/params.hpp"

namespace nvodmr {

enum class Backend { FullOracle, RwaSteadyState, LorentzianModel };

// "full-oracle", "rwa-steady-state", "lorentzian-model"
std::string to_string(Backend b);
Backend parse_backend(std::string_view name);

struct SpectrumPoint {
  double f_mw_hz = 0.0;
  double signal = 0.0;
  double sigma = 0.0;
};

struct SpectrumMeta {
  double b_ac_tesla = 0.0;
  double f_ac_hz = 0.0;
  double dwell_s = 1.0;
  std::uint64_t seed = 0;
  std::string backend;
  double d_hz = 0.0;
  double ex_hz = 0.0;
  // Anything else carried along in the CSV comment block, in file order.
  std::vector<std::pair<std::string, std::string>> extra;
};

struct Spectrum {
  std::vector<SpectrumPoint> points;
  SpectrumMeta meta;

  // Strictly increasing frequencies, finite values, sigma >= 0.
  void validate() const;
  std::vector<double> frequencies() const;
  std::vector<double> signals() const;
  std::vector<double> sigmas() const;
  double grid_step() const;
};

struct SweepPlan {
  double f_start_hz = 0.0;
  double f_stop_hz = 0.0;
  int n_points = 0;
  std::vector<double> b_ac_t;  // amplitudes along z for amplitude_sweep
  double dwell_s = 1.0;

  void validate() const;
  std::vector<double> grid() const;
};

enum class LineSet { TwoLine, FourLine };

struct LorentzianShape {
  double gamma_hz = 0.0;  // half width at half minimum
  double depth = 0.0;     // dip depth of a single line, signal units
  LineSet lines = LineSet::FourLine;
};

// Two-level saturation estimate of width and depth for one microwave-driven line.
LorentzianShape default_lorentzian_shape(const NvParams& p, const RelaxationModel& r,
                                         const DriveParams& d);

// baseline - depth * gamma^2 * F / 2 with
//   F = sum_{j=+-1} 1 / ((f - (D + j gamma_e b / 2 - Ex))^2 + gamma^2)
// for TwoLine, plus the matching +Ex pair for FourLine.
double lorentzian_sum_model(double f_mw_hz, const NvParams& p, double b_ac_z_t, double gamma_hz,
                            double depth, double baseline, LineSet lines = LineSet::FourLine);

struct OracleOptions {
  double settle_s = 12e-6;          // transient discarded before averaging
  int steps_per_mw_cycle = 128;     // RK4 steps per microwave period
  int average_ac_periods = 2;       // averaging window in units of 1/f_ac
};

struct SimulationOptions {
  OracleOptions oracle;
  std::optional<LorentzianShape> shape;  // lorentzian-model override
};

// Populations in the {|0>, |B>, |D>} basis. These are unchanged by both rotating
// frames, so backends can be compared on them directly.
struct Populations {
  double zero = 0.0;
  double bright = 0.0;
  double dark = 0.0;
};

Populations populations(const DensityMatrix& rho);

// Steady state of rwa_second: static frame when one exists, otherwise the
// periodic steady state averaged over 2 / f_ac.
DensityMatrix rwa_steady_state(const NvParams& p, const RelaxationModel& r, const DriveParams& d);

// Lab-frame propagation from |0><0|, time averaged after settling.
DensityMatrix oracle_average_state(const NvParams& p, const RelaxationModel& r,
                                   const DriveParams& d, const OracleOptions& options = {});

// Noiseless PL at d.f_mw_hz.
double simulate_signal(const NvParams& p, const RelaxationModel& r, const DriveParams& d,
                       Backend backend, const SimulationOptions& options = {});

// The AC amplitude comes from d (plan.b_ac_t is ignored here).
Spectrum simulate_spectrum(const NvParams& p, const RelaxationModel& r, const DriveParams& d,
                           const SweepPlan& plan, Backend backend,
                           const SimulationOptions& options = {});

struct AmplitudeSpectrum {
  double b_ac_t = 0.0;
  Spectrum spectrum;
};

// One spectrum per plan.b_ac_t entry; the AC field is applied along z.
std::vector<AmplitudeSpectrum> amplitude_sweep(const NvParams& p, const RelaxationModel& r,
                                               const DriveParams& d, const SweepPlan& plan,
                                               Backend backend,
                                               const SimulationOptions& options = {});

// Gaussian shot noise with sigma = scale * sqrt(signal / dwell). Point k draws from
// a generator seeded by (seed, k) so results do not depend on evaluation order.
Spectrum add_shot_noise(const Spectrum& s, std::uint64_t seed, double scale = 1.0);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// n independent readings of a point with noiseless value `signal` integrated for
// dwell_s each; the standard deviation of these is the fluctuation delta S.
std::vector<double> repeated_readings(double signal, double dwell_s, int n, std::uint64_t seed,
                                      double scale = 1.0);
double sample_std(const std::vector<double>& values);

// CSV: '#key=value' comment lines, then header f_mw_hz,signal,sigma.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
std::string spectrum_csv(const Spectrum& s);
// Throws SchemaError with the 1-based line number of the offending row.
Spectrum read_spectrum_csv(std::istream& in);

// Round-trip safe decimal form (17 significant digits).
std::string format_double(double v);

}  // namespace nvodmr
