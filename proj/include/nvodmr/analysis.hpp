#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nvodmr/params.hpp"
#include "nvodmr/spectroscopy.hpp"

namespace nvodmr {

struct Dip {
  double center_hz = 0.0;
  double prominence = 0.0;  // depth below the spectrum baseline
};

// Local minima deeper than the threshold below the baseline (90th percentile of
// the working signal), sorted by prominence and truncated to max_dips. The threshold is
// 3x the median sigma, or 1% of the baseline for a noiseless spectrum. Noisy
// spectra are smoothed over five points first and a minimum must be separated from
// every deeper one by a rise of at least 2 sigma / sqrt(5).
// Throws InvalidArgument for fewer than 5 points and NoDipsFound when nothing qualifies.
std::vector<Dip> detect_dips(const Spectrum& s, int max_dips);

struct FittedDip {
  double center_hz = 0.0;
  double width_hz = 0.0;  // half width at half minimum
  double depth = 0.0;
};

// Model: baseline - sum_k depth_k w_k^2 / ((f - c_k)^2 + w_k^2).
// Parameter order for the covariance: baseline, then (center, width, depth) per dip.
struct FitResult {
  std::vector<FittedDip> dips;
  double baseline = 0.0;
  Eigen::MatrixXd covariance;
  double residual_norm = 0.0;  // unweighted, signal units
  double chi_square = 0.0;     // weighted sum of squares (unweighted when no sigma)
  int degrees_of_freedom = 0;
  bool weighted = false;
  bool converged = false;
  int iterations = 0;

  double evaluate(double f_hz) const;
  double center_sigma(std::size_t k) const;
  double center_covariance(std::size_t i, std::size_t j) const;
};

struct FitOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-8;
  // Extra randomized starts around the initial guess; the lowest cost wins.
  int restarts = 0;
  std::uint64_t seed = 0;
};

// Damped Gauss-Newton (Levenberg-Marquardt) fit of n_dips Lorentzian dips. The fit
// is weighted by 1/sigma^2 when every sigma is positive. Without `init` the start
// comes from detect_dips with widths of two grid steps.
FitResult fit_lorentzians(const Spectrum& s, int n_dips,
                          const std::optional<FitResult>& init = std::nullopt,
                          const FitOptions& options = {});

struct AcEstimate {
  double b_ac_t = 0.0;
  double sigma_t = 0.0;
  double splitting_hz = 0.0;        // mean splitting of the two line pairs
  double midpoint_mismatch_hz = 0.0;
};

// Sorted centers c1..c4 are paired (1,4) and (2,3) about a common midpoint;
// b = ((c4 - c1) - (c3 - c2)) / (2 gamma_e), valid while gamma_e b / 2 < Ex.
// Throws UnpairableDips unless there are exactly four converged dips whose pair
// midpoints agree within 3 combined sigma (floored at 5% of the mean width).
AcEstimate infer_b_ac_from_splitting(const FitResult& fit, const NvParams& p);

struct QuadraticFit {
  double a = 0.0;   // signal per tesla^2
  double s0 = 0.0;  // signal
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();  // over (a, s0)
  double residual_norm = 0.0;
  double reduced_residual_norm = 0.0;  // residual_norm / sqrt(n - 2)
};

// Least squares S = S0 + a B^2. Throws RankDeficient with fewer than 3 distinct
// amplitudes.
QuadraticFit quadratic_response_fit(const std::vector<std::pair<double, double>>& points);

struct NoiseFit {
  double c = 0.0;            // delta S = c / sqrt(T)
  double log_c_sigma = 0.0;  // standard error of log(c)
  double r_squared = 0.0;    // of the fixed-slope model in log space
  double log_slope = 0.0;    // free log-log slope
  double log_slope_sigma = 0.0;
  bool flagged = false;      // r_squared < 0.5: data do not follow 1/sqrt(T)
};

// Fits log(delta S) = log(c) - log(T)/2. Needs >= 3 distinct T; all inputs positive.
NoiseFit noise_vs_time_fit(const std::vector<std::pair<double, double>>& samples);

// Least-squares slope of log(y) against log(x), positive inputs only.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// delta B = c / slope in tesla / sqrt(Hz).
double estimate_sensitivity(double slope_per_tesla, double c);

struct SensitivityReport {
  std::string mode;  // "fixed-frequency" or "splitting"
  double slope = 0.0;
  double c = 0.0;
  double delta_b = 0.0;
  double delta_b_sigma = 0.0;
  double f_mw_hz = 0.0;
  double b_ac_t = 0.0;
  QuadraticFit quadratic;
  NoiseFit noise;
};

// Flat key=value report lines, stable key names.
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long long value);
  void add(const std::string& key, bool value);
  void add_fit(const std::string& prefix, const FitResult& fit);
  void add_sensitivity(const std::string& prefix, const SensitivityReport& r);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace nvodmr
