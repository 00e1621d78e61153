#include <algorithm>
#include <cmath>
#include <sstream>

#include "nvodmr/analysis.hpp"

namespace nvodmr {

void Report::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void Report::add(const std::string& key, double value) { add(key, format_double(value)); }

void Report::add(const std::string& key, long long value) { add(key, std::to_string(value)); }

void Report::add(const std::string& key, bool value) {
  add(key, std::string(value ? "true" : "false"));
}

void Report::add_fit(const std::string& prefix, const FitResult& fit) {
  add(prefix + "n_dips", static_cast<long long>(fit.dips.size()));
  add(prefix + "converged", fit.converged);
  add(prefix + "iterations", static_cast<long long>(fit.iterations));
  add(prefix + "baseline", fit.baseline);
  add(prefix + "residual_norm", fit.residual_norm);
  add(prefix + "chi_square", fit.chi_square);
  add(prefix + "weighted", fit.weighted);
  for (std::size_t k = 0; k < fit.dips.size(); ++k) {
    const std::string p = prefix + "dip" + std::to_string(k + 1) + ".";
    add(p + "center_hz", fit.dips[k].center_hz);
    add(p + "center_sigma_hz", fit.center_sigma(k));
    add(p + "width_hz", fit.dips[k].width_hz);
    add(p + "depth", fit.dips[k].depth);
  }
}

void Report::add_sensitivity(const std::string& prefix, const SensitivityReport& r) {
  add(prefix + "mode", r.mode);
  add(prefix + "f_mw_hz", r.f_mw_hz);
  add(prefix + "b_ac_tesla", r.b_ac_t);
  add(prefix + "slope_per_tesla", r.slope);
  add(prefix + "noise_c", r.c);
  add(prefix + "delta_b_tesla_per_sqrt_hz", r.delta_b);
  add(prefix + "delta_b_sigma", r.delta_b_sigma);
  if (r.mode == "fixed-frequency") {
    add(prefix + "quadratic.a", r.quadratic.a);
    add(prefix + "quadratic.s0", r.quadratic.s0);
    add(prefix + "quadratic.a_sigma", std::sqrt(std::max(r.quadratic.covariance(0, 0), 0.0)));
    add(prefix + "quadratic.reduced_residual_norm", r.quadratic.reduced_residual_norm);
  }
  add(prefix + "noise.r_squared", r.noise.r_squared);
  add(prefix + "noise.log_slope", r.noise.log_slope);
  add(prefix + "noise.log_slope_sigma", r.noise.log_slope_sigma);
  add(prefix + "noise.flagged", r.noise.flagged);
}

std::string Report::str() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
  return out.str();
}

}  // namespace nvodmr
