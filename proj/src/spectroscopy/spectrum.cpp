#include <cmath>
#include <string>

#include "nvodmr/errors.hpp"
#include "nvodmr/spectroscopy.hpp"

namespace nvodmr {

std::string to_string(Backend b) {
  switch (b) {
    case Backend::FullOracle:
      return "full-oracle";
    case Backend::RwaSteadyState:
      return "rwa-steady-state";
    case Backend::LorentzianModel:
      return "lorentzian-model";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "full-oracle") return Backend::FullOracle;
  if (name == "rwa-steady-state") return Backend::RwaSteadyState;
  if (name == "lorentzian-model") return Backend::LorentzianModel;
  throw InvalidArgument("unknown backend '" + std::string(name) +
                        "' (expected full-oracle, rwa-steady-state or lorentzian-model)");
}

void Spectrum::validate() const {
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& pt = points[k];
    if (!std::isfinite(pt.f_mw_hz) || !std::isfinite(pt.signal) || !std::isfinite(pt.sigma)) {
      throw InvalidArgument("spectrum point " + std::to_string(k) + " is not finite");
    }
    if (pt.sigma < 0.0) throw InvalidArgument("spectrum point " + std::to_string(k) + ": sigma < 0");
    if (k > 0 && !(pt.f_mw_hz > points[k - 1].f_mw_hz)) {
      throw InvalidArgument("spectrum frequencies must be strictly increasing (point " +
                            std::to_string(k) + ")");
    }
  }
}

std::vector<double> Spectrum::frequencies() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(pt.f_mw_hz);
  return out;
}

std::vector<double> Spectrum::signals() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(pt.signal);
  return out;
}

std::vector<double> Spectrum::sigmas() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& pt : points) out.push_back(pt.sigma);
  return out;
}

double Spectrum::grid_step() const {
  if (points.size() < 2) return 0.0;
  return (points.back().f_mw_hz - points.front().f_mw_hz) / static_cast<double>(points.size() - 1);
}

void SweepPlan::validate() const {
  if (!std::isfinite(f_start_hz) || !std::isfinite(f_stop_hz) || !(f_start_hz < f_stop_hz)) {
    throw InvalidArgument("sweep: need finite f_start < f_stop");
  }
  if (n_points < 2) throw InvalidArgument("sweep: n_points must be at least 2");
  if (!(dwell_s > 0.0) || !std::isfinite(dwell_s)) {
    throw InvalidArgument("sweep: dwell must be positive");
  }
  for (double b : b_ac_t) {
    if (!std::isfinite(b)) throw InvalidArgument("sweep: non-finite AC amplitude");
  }
}

std::vector<double> SweepPlan::grid() const {
  validate();
  std::vector<double> f(static_cast<std::size_t>(n_points));
  const double step = (f_stop_hz - f_start_hz) / (n_points - 1);
  for (int k = 0; k < n_points; ++k) f[static_cast<std::size_t>(k)] = f_start_hz + k * step;
  f.back() = f_stop_hz;
  return f;
}

}  // namespace nvodmr
