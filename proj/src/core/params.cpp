#include "nvodmr/params.hpp"

#include <cmath>
#include <string>

#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

bool finite(const Eigen::Vector3d& v) { return v.allFinite(); }

}  // namespace

void NvParams::validate() const {
  require(std::isfinite(d_hz) && std::isfinite(ex_hz) && std::isfinite(ey_hz) &&
              std::isfinite(gamma_e_hz_per_t),
          "NvParams: non-finite parameter");
  require(d_hz > 0.0, "NvParams: D must be positive");
  require(ex_hz >= 0.0, "NvParams: Ex must be non-negative (strain axis defines +x)");
  require(gamma_e_hz_per_t > 0.0, "NvParams: gamma_e must be positive");
}

void DriveParams::validate() const {
  require(finite(b_mw_t) && finite(b_ac_t) && std::isfinite(f_mw_hz) && std::isfinite(f_ac_hz),
          "DriveParams: non-finite parameter");
  require(f_mw_hz > 0.0, "DriveParams: f_mw must be positive");
  require(f_ac_hz >= 0.0, "DriveParams: f_ac must be non-negative");
  require(f_ac_hz > 0.0 || b_ac_t.isZero(0.0),
          "DriveParams: f_ac = 0 means no AC field, but B_ac is nonzero");
}

void DriveParams::check_regime() const {
  if (!(f_ac_hz < f_mw_hz / 10.0)) {
    throw RegimeError("drive regime violated: need f_ac < f_mw / 10 (f_ac = " +
                      std::to_string(f_ac_hz) + " Hz, f_mw = " + std::to_string(f_mw_hz) +
                      " Hz)");
  }
}

DriveParams DriveParams::with_f_mw(double f) const {
  DriveParams out = *this;
  out.f_mw_hz = f;
  return out;
}

DriveParams DriveParams::with_b_ac_z(double b) const {
  DriveParams out = *this;
  out.b_ac_t = Eigen::Vector3d(0.0, 0.0, b);
  return out;
}

}  // namespace nvodmr
