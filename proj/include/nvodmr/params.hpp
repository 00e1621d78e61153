#pragma once

#include <Eigen/Dense>

#include "nvodmr/spin.hpp"

namespace nvodmr {

// Ground-state spin parameters. The strain axis defines x, so E_y = 0 by default;
// a nonzero E_y is honoured only by nv_hamiltonian.
struct NvParams {
  double d_hz = 2.87e9;
  double ex_hz = 0.0;
  double ey_hz = 0.0;
  double gamma_e_hz_per_t = kGammaElectronHzPerTesla;

  void validate() const;
};

// Lab-frame drive: microwave B_mw cos(2 pi f_mw t) plus target field B_ac cos(2 pi f_ac t).
struct DriveParams {
  Eigen::Vector3d b_mw_t = Eigen::Vector3d::Zero();
  double f_mw_hz = 2.87e9;
  Eigen::Vector3d b_ac_t = Eigen::Vector3d::Zero();
  double f_ac_hz = 0.0;

  void validate() const;
  // Throws RegimeError unless f_ac < f_mw / 10.
  void check_regime() const;

  DriveParams with_f_mw(double f_mw_hz) const;
  DriveParams with_b_ac_z(double b_ac_z_t) const;
};

}  // namespace nvodmr
