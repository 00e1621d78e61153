#include <cmath>
#include <numbers>

#include "nvodmr/errors.hpp"
#include "nvodmr/spectroscopy.hpp"

namespace nvodmr {

LorentzianShape default_lorentzian_shape(const NvParams& p, const RelaxationModel& r,
                                         const DriveParams& d) {
  r.validate();
  // Coherence decay of one |0> <-> |B> or |0> <-> |D> transition: pumping and
  // relaxation out of the upper level, relaxation out of |0>, dephasing of the
  // upper level.
  const double decay = 0.5 * (r.gamma_pump_hz + r.gamma_2_hz + 3.0 * r.gamma_1_hz);
  const double b_line =
      std::sqrt(0.5 * (d.b_mw_t.x() * d.b_mw_t.x() + d.b_mw_t.y() * d.b_mw_t.y()));
  const double rabi = 2.0 * std::numbers::pi * p.gamma_e_hz_per_t * b_line;
  const double pump = std::max(r.gamma_pump_hz + r.gamma_1_hz, 1e-300);
  const double saturation = decay > 0.0 ? rabi * rabi / (pump * decay) : 0.0;

  LorentzianShape shape;
  shape.gamma_hz = decay * std::sqrt(1.0 + saturation) / (2.0 * std::numbers::pi);
  shape.depth = r.baseline * r.contrast * 0.5 * saturation / (1.0 + saturation);
  return shape;
}

double lorentzian_sum_model(double f_mw_hz, const NvParams& p, double b_ac_z_t, double gamma_hz,
                            double depth, double baseline, LineSet lines) {
  if (!(gamma_hz > 0.0)) throw InvalidArgument("lorentzian_sum_model: gamma must be positive");
  const double half_split = 0.5 * p.gamma_e_hz_per_t * b_ac_z_t;
  const double g2 = gamma_hz * gamma_hz;
  auto lorentz = [&](double center) {
    const double x = f_mw_hz - center;
    return 1.0 / (x * x + g2);
  };
  double f = 0.0;
  for (int j : {-1, 1}) f += lorentz(p.d_hz + j * half_split - p.ex_hz);
  if (lines == LineSet::FourLine) {
    for (int j : {-1, 1}) f += lorentz(p.d_hz + j * half_split + p.ex_hz);
  }
  return baseline - depth * g2 * f / 2.0;
}

}  // namespace nvodmr
